"""Matroid ports as ideal access structures.

A matroid with a designated secret element induces an access structure:
a coalition is qualified when adding the secret costs it nothing.  This
script builds the (2,2)-threshold from U_{2,3}, checks the realization
equations, dualizes everything, and sizes up the port of the 175-atom
expansion.
"""

from polyshare import (
    dual,
    dual_structure,
    helgason_expand,
    is_qualified,
    matroid_port,
    minimal_qualified,
    realizes,
    sigma,
    subset_format,
    threshold_structure,
    tighten,
    uniform_matroid,
    validate_polymatroid,
)
from polyshare.core import rank_vector_from_json
from polyshare.reproduce import fixture_doc


def describe(name, A):
    sets = [subset_format(A.participants, m) for m in minimal_qualified(A)]
    print(f"  {name}: participants {','.join(A.participants.labels)}, "
          f"minimal qualified {sets}")


def main():
    M = uniform_matroid(2, ("s", "p", "q"))
    A = matroid_port(M, "s")
    print("U_{2,3} with secret s:")
    describe("port", A)
    print("  equals the 2-out-of-2 threshold:",
          A == threshold_structure(2, ("p", "q")))

    ok, _ = realizes(M, A, "s")
    print("  U_{2,3} realizes its own port:", ok)
    print("  share-to-secret ratio sigma =", sigma(M, "s"), "(ideal)")

    # dual structure: complements of unqualified sets
    Ad = dual_structure(A)
    describe("dual port", Ad)
    print("  matches the port of the dual matroid:",
          Ad == matroid_port(dual(M), "s"))

    print("\nthresholds dualize by k -> n-k+1:")
    for k in (1, 2, 3):
        D = dual_structure(threshold_structure(k, ("p", "q", "r")))
        assert D == threshold_structure(3 - k + 1, ("p", "q", "r"))
        print(f"  dual of {k}-of-3 = {3 - k + 1}-of-3")

    # a port too large to tabulate: 174 participants, queried by oracle
    base = tighten(validate_polymatroid(
        rank_vector_from_json(fixture_doc("table2_middle.json"))))
    E = helgason_expand(base)
    P = matroid_port(E, "a_1")
    blocks = {l: tuple(f"{l}_{i}" for i in range(1, s + 1))
              for l, s in zip(base.ground.labels, E.block_sizes)}
    coalition = lambda *ls: P.participants.mask_of(
        [x for l in ls for x in blocks[l]])
    print(f"\nport of the big expansion at secret a_1: "
          f"{P.participants.n} participants")
    print("  block d alone qualified:", is_qualified(P, coalition("d")))
    print("  blocks b,c,d together:  ", is_qualified(P, coalition("b", "c", "d")))
    print("  blocks b,c,d,e together:", is_qualified(P, coalition("b", "c", "d", "e")))
    print("  sigma of the expansion =", sigma(E, 'a_1'),
          "(every atom carries one unit)")


if __name__ == "__main__":
    main()
