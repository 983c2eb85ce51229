import itertools
import random

import pytest

from hnnconj.stallings import SubgroupSystem, carries, conjugate_into, fold, pullback
from hnnconj.words import Alphabet, concat, invert, reduce

A2 = Alphabet(2)


def rand_word(rng, rank, length):
    return reduce(
        rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
        for _ in range(length)
    )


def subgroup_elements(gens, max_factors):
    """Brute-force oracle: all products of at most max_factors generators."""
    seen = {(): None}
    frontier = [()]
    sym = [g for g in gens if g] + [invert(g) for g in gens if g]
    for _ in range(max_factors):
        nxt = []
        for w in frontier:
            for s in sym:
                p = concat(w, s)
                if p not in seen:
                    seen[p] = None
                    nxt.append(p)
        frontier = nxt
    return set(seen)


# -- folding -------------------------------------------------------------------


def test_fold_examples():
    g = fold([A2.parse("aa"), A2.parse("ab")], 2)
    assert g.n_vertices == 2
    assert g.rank() == 2

    single = fold([A2.parse("a")], 2)
    assert single.n_vertices == 1 and single.n_edges == 1

    w = A2.parse("abA")
    assert fold([w, invert(w)], 2).canonical_key() == fold([w], 2).canonical_key()


def test_fold_confluent_under_permutation():
    rng = random.Random(21)
    for _ in range(20):
        gens = [rand_word(rng, 2, rng.randrange(1, 6)) for _ in range(3)]
        base = fold(gens, 2).canonical_key()
        for perm in itertools.permutations(gens):
            assert fold(list(perm), 2).canonical_key() == base


def test_fold_empty_is_trivial():
    g = fold([], 2)
    assert g.is_trivial() and g.rank() == 0


# -- membership -----------------------------------------------------------------


def test_membership_examples():
    g = fold([A2.parse("aa"), A2.parse("ab")], 2)
    assert g.membership(A2.parse("aa")) is not None
    assert g.membership(A2.parse("a")) is None
    wit = g.membership(())
    assert wit is not None and wit.indices == ()


def test_membership_witness_evaluates():
    rng = random.Random(22)
    for _ in range(30):
        gens = [rand_word(rng, 2, rng.randrange(1, 6)) for _ in range(2)]
        g = fold(gens, 2)
        basis = g.schreier_basis()
        for el in list(subgroup_elements(gens, 4))[:40]:
            wit = g.membership(el)
            assert wit is not None
            assert wit.evaluate(basis) == el


def test_membership_agrees_with_brute_force():
    rng = random.Random(23)
    for _ in range(20):
        rank = rng.choice([2, 3])
        gens = [rand_word(rng, rank, rng.randrange(1, 5)) for _ in range(rng.randrange(1, 3))]
        g = fold(gens, rank)
        elements = subgroup_elements(gens, 8)
        for el in elements:
            assert g.membership(el) is not None
        for _ in range(30):
            w = rand_word(rng, rank, rng.randrange(0, 7))
            if g.membership(w) is None:
                assert w not in elements


# -- rank ------------------------------------------------------------------------


def test_rank_examples():
    assert fold([(1,), (2,)], 2).rank() == 2
    assert fold([A2.parse("aa"), A2.parse("ab")], 2).rank() == 2
    assert fold([], 2).rank() == 0
    assert len(fold([A2.parse("aa"), A2.parse("ab")], 2).schreier_basis()) == 2


# -- pullback ---------------------------------------------------------------------


def test_pullback_trivial_intersection():
    assert pullback(fold([(1,)], 2), fold([(2,)], 2)) == []


def test_pullback_index_two_conjugate():
    # <a^2, b> is normal of index 2, so its intersection with the a-conjugate
    # is itself: a rank-2 graph; intersecting with <a b a^-1-shifted> data:
    gens = [A2.parse("aa"), A2.parse("b")]
    shifted = [concat(A2.parse("a"), g, A2.parse("A")) for g in gens]
    inter = pullback(fold(gens, 2), fold(shifted, 2))
    assert len(inter) == 1
    # index-2 normal subgroup: intersection is the subgroup itself, rank 2;
    # Nielsen-Schreier for the index-2 case gives 2*(2-1)+1 = 3 only for the
    # full preimage; here the intersection is <a^2, b, aba^-1> of rank 3
    assert inter[0].rank() == 3


def test_pullback_diagonal_carries_self():
    g = fold([A2.parse("aa"), A2.parse("ab")], 2, based=False)
    comps = pullback(g, g)
    sys_g = SubgroupSystem.from_graphs([g])
    assert any(carries(sys_g, SubgroupSystem.from_graphs([c]))[0] for c in comps)
    ok, _ = carries(SubgroupSystem.from_graphs(comps), sys_g)
    assert ok


def test_pullback_membership_conjunction():
    rng = random.Random(24)
    for _ in range(15):
        gens_g = [rand_word(rng, 2, rng.randrange(1, 5)) for _ in range(2)]
        gens_h = [rand_word(rng, 2, rng.randrange(1, 5)) for _ in range(2)]
        G, H = fold(gens_g, 2), fold(gens_h, 2)
        P = pullback(G, H)
        probes = set()
        probes.update(subgroup_elements(gens_g, 4))
        probes.update(subgroup_elements(gens_h, 4))
        for _ in range(20):
            probes.add(rand_word(rng, 2, rng.randrange(0, 8)))
        for w in probes:
            both = G.membership(w) is not None and H.membership(w) is not None
            in_p = bool(P) and P[0].membership(w) is not None
            assert in_p == both


# -- conjugate_into / carries -------------------------------------------------------


def test_conjugate_into_examples():
    G = fold([A2.parse("aa")], 2, based=False)
    z = conjugate_into(A2.parse("BaaB".replace("B", "B")), G)  # b^-1 a^2 b
    w = A2.parse("Baab")
    z = conjugate_into(w, G)
    assert z is not None
    # z w z^-1 must be a loop at the anchor (vertex 0)
    assert G.trace(concat(z, w, invert(z)), 0) == 0

    assert conjugate_into(A2.parse("ab"), G) is None
    assert conjugate_into(A2.parse("aa"), G) == ()


def test_conjugate_into_brute_force_absence():
    rng = random.Random(25)
    G = fold([A2.parse("aa")], 2, based=False)
    based = fold([A2.parse("aa")], 2, based=True)
    for length in range(0, 7):
        for _ in range(20):
            x = rand_word(rng, 2, length)
            w = A2.parse("ab")
            assert based.membership(concat(x, w, invert(x))) is None


def test_carries_examples():
    sys_a = SubgroupSystem.from_graphs([fold([(1,)], 2, based=False)])
    sys_a2 = SubgroupSystem.from_graphs([fold([(1, 1)], 2, based=False)])
    sys_b = SubgroupSystem.from_graphs([fold([(2,)], 2, based=False)])
    assert carries(sys_a, sys_a)[0]
    assert carries(sys_a, sys_a2)[0]
    assert not carries(sys_a2, sys_a)[0]
    assert not carries(sys_a, sys_b)[0]


def test_carries_conjugator_witness():
    A = fold([A2.parse("aa")], 2, based=False)
    B = fold([A2.parse("Baab")], 2, based=False)
    ok, assigns = carries(SubgroupSystem.from_graphs([A]), SubgroupSystem.from_graphs([B]))
    assert ok
    idx, x = assigns[0]
    # component B is inside x A x^-1:每 generator of B conjugates into A
    based_a = fold([A2.parse("aa")], 2, based=True)
    for gen in fold([A2.parse("Baab")], 2).schreier_basis():
        pass  # generator-level check exercised in dynamics tests


# -- cyclic components ---------------------------------------------------------------


def test_cycle_word():
    c = fold([A2.parse("aa")], 2, based=False)
    assert c.is_cycle()
    assert c.cycle_word() in ((1, 1), (-1, -1))


def test_dot_export():
    g = fold([A2.parse("ab")], 2)
    text = g.dot("test")
    assert text.startswith("digraph test {")
    assert "doublecircle" in text
    assert 'label="a"' in text
