import random

import pytest

from hnnconj.words import (
    Alphabet,
    BadLetterError,
    concat,
    cyclic_reduce,
    cyclic_word,
    free_conjugacy,
    invert,
    is_primitive,
    power,
    reduce,
    root,
    whitehead_minimize,
)

A2 = Alphabet(2)
A3 = Alphabet(3)


def rand_word(rng, rank, length):
    letters = []
    for _ in range(length):
        letters.append(rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]))
    return tuple(letters)


# -- parsing -----------------------------------------------------------------


def test_parse_roundtrip():
    w = A2.parse("abAB")
    assert w == (1, 2, -1, -2)
    assert A2.format(w) == "abAB"
    assert A2.parse("1") == ()
    assert A2.parse("") == ()
    assert A2.format(()) == "1"


def test_parse_reduces():
    assert A2.parse("aA") == ()
    assert A2.parse("abBa") == (1, 1)


def test_parse_rejects_stable_letter():
    with pytest.raises(BadLetterError):
        A2.parse("at")
    with pytest.raises(BadLetterError):
        A2.parse("T")


def test_parse_rejects_out_of_range():
    with pytest.raises(BadLetterError):
        A2.parse("ac")


# -- reduction ---------------------------------------------------------------


def test_reduce_examples():
    assert reduce((1, -1)) == ()
    assert reduce((1, 2, -2, 1)) == (1, 1)


def test_reduce_involution_random():
    rng = random.Random(7)
    for _ in range(50):
        w = rand_word(rng, 2, 20)
        assert reduce(w + invert(reduce(w))) == ()


def test_reduce_idempotent_and_shorter():
    rng = random.Random(8)
    for _ in range(100):
        w = rand_word(rng, 3, 12)
        r = reduce(w)
        assert reduce(r) == r
        assert len(r) <= len(w)


# -- cyclic reduction ----------------------------------------------------------


def test_cyclic_reduce_examples():
    core, conj = cyclic_reduce(A2.parse("baB"))
    assert core == (1,) and conj == (-2,)
    core, conj = cyclic_reduce(A2.parse("ab"))
    assert core == (1, 2) and conj == ()


def test_cyclic_reduce_reassembles():
    rng = random.Random(9)
    for _ in range(100):
        w = reduce(rand_word(rng, 3, 14))
        core, conj = cyclic_reduce(w)
        assert concat(invert(conj), core, conj) == w
        assert not core or core[0] != -core[-1]


# -- conjugacy ----------------------------------------------------------------


def test_free_conjugacy_examples():
    x = free_conjugacy(A2.parse("ab"), A2.parse("ba"))
    assert x is not None
    assert concat(invert(x), A2.parse("ba"), x) == A2.parse("ab")
    assert free_conjugacy((1,), (2,)) is None


def test_free_conjugacy_construct_then_check():
    rng = random.Random(10)
    for _ in range(200):
        v = reduce(rand_word(rng, 2, 8))
        x = reduce(rand_word(rng, 2, 5))
        u = concat(invert(x), v, x)
        w = free_conjugacy(u, v)
        assert w is not None
        assert concat(invert(w), v, w) == u


def test_free_conjugacy_equivalence():
    rng = random.Random(11)
    for _ in range(50):
        u = reduce(rand_word(rng, 2, 6))
        # reflexive with identity-ish witness
        x = free_conjugacy(u, u)
        assert x is not None and concat(invert(x), u, x) == u
        v = concat(invert(reduce(rand_word(rng, 2, 3))), u, reduce(rand_word(rng, 2, 3)))
        xy = free_conjugacy(u, v)
        yx = free_conjugacy(v, u)
        assert xy is not None and yx is not None
        # symmetric witness inverts
        assert concat(invert(invert(xy)), u, invert(xy)) == v


# -- roots ---------------------------------------------------------------------


def test_root_examples():
    assert root(A2.parse("abab")) == (A2.parse("ab"), 2)
    assert root(A2.parse("ab")) == (A2.parse("ab"), 1)
    r, e = root(A2.parse("baaaB"))
    assert (r, e) == (A2.parse("baB"), 3)
    assert power(r, e) == A2.parse("baaaB")


def test_root_brute_force_periods():
    rng = random.Random(12)
    for _ in range(100):
        w = reduce(rand_word(rng, 2, 6))
        if not w:
            continue
        r, e = root(w)
        assert power(r, e) == w
        core, _ = cyclic_reduce(w)
        assert len(core) % e == 0
        rr, ee = root(r)
        assert ee == 1


def test_root_rejects_identity():
    with pytest.raises(ValueError):
        root(())


# -- primitivity -----------------------------------------------------------------


def test_primitive_examples():
    assert is_primitive((1,), 2)
    assert not is_primitive((1, 1), 2)
    assert not is_primitive(A2.parse("aabAB"), 2)
    assert is_primitive(A2.parse("ab"), 2)
    assert not is_primitive(A2.parse("abAB"), 2)


def test_primitive_rank_one():
    assert is_primitive((1,), 1)
    assert is_primitive((-1,), 1)
    assert not is_primitive((1, 1), 1)


def test_primitive_preserved_by_nielsen_images():
    # images of a primitive under a few random elementary Nielsen moves
    rng = random.Random(13)
    from hnnconj.words import apply_images

    for _ in range(25):
        images = [(1,), (2,)]
        w = (1,)
        for _ in range(rng.randrange(1, 5)):
            kind = rng.randrange(4)
            if kind == 0:
                images = [apply_images(images, x) for x in [(1, 2), (2,)]]
            elif kind == 1:
                images = [apply_images(images, x) for x in [(2,), (1,)]]
            elif kind == 2:
                images = [apply_images(images, x) for x in [(-1,), (2,)]]
            else:
                images = [apply_images(images, x) for x in [(2, 1), (2,)]]
        w = apply_images(images, (1,))
        assert is_primitive(w, 2)


def test_whitehead_minimize_reaches_length_one():
    # aabAB is the commutator-shifted word; its orbit minimum is length > 1
    assert len(whitehead_minimize(A2.parse("abAB"), 2)) == 4
    assert len(whitehead_minimize(A2.parse("aabAB"), 2)) > 1
    assert len(whitehead_minimize(A2.parse("abb"), 2)) == 1
