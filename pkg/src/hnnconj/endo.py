"""Endomorphisms of a free group: application, injectivity, the Nielsen
retraction onto a maximal injective free factor, and bounded probes of the
iterated images.

An endomorphism is stored by its basis images.  Injectivity is decided by
folding the image tuple and comparing ranks (sound by Hopficity of free
groups).  Inversion on the image subgroup is realised by Nielsen-reducing
the traced generator tuple with a recorded automorphism, which turns a
Schreier-basis membership witness into an explicit preimage word.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .decision import SizeCapExceeded
from .stallings import CoreGraph, fold, pullback
from .words import Word, apply_images, concat, invert, reduce


@dataclass(frozen=True)
class Endomorphism:
    rank: int
    images: tuple

    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.images) != self.rank:
            raise ValueError("need exactly one image per generator")
        object.__setattr__(self, "images", tuple(reduce(w) for w in self.images))
        for w in self.images:
            for letter in w:
                if abs(letter) > self.rank:
                    raise ValueError(f"image letter {letter} outside rank {self.rank}")

    # -- basic algebra ---------------------------------------------------

    @property
    def norm(self) -> int:
        """Word norm: the maximal basis-image length."""
        return max((len(w) for w in self.images), default=0)

    def apply(self, word: Word) -> Word:
        return apply_images(self.images, word)

    def apply_capped(self, word: Word, cap: int) -> Word:
        out = self.apply(word)
        if len(out) > cap:
            raise SizeCapExceeded(len(out))
        return out

    def __call__(self, word: Word) -> Word:
        return self.apply(word)

    def iterate(self, word: Word, n: int, cap: int | None = None) -> Word:
        """phi^n(word), applied stepwise; raises SizeCapExceeded past cap."""
        if n < 0:
            raise ValueError("negative exponent")
        for _ in range(n):
            word = self.apply(word)
            if cap is not None and len(word) > cap:
                raise SizeCapExceeded(len(word))
        return word

    def is_identity(self) -> bool:
        return all(w == (i + 1,) for i, w in enumerate(self.images))

    # -- image graphs and injectivity -------------------------------------

    def image_graph(self, based: bool = True) -> CoreGraph:
        key = ("image_graph", based)
        if key not in self._cache:
            self._cache[key] = fold(self.images, self.rank, based=based)
        return self._cache[key]

    def is_injective(self) -> bool:
        """True iff the folded image graph has full rank (Hopficity)."""
        if "injective" not in self._cache:
            self._cache["injective"] = self.image_graph().rank() == self.rank
        return self._cache["injective"]

    def is_surjective(self) -> bool:
        g = self.image_graph()
        return g.n_vertices == 1 and g.n_edges == self.rank


def identity(rank: int) -> Endomorphism:
    return Endomorphism(rank, tuple((i + 1,) for i in range(rank)))


def compose(outer: Endomorphism, inner: Endomorphism) -> Endomorphism:
    """x -> outer(inner(x))."""
    if outer.rank != inner.rank:
        raise ValueError("rank mismatch")
    return Endomorphism(outer.rank, tuple(outer.apply(w) for w in inner.images))


def power(phi: Endomorphism, n: int) -> Endomorphism:
    if n < 0:
        raise ValueError("negative power of an endomorphism")
    key = ("power", n)
    if key in phi._cache:
        return phi._cache[key]
    result = identity(phi.rank)
    for _ in range(n):
        result = compose(phi, result)
    phi._cache[key] = result
    return result


def parse_endomorphism(text: str) -> Endomorphism:
    """Parse the line-per-generator text form, e.g. ``a -> b`` / ``b -> aa``.

    Whitespace-insensitive; every generator of the inferred rank must
    appear exactly once.
    """
    from .words import Alphabet, GENERATOR_CHARS

    entries = {}
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    for line in lines:
        if "->" not in line:
            raise ValueError(f"malformed image line: {line!r}")
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        if len(lhs) != 1 or lhs not in GENERATOR_CHARS:
            raise ValueError(f"bad generator name: {lhs!r}")
        idx = GENERATOR_CHARS.index(lhs) + 1
        if idx in entries:
            raise DuplicateGeneratorError(f"generator {lhs!r} defined twice")
        entries[idx] = rhs
    rank = len(entries)
    alphabet = Alphabet(rank)
    if sorted(entries) != list(range(1, rank + 1)):
        missing = [GENERATOR_CHARS[i - 1] for i in range(1, rank + 1) if i not in entries]
        raise ValueError(f"generators must be consecutive from 'a'; missing {missing}")
    return Endomorphism(rank, tuple(alphabet.parse(entries[i]) for i in range(1, rank + 1)))


def format_endomorphism(phi: Endomorphism) -> str:
    from .words import Alphabet, GENERATOR_CHARS

    alphabet = Alphabet(phi.rank)
    return "\n".join(
        f"{GENERATOR_CHARS[i]} -> {alphabet.format(w)}" for i, w in enumerate(phi.images)
    )


class DuplicateGeneratorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Nielsen reduction with a recorded automorphism
# ---------------------------------------------------------------------------


def _weight(word: Word):
    return (len(word), word)


def nielsen_reduce(words, rank: int):
    """Reduce a tuple of words by elementary Nielsen transformations.

    Returns (reduced, alpha, alpha_inv) where alpha is the recorded
    automorphism with ``reduced[i] = original-tuple evaluated at alpha(x_i)``;
    trivial entries are moved to the end.  Uses the classical weight order
    (length, then lexicographic) with smallest-index move selection, so the
    run is deterministic.
    """
    current = [reduce(w) for w in words]
    n = len(current)
    alpha = identity(rank)
    alpha_inv = identity(rank)

    def track(tau_images, tau_inv_images):
        nonlocal alpha, alpha_inv
        tau = Endomorphism(rank, tau_images)
        tau_inv = Endomorphism(rank, tau_inv_images)
        alpha = compose(alpha, tau)
        alpha_inv = compose(tau_inv, alpha_inv)

    def elementary(i, func, inv_func):
        base = [(k + 1,) for k in range(rank)]
        tau = list(base)
        tau[i] = func
        tau_inv = list(base)
        tau_inv[i] = inv_func
        track(tuple(tau), tuple(tau_inv))

    changed = True
    while changed:
        changed = False
        for i in range(n):
            wi = current[i]
            if not wi:
                continue
            # inversion when it lowers the lexicographic weight
            if _weight(invert(wi)) < _weight(wi):
                current[i] = invert(wi)
                elementary(i, (-(i + 1),), (-(i + 1),))
                changed = True
                continue
            best = None
            for j in range(n):
                if i == j or not current[j]:
                    continue
                for e in (1, -1):
                    wj = current[j] if e == 1 else invert(current[j])
                    for side in ("r", "l"):
                        cand = concat(wi, wj) if side == "r" else concat(wj, wi)
                        if _weight(cand) < _weight(wi):
                            if best is None or _weight(cand) < _weight(best[0]):
                                best = (cand, j, e, side)
            if best is not None:
                cand, j, e, side = best
                current[i] = cand
                xi, xj = i + 1, (j + 1) * e
                if side == "r":
                    elementary(i, (xi, xj), (xi, -xj))
                else:
                    elementary(i, (xj, xi), (-xj, xi))
                changed = True
    # stable permutation pushing trivial entries to the end
    assert n == rank, "tracked reduction needs one word per generator"
    order = [i for i in range(n) if current[i]] + [i for i in range(n) if not current[i]]
    if order != list(range(n)):
        tau = [(old + 1,) for old in order]
        tau_inv = [None] * n
        for new, old in enumerate(order):
            tau_inv[old] = (new + 1,)
        track(tuple(tau), tuple(tau_inv))
        current = [current[i] for i in order]
    return tuple(current), alpha, alpha_inv


# ---------------------------------------------------------------------------
# retraction onto a maximal injective free factor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Retraction:
    """A retraction pi of F onto a free factor F' on which the map acts
    injectively.

    factor_basis: words in F freely generating F'.
    pi: retraction endomorphism of F (pi o pi == pi, identity on F').
    phibar: the induced injective endomorphism of F' in its own rank-l basis.
    alpha / alpha_inv: recorded automorphism of F with F' generated by the
        alpha-images of the first l generators.
    coord_words: images of the F-generators in the F'-basis alphabet;
        substitution by these realises the projection F -> F' in coordinates.
    ranks: ambient rank at each recursion level, strictly decreasing.
    """

    factor_basis: tuple
    pi: Endomorphism
    phibar: Endomorphism
    alpha: Endomorphism
    alpha_inv: Endomorphism
    coord_words: tuple
    ranks: tuple

    @property
    def depth(self) -> int:
        return len(self.ranks) - 1

    @property
    def factor_rank(self) -> int:
        return len(self.factor_basis)

    def to_factor(self, word: Word) -> Word:
        """Project an element of F and express it in the F'-basis."""
        return apply_images(self.coord_words, word)

    def from_factor(self, coord_word: Word) -> Word:
        return apply_images(self.factor_basis, coord_word)


def nielsen_retract(phi: Endomorphism) -> Retraction:
    """The retraction construction: Nielsen-reduce the image tuple, drop
    trivialised generators, recurse on the projected map until injective.

    Satisfies pi o pi == pi and phibar^n o pi == pi o phi^n as maps F -> F,
    with strict rank descent at every recursion level.
    """
    rank = phi.rank
    if phi.is_injective():
        ident = identity(rank)
        return Retraction(
            factor_basis=tuple((i + 1,) for i in range(rank)),
            pi=ident,
            phibar=phi,
            alpha=ident,
            alpha_inv=ident,
            coord_words=tuple((i + 1,) for i in range(rank)),
            ranks=(rank,),
        )
    reduced, alpha, alpha_inv = nielsen_reduce(phi.images, rank)
    k = sum(1 for w in reduced if w)
    assert all(reduced[i] for i in range(k)) and not any(reduced[i] for i in range(k, rank))
    for i in range(rank):
        assert phi.apply(alpha.images[i]) == reduced[i]
    assert fold(reduced[:k], rank).rank() == k, "reduced tuple not independent"

    def kill(word: Word) -> Word:
        return reduce(l for l in word if abs(l) <= k)

    # the projected map on the factor, in the rank-k alphabet
    psi_images = []
    for i in range(k):
        img = kill(alpha_inv.apply(reduced[i]))
        assert all(abs(l) <= k for l in img)
        psi_images.append(img)
    psi = Endomorphism(k, tuple(psi_images))
    sub = nielsen_retract(psi)

    def embed(word: Word) -> Word:
        return alpha.apply(word)  # rank-k letters are valid rank-r letters

    factor_basis = tuple(embed(w) for w in sub.factor_basis)
    coord_words = tuple(sub.to_factor(kill(alpha_inv.apply((g + 1,)))) for g in range(rank))
    pi = Endomorphism(rank, tuple(apply_images(factor_basis, cw) for cw in coord_words))
    alpha_total = compose(alpha, _pad(sub.alpha, rank))
    alpha_inv_total = compose(_pad(sub.alpha_inv, rank), alpha_inv)
    return Retraction(
        factor_basis=factor_basis,
        pi=pi,
        phibar=sub.phibar,
        alpha=alpha_total,
        alpha_inv=alpha_inv_total,
        coord_words=coord_words,
        ranks=(rank,) + sub.ranks,
    )


def _pad(phi: Endomorphism, rank: int) -> Endomorphism:
    """Extend an automorphism of a smaller-rank factor by the identity."""
    images = list(phi.images) + [(i + 1,) for i in range(phi.rank, rank)]
    return Endomorphism(rank, tuple(images))


# ---------------------------------------------------------------------------
# iterated images: probes and preimages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImageProbe:
    """Outcome of the bounded membership probe of iterated images.

    in_all=False: minimal m with word not in phi^m(F).
    in_all=True: membership held for every power up to ``checked`` (which
    may be below the requested bound when a size cap intervened).
    """

    in_all: bool
    m: int | None
    checked: int


def stable_image_probe(phi: Endomorphism, word: Word, bound: int, word_cap: int = 2_000_000) -> ImageProbe:
    if not phi.is_injective():
        raise ValueError("stable_image_probe needs an injective endomorphism")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    images = phi.images
    for m in range(1, bound + 1):
        graph = fold(images, phi.rank, based=True)
        if graph.membership(word) is None:
            return ImageProbe(False, m, m)
        if m == bound:
            break
        total = sum(len(w) for w in images)
        if total * phi.norm > word_cap:
            return ImageProbe(True, None, m)
        images = tuple(phi.apply(w) for w in images)
    return ImageProbe(True, None, bound)


def _inversion_table(phi: Endomorphism):
    """For injective phi: expressions of the image-graph Schreier basis in
    the generator images, as words over the abstract generator alphabet."""
    if "inversion" in phi._cache:
        return phi._cache["inversion"]
    if not phi.is_injective():
        raise ValueError("preimages need an injective endomorphism")
    graph = phi.image_graph()
    basis = graph.schreier_basis()
    assert len(basis) == phi.rank
    traced = []
    for img in phi.images:
        wit = graph.membership(img)
        assert wit is not None
        traced.append(wit.indices)
    reduced, alpha, _ = nielsen_reduce(tuple(traced), phi.rank)
    table: dict[int, Word] = {}
    for i, entry in enumerate(reduced):
        assert len(entry) == 1, "image tuple did not reduce to a signed basis"
        s = entry[0]
        table[abs(s)] = alpha.images[i] if s > 0 else invert(alpha.images[i])
    assert len(table) == phi.rank
    expressions = tuple(table[i + 1] for i in range(phi.rank))
    phi._cache["inversion"] = (graph, basis, expressions)
    return phi._cache["inversion"]


def pullback_element(phi: Endomorphism, word: Word) -> Word | None:
    """The unique preimage phi^-1(word), or None when word is outside the
    image.  Realised through a membership witness on the image graph,
    rewritten by the recorded basis preimages."""
    graph, _, expressions = _inversion_table(phi)
    wit = graph.membership(word)
    if wit is None:
        return None
    out = apply_images(expressions, wit.indices)
    assert phi.apply(out) == word
    return out


def preimage_subgroup(phi: Endomorphism, H: CoreGraph) -> CoreGraph:
    """Based core graph of {x in F : phi(x) in H} for injective phi.

    Intersect the image graph with H by a based pullback, express the
    intersection's Schreier generators through phi^-1, and fold.
    """
    if not phi.is_injective():
        raise ValueError("preimage_subgroup needs an injective endomorphism")
    if not H.is_based:
        raise ValueError("preimage_subgroup needs a based graph")
    intersection = pullback(phi.image_graph(), H)
    if not intersection:
        return fold([], phi.rank, based=True)
    gens = []
    for g in intersection[0].schreier_basis():
        pre = pullback_element(phi, g)
        assert pre is not None
        gens.append(pre)
    return fold(gens, phi.rank, based=True)
