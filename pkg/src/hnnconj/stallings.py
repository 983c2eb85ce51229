"""Folded labelled graphs (Stallings automata) for subgroups of free groups.

A CoreGraph is a folded digraph with edges labelled by generators.  Based
graphs carry a basepoint and represent a subgroup: the words readable as
basepoint loops.  Basepoint-free graphs represent a conjugacy class of
subgroups; vertex 0 serves as a deterministic anchor where one is needed.

Folding is done with a union-find worklist, so building a graph is near
linear in the total generator length.  Pullbacks use the partial-product
construction: only vertex pairs incident to a synchronised edge are ever
materialised.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .words import Word, concat, cyclic_reduce, invert, reduce


@dataclass(frozen=True)
class Witness:
    """A membership certificate: a product of subgroup basis elements.

    ``indices`` are 1-based signed positions in the graph's Schreier basis;
    evaluating against that basis and reducing reproduces the queried word.
    """

    indices: tuple

    def evaluate(self, basis) -> Word:
        parts = []
        for i in self.indices:
            w = basis[abs(i) - 1]
            parts.append(w if i > 0 else invert(w))
        return concat(*parts)


class CoreGraph:
    """Immutable folded core graph. Do not mutate ``adj`` after creation."""

    __slots__ = ("ambient_rank", "adj", "basepoint", "_cache")

    def __init__(self, ambient_rank: int, adj, basepoint):
        self.ambient_rank = ambient_rank
        self.adj = adj  # list[dict[letter, vertex]], both edge directions
        self.basepoint = basepoint
        self._cache = {}

    # -- construction -------------------------------------------------

    @classmethod
    def _from_adj(cls, rank: int, adj, basepoint):
        """Renumber vertices BFS-first (deterministic) and wrap."""
        n = len(adj)
        if n == 0:
            adj = [dict()]
            basepoint = 0 if basepoint is not None else None
            n = 1
        starts = [basepoint if basepoint is not None else 0]
        order: list[int] = []
        seen = [False] * n
        for s in starts + list(range(n)):
            if s is None or seen[s]:
                continue
            seen[s] = True
            queue = deque([s])
            while queue:
                v = queue.popleft()
                order.append(v)
                for letter in sorted(adj[v], key=lambda l: (abs(l), l < 0)):
                    w = adj[v][letter]
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
        renum = {old: new for new, old in enumerate(order)}
        new_adj = [dict() for _ in order]
        for old, new in renum.items():
            for letter, w in adj[old].items():
                new_adj[new][letter] = renum[w]
        bp = renum[basepoint] if basepoint is not None else None
        graph = cls(rank, new_adj, bp)
        return graph, renum

    # -- basic queries ------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.adj)

    @property
    def n_edges(self) -> int:
        return sum(len(d) for d in self.adj) // 2

    @property
    def is_based(self) -> bool:
        return self.basepoint is not None

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def rank(self) -> int:
        """First Betti number: edges - vertices + components."""
        return self.n_edges - self.n_vertices + len(self._component_sets())

    def is_trivial(self) -> bool:
        return self.n_edges == 0

    def trace(self, word: Word, start: int) -> int | None:
        v = start
        for letter in word:
            v = self.adj[v].get(letter)
            if v is None:
                return None
        return v

    def _component_sets(self):
        seen = [False] * self.n_vertices
        comps = []
        for s in range(self.n_vertices):
            if seen[s]:
                continue
            seen[s] = True
            queue, comp = deque([s]), [s]
            while queue:
                v = queue.popleft()
                for w in self.adj[v].values():
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comps.append(comp)
        return comps

    # -- spanning tree, basis, membership ------------------------------

    def _tree(self):
        """BFS spanning forest from the basepoint/anchor.

        Returns (path, tree_edges) where path[v] is the word read along the
        tree path root -> v and tree_edges is a set of (v, letter) pairs
        (both orientations) used by the tree.
        """
        if "tree" in self._cache:
            return self._cache["tree"]
        root = self.basepoint if self.is_based else 0
        path: dict[int, Word] = {root: ()}
        tree_edges = set()
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for letter in sorted(self.adj[v], key=lambda l: (abs(l), l < 0)):
                w = self.adj[v][letter]
                if w not in path:
                    path[w] = path[v] + (letter,)
                    tree_edges.add((v, letter))
                    tree_edges.add((w, -letter))
                    queue.append(w)
        self._cache["tree"] = (path, tree_edges)
        return path, tree_edges

    def path_word(self, v: int) -> Word:
        path, _ = self._tree()
        return path[v]

    def _basis_data(self):
        if "basis" in self._cache:
            return self._cache["basis"]
        path, tree_edges = self._tree()
        basis: list[Word] = []
        edge_index: dict[tuple, int] = {}
        for v in range(self.n_vertices):
            for letter, w in sorted(self.adj[v].items(), key=lambda kv: (abs(kv[0]), kv[0] < 0)):
                if letter < 0 or (v, letter) in tree_edges or (v, letter) in edge_index:
                    continue
                basis.append(concat(path[v], (letter,), invert(path[w])))
                edge_index[(v, letter)] = len(basis)
                edge_index[(w, -letter)] = -len(basis)
        self._cache["basis"] = (tuple(basis), edge_index)
        return self._cache["basis"]

    def schreier_basis(self) -> tuple:
        """Free basis of the subgroup, from the spanning-tree Schreier
        construction.  Length equals rank()."""
        return self._basis_data()[0]

    def membership(self, word: Word) -> Witness | None:
        """Witness iff ``word`` reads as a basepoint loop."""
        if not self.is_based:
            raise ValueError("membership needs a based graph")
        end = self.trace(word, self.basepoint)
        if end != self.basepoint:
            return None
        _, edge_index = self._basis_data()
        _, tree_edges = self._tree()
        v = self.basepoint
        out = []
        for letter in word:
            if (v, letter) not in tree_edges:
                out.append(edge_index[(v, letter)])
            v = self.adj[v][letter]
        return Witness(tuple(out))

    def membership_word(self, word: Word) -> Word | None:
        wit = self.membership(word)
        return None if wit is None else wit.indices

    # -- derived graphs -------------------------------------------------

    def components(self) -> list["CoreGraph"]:
        comps = []
        for comp in self._component_sets():
            idx = {old: new for new, old in enumerate(comp)}
            adj = [dict() for _ in comp]
            for old in comp:
                for letter, w in self.adj[old].items():
                    adj[idx[old]][letter] = idx[w]
            bp = None
            if self.is_based and self.basepoint in idx:
                bp = idx[self.basepoint]
            comps.append(CoreGraph._from_adj(self.ambient_rank, adj, bp)[0])
        return comps

    def _stripped(self, protect: int | None):
        adj = [dict(d) for d in self.adj]
        alive = [True] * len(adj)
        queue = deque(v for v in range(len(adj)) if v != protect and len(adj[v]) == 1)
        while queue:
            v = queue.popleft()
            if v == protect or not alive[v] or len(adj[v]) != 1:
                continue
            alive[v] = False
            ((letter, w),) = adj[v].items()
            adj[v].clear()
            if alive[w]:
                del adj[w][-letter]
                if len(adj[w]) == 1 and w != protect:
                    queue.append(w)
        keep = [v for v in range(len(adj)) if alive[v]]
        idx = {old: new for new, old in enumerate(keep)}
        new_adj = [dict() for _ in keep]
        for old in keep:
            for letter, w in adj[old].items():
                new_adj[idx[old]][letter] = idx[w]
        return new_adj, idx

    def core(self) -> "CoreGraph":
        """Strip hair: degree-1 vertices, protecting the basepoint."""
        protect = self.basepoint if self.is_based else None
        adj, idx = self._stripped(protect)
        bp = idx[self.basepoint] if self.is_based else None
        return CoreGraph._from_adj(self.ambient_rank, adj, bp)[0]

    def without_basepoint(self) -> "CoreGraph":
        adj, _ = self._stripped(None)
        return CoreGraph._from_adj(self.ambient_rank, adj, None)[0]

    def with_basepoint(self, v: int) -> "CoreGraph":
        graph, _ = CoreGraph._from_adj(self.ambient_rank, [dict(d) for d in self.adj], v)
        return graph.core()

    # -- isomorphism-up-to-labelling ------------------------------------

    def canonical_key(self):
        """Canonical encoding of the labelled graph; equal keys mean
        label-preserving isomorphism (respecting basepoints)."""
        if "canon" in self._cache:
            return self._cache["canon"]
        starts = [self.basepoint] if self.is_based else range(self.n_vertices)
        best = None
        for start in starts:
            renum = {start: 0}
            order = [start]
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for letter in sorted(self.adj[v], key=lambda l: (abs(l), l < 0)):
                    w = self.adj[v][letter]
                    if w not in renum:
                        renum[w] = len(order)
                        order.append(w)
                        queue.append(w)
            if len(renum) < self.n_vertices:
                continue  # disconnected: fall back below
            enc = tuple(
                sorted(
                    (renum[v], letter, renum[w])
                    for v in range(self.n_vertices)
                    for letter, w in self.adj[v].items()
                    if letter > 0
                )
            )
            if best is None or enc < best:
                best = enc
        if best is None:
            best = tuple(sorted(g.canonical_key() for g in self.components()))
        key = (self.n_vertices, self.is_based, best)
        self._cache["canon"] = key
        return key

    def morphism_into(self, other: "CoreGraph") -> dict | None:
        """A label-preserving graph morphism self -> other, if one exists.

        Between folded graphs any such morphism is an immersion, so its
        existence means the subgroup class of ``self`` is conjugate into
        that of ``other``.  Returns the vertex map, tried from every
        possible image of vertex 0.
        """
        for target in range(other.n_vertices):
            f = {0: target}
            queue = deque([0])
            ok = True
            while queue and ok:
                v = queue.popleft()
                for letter, w in self.adj[v].items():
                    tw = other.adj[f[v]].get(letter)
                    if tw is None:
                        ok = False
                        break
                    if w in f:
                        if f[w] != tw:
                            ok = False
                            break
                    else:
                        f[w] = tw
                        queue.append(w)
            if ok and len(f) == self.n_vertices:
                return f
        return None

    # -- cyclic components ----------------------------------------------

    def is_cycle(self) -> bool:
        return self.n_vertices == self.n_edges and all(len(d) == 2 for d in self.adj)

    def cycle_word(self) -> Word:
        """The label word around a rank-1 (single cycle) component."""
        if not self.is_cycle():
            raise ValueError("not a single cycle")
        start = 0
        letter = min(self.adj[start], key=lambda l: (abs(l), l < 0))
        word = [letter]
        prev, v = start, self.adj[start][letter]
        while v != start:
            # a 2-regular vertex has exactly one continuation that does not
            # backtrack along the edge slot we arrived by
            (l1, w1), (l2, w2) = sorted(self.adj[v].items(), key=lambda kv: (abs(kv[0]), kv[0] < 0))
            if l1 == -letter and w1 == prev:
                nxt_letter, nxt = l2, w2
            else:
                nxt_letter, nxt = l1, w1
            word.append(nxt_letter)
            prev, v, letter = v, nxt, nxt_letter
        return tuple(word)

    # -- export ----------------------------------------------------------

    def dot(self, name: str = "G") -> str:
        from .words import GENERATOR_CHARS

        lines = [f"digraph {name} {{"]
        for v in range(self.n_vertices):
            shape = "doublecircle" if self.is_based and v == self.basepoint else "circle"
            lines.append(f'  v{v} [shape={shape}, label="{v}"];')
        for v in range(self.n_vertices):
            for letter, w in sorted(self.adj[v].items()):
                if letter > 0:
                    lines.append(f'  v{v} -> v{w} [label="{GENERATOR_CHARS[letter - 1]}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        kind = f"based@{self.basepoint}" if self.is_based else "free"
        return f"CoreGraph(rank={self.ambient_rank}, V={self.n_vertices}, E={self.n_edges}, {kind})"


# ---------------------------------------------------------------------------
# folding
# ---------------------------------------------------------------------------


def _fold_adj(n: int, edges) -> tuple[list, dict]:
    """Union-find folding of an edge list; returns (adj, representative map)."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj: list[dict] = [dict() for _ in range(n)]
    merge_queue: deque = deque()

    def attach(u: int, letter: int, v: int) -> None:
        u, v = find(u), find(v)
        cur = adj[u].get(letter)
        if cur is None:
            adj[u][letter] = v
            adj_v_cur = adj[v].get(-letter)
            if adj_v_cur is None:
                adj[v][-letter] = u
            elif find(adj_v_cur) != u:
                merge_queue.append((adj_v_cur, u))
        elif find(cur) != v:
            merge_queue.append((cur, v))

    for u, letter, v in edges:
        attach(u, letter, v)

    while merge_queue:
        a, b = merge_queue.popleft()
        a, b = find(a), find(b)
        if a == b:
            continue
        if len(adj[a]) < len(adj[b]):
            a, b = b, a
        parent[b] = a
        for letter, w in adj[b].items():
            w = find(w)
            cur = adj[a].get(letter)
            if cur is None:
                adj[a][letter] = w
            elif find(cur) != w:
                merge_queue.append((cur, w))
        adj[b] = {}

    reps = sorted({find(v) for v in range(n)})
    idx = {r: i for i, r in enumerate(reps)}
    out = [dict() for _ in reps]
    for r in reps:
        for letter, w in adj[r].items():
            out[idx[r]][letter] = idx[find(w)]
    rep_of = {v: idx[find(v)] for v in range(n)}
    return out, rep_of


def fold(generators, rank: int, based: bool = True) -> CoreGraph:
    """Fold the wedge of generator loops into a core graph.

    Based: the subgroup generated by the words, core relative to the
    basepoint.  Basepoint-free: the conjugacy class, built from the
    cyclically reduced loops with all hair stripped.
    """
    gens = [reduce(g) for g in generators]
    if not based:
        gens = [cyclic_reduce(g)[0] for g in gens]
    gens = [g for g in gens if g]
    edges = []
    n = 1
    for g in gens:
        prev = 0
        for letter in g[:-1]:
            edges.append((prev, letter, n))
            prev = n
            n += 1
        edges.append((prev, g[-1], 0))
    adj, rep_of = _fold_adj(n, edges)
    if based:
        graph = CoreGraph._from_adj(rank, adj, rep_of[0])[0]
        return graph.core()
    graph = CoreGraph._from_adj(rank, adj, None)[0]
    return graph.without_basepoint()


def rank(graph: CoreGraph) -> int:
    return graph.rank()


# ---------------------------------------------------------------------------
# pullback (fibre product)
# ---------------------------------------------------------------------------


def _product_edges(G: CoreGraph, H: CoreGraph):
    by_label_G: dict[int, list] = {}
    for v in range(G.n_vertices):
        for letter, w in G.adj[v].items():
            if letter > 0:
                by_label_G.setdefault(letter, []).append((v, w))
    for letter, pairs_G in by_label_G.items():
        for v2 in range(H.n_vertices):
            w2 = H.adj[v2].get(letter)
            if w2 is None:
                continue
            for v1, w1 in pairs_G:
                yield (v1, v2), letter, (w1, w2)


def pullback(G: CoreGraph, H: CoreGraph, with_projections: bool = False):
    """Fibre product on synchronised vertex pairs.

    Both based: the core component of the basepoint pair (a list of zero or
    one graphs; empty when the intersection is trivial).  Both basepoint
    free: the non-contractible core components.  Realises the subgroup
    intersection, up to conjugacy in the basepoint-free mode.
    """
    if G.ambient_rank != H.ambient_rank:
        raise ValueError("pullback needs a common alphabet")
    if G.is_based != H.is_based:
        raise ValueError("pullback modes disagree: mix of based and basepoint-free")
    based = G.is_based

    index: dict[tuple, int] = {}
    adj: list[dict] = []

    def vertex(p) -> int:
        if p not in index:
            index[p] = len(adj)
            adj.append(dict())
        return index[p]

    bp_pair = (G.basepoint, H.basepoint) if based else None
    if based:
        vertex(bp_pair)
    for p, letter, q in _product_edges(G, H):
        u, v = vertex(p), vertex(q)
        adj[u][letter] = v
        adj[v][-letter] = u

    pairs = {i: p for p, i in index.items()}
    big = CoreGraph(G.ambient_rank, adj, index.get(bp_pair) if based else None)

    if based:
        comp = None
        for c in big.components():
            if c.is_based:
                comp = c
                break
        if comp is None:
            return []
        cored = comp.core()
        return [] if cored.is_trivial() else [cored]

    out = []
    stripped_adj, idx = big._stripped(None)
    stripped = CoreGraph(G.ambient_rank, stripped_adj, None)
    back = {new: old for old, new in idx.items()}
    for comp_vertices in stripped._component_sets():
        if all(not stripped.adj[v] for v in comp_vertices):
            continue
        sub_idx = {old: new for new, old in enumerate(comp_vertices)}
        sub_adj = [dict() for _ in comp_vertices]
        for old in comp_vertices:
            for letter, w in stripped.adj[old].items():
                sub_adj[sub_idx[old]][letter] = sub_idx[w]
        comp, renum = CoreGraph._from_adj(G.ambient_rank, sub_adj, None)
        if with_projections:
            proj = {renum[sub_idx[v]]: pairs[back[v]] for v in comp_vertices}
            out.append((comp, proj))
        else:
            out.append(comp)
    return out


# ---------------------------------------------------------------------------
# carrying
# ---------------------------------------------------------------------------


def conjugate_into(word: Word, G: CoreGraph) -> Word | None:
    """A witness z with z * word * z^-1 a loop at the anchor of ``G``.

    Exists iff the cyclic core of ``word`` reads as a closed path at some
    vertex of the basepoint-free graph ``G``.
    """
    if G.is_based:
        raise ValueError("conjugate_into expects a basepoint-free graph")
    core, conj = cyclic_reduce(reduce(word))
    if not core:
        return ()
    for v in range(G.n_vertices):
        if G.trace(core, v) == v:
            return concat(G.path_word(v), conj)
    return None


@dataclass(frozen=True)
class SubgroupSystem:
    """A finite collection of basepoint-free core graphs (conjugacy classes
    of subgroups).  Components are deduplicated up to labelled isomorphism;
    redundancy beyond that (one component carrying another) is allowed."""

    components: tuple

    @classmethod
    def from_graphs(cls, graphs) -> "SubgroupSystem":
        seen = {}
        for g in graphs:
            seen.setdefault(g.canonical_key(), g)
        comps = tuple(seen[k] for k in sorted(seen))
        return cls(comps)

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __len__(self) -> int:
        return len(self.components)


def carries(A: SubgroupSystem, B: SubgroupSystem):
    """Whether every component of B is conjugate into some component of A.

    Returns (flag, assignments); assignments[j] is (i, x) with component j
    of B contained in x * A_i * x^-1 (anchors as subgroup basepoints), or
    None when component j is not carried.
    """
    assignments = []
    for b in B.components:
        found = None
        for i, a in enumerate(A.components):
            f = b.morphism_into(a)
            if f is not None:
                found = (i, invert(a.path_word(f[0])))
                break
        assignments.append(found)
    return all(x is not None for x in assignments), assignments
