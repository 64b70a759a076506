"""Finite simple graphs and the combinatorics of vertex domination.

Vertices are opaque strings.  Every enumeration in this module follows the
input order of ``SimpleGraph.vertices`` so that results are deterministic.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import yaml

# Exhaustive searches (automorphisms, isomorphism) refuse larger inputs
# unless the caller raises the bound explicitly.
DEFAULT_AUT_BOUND = 10


class GraphError(ValueError):
    pass


class BoundExceeded(GraphError):
    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what}: size {size} exceeds bound {bound}")
        self.size = size
        self.bound = bound


@dataclass(frozen=True)
class SimpleGraph:
    vertices: tuple[str, ...]
    edges: frozenset = field(default_factory=frozenset)

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise GraphError(f"duplicate vertex names in {verts}")
        vset = set(verts)
        es = set()
        for e in edges:
            pair = tuple(str(x) for x in e)
            if len(pair) != 2:
                raise GraphError(f"edge {pair} does not have two endpoints")
            if pair[0] == pair[1]:
                raise GraphError(f"self-loop at {pair[0]}")
            for x in pair:
                if x not in vset:
                    raise GraphError(f"edge endpoint {x!r} is not a vertex")
            es.add(frozenset(pair))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(es))

    def __repr__(self) -> str:
        return f"SimpleGraph({list(self.vertices)}, {self.edge_list()})"

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def neighbours(self) -> dict[str, frozenset[str]]:
        nb: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            nb[a].add(b)
            nb[b].add(a)
        return {v: frozenset(s) for v, s in nb.items()}

    def adjacent(self, v: str, w: str) -> bool:
        return w in self.neighbours[v]

    def edge_list(self) -> list[tuple[str, str]]:
        """Edges as pairs, ordered by the vertex order."""
        idx = self.index
        pairs = [tuple(sorted(e, key=idx.__getitem__)) for e in self.edges]
        return sorted(pairs, key=lambda p: (idx[p[0]], idx[p[1]]))

    def check_vertex(self, v: str) -> None:
        if v not in self.index:
            raise GraphError(f"unknown vertex {v!r}")

    def subgraph(self, vs: Iterable[str]) -> "SimpleGraph":
        """Full subgraph spanned by ``vs`` (kept in the ambient order)."""
        keep = set(vs)
        for v in keep:
            self.check_vertex(v)
        verts = [v for v in self.vertices if v in keep]
        return SimpleGraph(verts, [e for e in self.edges if e <= keep])

    def complement(self) -> "SimpleGraph":
        pairs = itertools.combinations(self.vertices, 2)
        return SimpleGraph(self.vertices, [p for p in pairs if frozenset(p) not in self.edges])

    def relabel(self, mapping: dict[str, str]) -> "SimpleGraph":
        return SimpleGraph([mapping[v] for v in self.vertices],
                           [[mapping[a] for a in e] for e in self.edges])

    def connected_components(self) -> list[frozenset[str]]:
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for y in self.neighbours[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2

    # serialization

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(p) for p in self.edge_list()]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimpleGraph":
        if not isinstance(data, dict) or "vertices" not in data:
            raise GraphError("graph document needs a 'vertices' field")
        return cls(data["vertices"], data.get("edges") or [])

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "SimpleGraph":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise GraphError(f"malformed graph document: {exc}") from None
        return cls.from_dict(data)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{a}" -- "{b}";' for a, b in self.edge_list()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> SimpleGraph:
    return SimpleGraph.loads(Path(path).read_text())


def _names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"v{i}" for i in range(n)]


def complete_graph(n: int) -> SimpleGraph:
    vs = _names(n)
    return SimpleGraph(vs, itertools.combinations(vs, 2))


def null_graph(n: int) -> SimpleGraph:
    return SimpleGraph(_names(n))


def path_graph(n: int) -> SimpleGraph:
    vs = _names(n)
    return SimpleGraph(vs, zip(vs, vs[1:]))


def cycle_graph(n: int) -> SimpleGraph:
    vs = _names(n)
    return SimpleGraph(vs, list(zip(vs, vs[1:])) + [(vs[-1], vs[0])])


def named_graph(name: str) -> SimpleGraph:
    """Parse family shorthands ``K4``, ``N3``, ``P4``, ``C4``."""
    makers = {"K": complete_graph, "N": null_graph, "P": path_graph, "C": cycle_graph}
    if len(name) >= 2 and name[0] in makers and name[1:].isdigit():
        n = int(name[1:])
        if n >= 1 and not (name[0] == "C" and n < 3):
            return makers[name[0]](n)
    raise GraphError(f"unknown graph name {name!r}")


def disjoint_union(*graphs: SimpleGraph) -> SimpleGraph:
    verts = [v for g in graphs for v in g.vertices]
    return SimpleGraph(verts, [e for g in graphs for e in g.edges])


def join(*graphs: SimpleGraph) -> SimpleGraph:
    edges = [e for g in graphs for e in g.edges]
    for g, h in itertools.combinations(graphs, 2):
        edges += [(a, b) for a in g.vertices for b in h.vertices]
    return SimpleGraph([v for g in graphs for v in g.vertices], edges)


# links, stars and domination

def link(g: SimpleGraph, v: str) -> frozenset[str]:
    g.check_vertex(v)
    return g.neighbours[v]


def star(g: SimpleGraph, v: str) -> frozenset[str]:
    return link(g, v) | {v}


def components_minus_star(g: SimpleGraph, v: str) -> list[frozenset[str]]:
    """Connected components of the full subgraph on V - st(v)."""
    st = star(g, v)
    rest = g.subgraph(x for x in g.vertices if x not in st)
    return rest.connected_components()


def dominates(g: SimpleGraph, v: str, w: str) -> bool:
    """True iff v <= w, i.e. lk(v) is contained in st(w)."""
    g.check_vertex(w)
    return link(g, v) <= star(g, w)


@dataclass(frozen=True)
class DominationStructure:
    pairs: frozenset          # (v, w) with v <= w
    classes: tuple            # tuple of tuples of vertices, in vertex order
    class_kind: tuple         # "Complete" | "Null" | "Singleton" per class

    def class_of(self, v: str) -> tuple[str, ...]:
        for c in self.classes:
            if v in c:
                return c
        raise GraphError(f"unknown vertex {v!r}")

    def leq(self, v: str, w: str) -> bool:
        return (v, w) in self.pairs


def domination_structure(g: SimpleGraph) -> DominationStructure:
    pairs = frozenset((v, w) for v in g.vertices for w in g.vertices if dominates(g, v, w))
    classes = []
    placed: set[str] = set()
    for v in g.vertices:
        if v in placed:
            continue
        cls = tuple(w for w in g.vertices if (v, w) in pairs and (w, v) in pairs)
        placed.update(cls)
        classes.append(cls)
    kinds = []
    for cls in classes:
        if len(cls) == 1:
            kinds.append("Singleton")
        elif g.subgraph(cls).is_complete():
            kinds.append("Complete")
        else:
            kinds.append("Null")
    return DominationStructure(pairs, tuple(classes), tuple(kinds))


@dataclass(frozen=True)
class LabeledQuotientGraph:
    graph: SimpleGraph
    labels: dict            # class name -> ("F", k) or ("Z", k)
    classes: tuple          # class name -> members, aligned with graph.vertices

    def label_text(self, name: str) -> str:
        kind, k = self.labels[name]
        if k == 1:
            return "Z"
        return f"F_{k}" if kind == "F" else f"Z^{k}"


def quotient_graph(g: SimpleGraph) -> LabeledQuotientGraph:
    """The graph of ~-classes, each labelled by the RAAG its class spans.

    Singleton classes carry the label ("F", 1); since F_1 = Z^1 = Z all
    singletons share one label.
    """
    ds = domination_structure(g)
    names = ["[" + ",".join(c) + "]" for c in ds.classes]
    owner = {v: names[i] for i, c in enumerate(ds.classes) for v in c}
    edges = {frozenset((owner[a], owner[b])) for a, b in (tuple(e) for e in g.edges)
             if owner[a] != owner[b]}
    labels = {}
    for name, cls, kind in zip(names, ds.classes, ds.class_kind):
        labels[name] = ("Z", len(cls)) if kind == "Complete" else ("F", len(cls))
    return LabeledQuotientGraph(SimpleGraph(names, edges), labels, tuple(ds.classes))


# automorphisms and isomorphisms

def _refined_colours(g: SimpleGraph, initial: Sequence) -> list:
    """Colour refinement; colours are canonical (comparable across graphs)."""
    colours = list(initial)
    nb = [[g.index[w] for w in g.neighbours[v]] for v in g.vertices]
    for _ in range(len(colours)):
        new = [(colours[i], tuple(sorted(colours[j] for j in nb[i]))) for i in range(len(colours))]
        if len(set(new)) == len(set(colours)):
            break
        colours = new
    return colours


def _isomorphisms(g: SimpleGraph, h: SimpleGraph, colours_g=None, colours_h=None,
                  first_only: bool = False) -> list[tuple[int, ...]]:
    """Backtracking search for vertex bijections g -> h preserving edges
    (and the optional vertex colours)."""
    n = len(g.vertices)
    if n != len(h.vertices) or len(g.edges) != len(h.edges):
        return []
    cg = _refined_colours(g, colours_g if colours_g is not None else [0] * n)
    ch = _refined_colours(h, colours_h if colours_h is not None else [0] * n)
    if Counter(cg) != Counter(ch):
        return []
    adj_g = [[g.adjacent(a, b) for b in g.vertices] for a in g.vertices]
    adj_h = [[h.adjacent(a, b) for b in h.vertices] for a in h.vertices]
    # place the most constrained (rarest colour) vertices first
    counts = Counter(cg)
    order = sorted(range(n), key=lambda i: (counts[cg[i]], i))
    image = [-1] * n
    used = [False] * n
    found: list[tuple[int, ...]] = []

    def extend(k: int) -> bool:
        if k == n:
            found.append(tuple(image))
            return first_only
        i = order[k]
        for j in range(n):
            if used[j] or ch[j] != cg[i]:
                continue
            if any(adj_g[i][order[m]] != adj_h[j][image[order[m]]] for m in range(k)):
                continue
            image[i] = j
            used[j] = True
            if extend(k + 1):
                return True
            used[j] = False
            image[i] = -1
        return False

    extend(0)
    return found


def graph_automorphisms(g: SimpleGraph, bound: int = DEFAULT_AUT_BOUND) -> list[tuple[str, ...]]:
    """All edge-preserving vertex permutations.

    A permutation is returned as the tuple of images of ``g.vertices``.
    The identity comes first; the rest are sorted.
    """
    if len(g) > bound:
        raise BoundExceeded("graph_automorphisms", len(g), bound)
    perms = sorted(_isomorphisms(g, g))
    return [tuple(g.vertices[j] for j in p) for p in perms]


def labeled_quotient_automorphisms(q: LabeledQuotientGraph,
                                   bound: int = DEFAULT_AUT_BOUND) -> list[tuple[str, ...]]:
    g = q.graph
    if len(g) > bound:
        raise BoundExceeded("labeled_quotient_automorphisms", len(g), bound)
    colours = [q.labels[v] for v in g.vertices]
    perms = sorted(_isomorphisms(g, g, colours, colours))
    return [tuple(g.vertices[j] for j in p) for p in perms]


def find_isomorphism(g: SimpleGraph, h: SimpleGraph) -> dict[str, str] | None:
    found = _isomorphisms(g, h, first_only=True)
    if not found:
        return None
    return {g.vertices[i]: h.vertices[j] for i, j in enumerate(found[0])}


def is_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    return find_isomorphism(g, h) is not None


def canonical_key(g: SimpleGraph, bound: int = 8) -> tuple:
    """Brute-force canonical form: lexicographically least sorted edge list
    over all vertex orderings.  Only for tiny graphs."""
    n = len(g)
    if n > bound:
        raise BoundExceeded("canonical_key", n, bound)
    idx = g.index
    es = [(idx[a], idx[b]) for a, b in g.edge_list()]
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in es))
        if best is None or key < best:
            best = key
    return (n, best)


def all_graphs(n: int) -> list[SimpleGraph]:
    """One representative per isomorphism class of graphs on n vertices."""
    vs = _names(n)
    pairs = list(itertools.combinations(vs, 2))
    seen = {}
    for mask in range(1 << len(pairs)):
        g = SimpleGraph(vs, [p for i, p in enumerate(pairs) if mask >> i & 1])
        key = canonical_key(g)
        if key not in seen:
            seen[key] = g
    return list(seen.values())


def all_labeled_graphs(n: int):
    vs = _names(n)
    pairs = list(itertools.combinations(vs, 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph(vs, [p for i, p in enumerate(pairs) if mask >> i & 1])


# amalgams

def _copy_name(x: str, k: int) -> str:
    return f"{x}_{k}"


def amalgam_graph(g: SimpleGraph, lam: Iterable[str], d: int) -> SimpleGraph:
    """d copies of g glued along the full subgraph spanned by ``lam``.

    Vertices of ``lam`` keep their names; the k-th copy of any other vertex
    x is named ``x_k`` (k = 0..d-1).
    """
    if d < 1:
        raise GraphError(f"number of copies must be positive, got {d}")
    lam = frozenset(lam)
    for v in lam:
        g.check_vertex(v)
    if d == 1 or lam == frozenset(g.vertices):
        return g
    verts = [v for v in g.vertices if v in lam]
    verts += [_copy_name(x, k) for k in range(d) for x in g.vertices if x not in lam]

    def name(x: str, k: int) -> str:
        return x if x in lam else _copy_name(x, k)

    edges = {frozenset((name(a, k), name(b, k))) for k in range(d) for a, b in map(tuple, g.edges)}
    return SimpleGraph(verts, edges)


# cographs

@dataclass(frozen=True)
class Leaf:
    vertex: str

    def shape(self) -> str:
        return "v"


@dataclass(frozen=True)
class Join:
    children: tuple

    def shape(self) -> str:
        return "J(" + ",".join(c.shape() for c in self.children) + ")"


@dataclass(frozen=True)
class DisjointUnion:
    children: tuple

    def shape(self) -> str:
        return "U(" + ",".join(c.shape() for c in self.children) + ")"


Cotree = Leaf | Join | DisjointUnion


@dataclass(frozen=True)
class P4Witness:
    path: tuple[str, str, str, str]


def cotree_vertices(t) -> list[str]:
    if isinstance(t, Leaf):
        return [t.vertex]
    return [v for c in t.children for v in cotree_vertices(c)]


def evaluate_cotree(t) -> SimpleGraph:
    if isinstance(t, Leaf):
        return SimpleGraph([t.vertex])
    parts = [evaluate_cotree(c) for c in t.children]
    return join(*parts) if isinstance(t, Join) else disjoint_union(*parts)


def cotree_text(t) -> str:
    if isinstance(t, Leaf):
        return t.vertex
    head = "Join" if isinstance(t, Join) else "Union"
    return head + "(" + ", ".join(cotree_text(c) for c in t.children) + ")"


def find_induced_p4(g: SimpleGraph) -> P4Witness | None:
    for quad in itertools.combinations(g.vertices, 4):
        sub = g.subgraph(quad)
        if len(sub.edges) != 3:
            continue
        degs = sorted(len(sub.neighbours[v]) for v in quad)
        if degs != [1, 1, 2, 2] or len(sub.connected_components()) != 1:
            continue
        ends = [v for v in quad if len(sub.neighbours[v]) == 1]
        start = min(ends, key=g.index.__getitem__)
        path = [start]
        while len(path) < 4:
            path.append(next(w for w in sub.neighbours[path[-1]] if w not in path))
        return P4Witness(tuple(path))
    return None


def cograph_decompose(g: SimpleGraph):
    """Cotree of a P4-free graph, or a P4Witness.

    Recursion: a disconnected graph is the disjoint union of its components;
    a graph with disconnected complement is the join of the complements'
    components; if both are connected (and |V| > 1) the graph has an
    induced P4.
    """
    if len(g) == 0:
        raise GraphError("empty graph has no cotree")
    if len(g) == 1:
        return Leaf(g.vertices[0])
    comps = g.connected_components()
    if len(comps) > 1:
        kind, parts = DisjointUnion, comps
    else:
        parts = g.complement().connected_components()
        if len(parts) == 1:
            return find_induced_p4(g)
        kind = Join
    children = []
    for part in parts:
        sub = cograph_decompose(g.subgraph(part))
        if isinstance(sub, P4Witness):
            return sub
        children.append(sub)
    idx = g.index
    children.sort(key=lambda c: (c.shape(), min(idx[v] for v in cotree_vertices(c))))
    return kind(tuple(children))


def is_cograph(g: SimpleGraph) -> bool:
    return not isinstance(cograph_decompose(g), P4Witness)


def graph_euler_characteristic(g: SimpleGraph) -> int:
    """Euler characteristic of the Salvetti complex: alternating clique count
    (the empty clique included)."""
    total = 0
    cliques = [frozenset()]
    while cliques:
        total += sum((-1) ** len(c) for c in cliques)
        nxt = set()
        for c in cliques:
            last = max((g.index[v] for v in c), default=-1)
            for v in g.vertices[last + 1:]:
                if all(g.adjacent(v, u) for u in c):
                    nxt.add(c | {v})
        cliques = list(nxt)
    return total


def center_trivial(g: SimpleGraph) -> bool:
    """A_Γ is centreless iff no vertex is adjacent to every other vertex."""
    everything = frozenset(g.vertices)
    return not any(star(g, v) == everything for v in g.vertices)
