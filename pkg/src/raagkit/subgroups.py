"""Finite-index subgroups of A_Γ: Reidemeister-Schreier presentations of
kernels of maps onto finite groups, kernel shapes of free and direct
products, characteristic kernels and embedding targets."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod

from sympy import isprime, primitive_root

from .automorphisms import ls_generators, endo_of_ls
from .graphs import (BoundExceeded, GraphError, Join, Leaf, P4Witness,
                     SimpleGraph, amalgam_graph, cograph_decompose, star)
from .groupexpr import (DirectProduct, FreeAbelianRank, FreeProduct, FreeRank, GroupExpr,
                        free_power)
from .lifts import abelianization_matrix
from .words import reduce_letters

# reidemeister_schreier refuses quotients larger than this
QUOTIENT_BOUND = 512


# finite quotients

@dataclass(frozen=True)
class AbelianQuotient:
    """v -> images[v] in Z_{m_1} x ... x Z_{m_k}."""
    moduli: tuple
    images: tuple   # (vertex, residue vector) pairs

    def __post_init__(self):
        if any(m < 1 for m in self.moduli):
            raise GraphError("moduli must be positive")

    @property
    def order(self) -> int:
        return prod(self.moduli)

    def identity(self):
        return (0,) * len(self.moduli)

    def image(self, v: str):
        return dict(self.images)[v]

    def mul(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))


@dataclass(frozen=True)
class SemidirectQuotient:
    """Z_p ⋊ Z_d with 1 ∈ Z_d acting as multiplication by h = ζ^((p-1)/d).

    The chosen vertex v maps to the generator of Z_d, w to that of Z_p, and
    every other vertex to the identity."""
    p: int
    d: int
    v: str
    w: str

    def __post_init__(self):
        if not isprime(self.p) or (self.p - 1) % self.d:
            raise GraphError(f"need a prime p ≡ 1 mod d, got p={self.p}, d={self.d}")
        object.__setattr__(self, "h", pow(primitive_root(self.p), (self.p - 1) // self.d, self.p))

    @property
    def order(self) -> int:
        return self.p * self.d

    def identity(self):
        return (0, 0)

    def image(self, u: str):
        if u == self.v:
            return (0, 1 % self.d)
        if u == self.w:
            return (1 % self.p, 0)
        return (0, 0)

    def mul(self, x, y):
        return ((x[0] + pow(self.h, x[1], self.p) * y[0]) % self.p, (x[1] + y[1]) % self.d)


FiniteQuotientSpec = AbelianQuotient | SemidirectQuotient


def residue_quotient(g: SimpleGraph, residues: dict) -> AbelianQuotient:
    """A_Γ -> ∏ Z_{r_v}, v -> the generator of its own factor."""
    moduli = tuple(int(residues[v]) for v in g.vertices)
    n = len(g)
    return AbelianQuotient(moduli, tuple((v, tuple(int(i == j) for j in range(n)))
                                         for i, v in enumerate(g.vertices)))


def cyclic_vertex_quotient(g: SimpleGraph, v: str, d: int) -> AbelianQuotient:
    """A_Γ -> Z_d with v -> 1 and every other vertex -> 0."""
    g.check_vertex(v)
    return AbelianQuotient((d,), tuple((u, (int(u == v) % d,)) for u in g.vertices))


def _element_inverse(q, x):
    # finite group: x^-1 = x^(ord - 1)
    y, prev = x, q.identity()
    while y != q.identity():
        prev, y = y, q.mul(y, x)
    return prev


def _check_quotient(g: SimpleGraph, q) -> None:
    if isinstance(q, AbelianQuotient):
        names = [v for v, _ in q.images]
        if sorted(names) != sorted(g.vertices):
            raise GraphError("quotient must give an image for every vertex")
        for _, img in q.images:
            if len(img) != len(q.moduli):
                raise GraphError("image length does not match the moduli")
        return
    g.check_vertex(q.v)
    g.check_vertex(q.w)
    for a, b in g.edge_list():
        x, y = q.image(a), q.image(b)
        if q.mul(x, y) != q.mul(y, x):
            raise GraphError(f"images of adjacent {a}, {b} do not commute")


# presentations

@dataclass
class Presentation:
    generators: list
    relators: list          # tuples of (generator, ±1) letters, freely reduced
    meta: dict = field(default_factory=dict)

    def text(self) -> str:
        rels = [" ".join(x if s > 0 else f"{x}^-1" for x, s in r) for r in self.relators]
        return f"< {', '.join(self.generators)} | {'; '.join(rels)} >"


def free_reduce(letters) -> tuple:
    out: list = []
    for x in letters:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(letters) -> tuple:
    w = list(free_reduce(letters))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def reidemeister_schreier(g: SimpleGraph, q, bound: int = QUOTIENT_BOUND) -> Presentation:
    """Presentation of ker(A_Γ -> Q) from a breadth-first Schreier transversal."""
    _check_quotient(g, q)
    if q.order > bound:
        raise BoundExceeded("reidemeister_schreier", q.order, bound)
    gens = list(g.vertices)
    img = {v: q.image(v) for v in gens}
    e = q.identity()
    cosets = [e]
    index = {e: 0}
    rep = {0: ()}
    tree = set()
    i = 0
    while i < len(cosets):
        c = cosets[i]
        for x in gens:
            y = q.mul(c, img[x])
            if y not in index:
                index[y] = len(cosets)
                cosets.append(y)
                rep[index[y]] = rep[i] + ((x, 1),)
                tree.add((i, x))
        i += 1
    if len(cosets) != q.order:
        raise GraphError(f"map is not onto: image has {len(cosets)} of {q.order} elements")
    step = {(k, x): index[q.mul(c, img[x])] for k, c in enumerate(cosets) for x in gens}
    back = {(k, x): index[q.mul(c, _element_inverse(q, img[x]))]
            for k, c in enumerate(cosets) for x in gens}

    def name(k, x):
        return f"{x}.{k}"

    schreier = [name(k, x) for k in range(len(cosets)) for x in gens if (k, x) not in tree]
    relators = []
    for k in range(len(cosets)):
        for a, b in g.edge_list():
            word = []
            c = k
            for x, s in ((a, 1), (b, 1), (a, -1), (b, -1)):
                if s > 0:
                    if (c, x) not in tree:
                        word.append((name(c, x), 1))
                    c = step[(c, x)]
                else:
                    c = back[(c, x)]
                    if (c, x) not in tree:
                        word.append((name(c, x), -1))
            rel = free_reduce(word)
            if rel:
                relators.append(rel)
    return Presentation(schreier, relators,
                        {"index": len(cosets), "transversal": [rep[k] for k in range(len(cosets))]})


@dataclass
class NotRecognized:
    reason: str
    relators: tuple = ()


def _inverse(letters) -> tuple:
    return tuple((x, -s) for x, s in reversed(letters))


def _substitute(letters, x: str, body: tuple) -> tuple:
    inv_body = _inverse(body)
    out: list = []
    for y, s in letters:
        if y == x:
            out.extend(body if s > 0 else inv_body)
        else:
            out.append((y, s))
    return free_reduce(out)


def _rotations(r: tuple):
    for k in range(len(r)):
        rot = r[k:] + r[:k]
        yield rot
        yield _inverse(rot)


def _as_commutator(r: tuple):
    """(U, V) with r a cyclic conjugate of U V U^-1 V^-1, shortest U first, else None."""
    n = len(r)
    if n < 4 or n % 2:
        return None
    h = n // 2
    rots = list(_rotations(r))
    for i in range(1, h):
        for rot in rots:
            U, V = rot[:i], rot[i:h]
            if rot[h:h + i] == _inverse(U) and rot[h + i:] == _inverse(V):
                return U, V
    return None


def _canonical_relator(r: tuple) -> tuple:
    return min(_rotations(r)) if r else r


def _single_occurrence(r: tuple) -> list[str]:
    counts: dict = {}
    for x, _ in r:
        counts[x] = counts.get(x, 0) + 1
    return [x for x, c in counts.items() if c == 1]


def _is_simple_commutator(r: tuple) -> bool:
    if len(r) != 4:
        return False
    (x, s), (y, t), (x2, s2), (y2, t2) = r
    return x == x2 and y == y2 and x != y and s2 == -s and t2 == -t


def _reduce_modulo(raag: SimpleGraph, r: tuple) -> tuple:
    """Shortest cyclic rotation of r after cancelling across commuting letters."""
    best = r
    for k in range(len(r)):
        w = cyclic_reduce(reduce_letters(raag, r[k:] + r[:k]))
        if len(w) < len(best):
            best = w
    return best


def _shortening_move(rels: list):
    """A substitution y -> c y, y c or c^-1 y c that shortens the relators most,
    among those that shorten some relator which is not yet a simple commutator."""
    bad = [r for r in rels if not _is_simple_commutator(r)]
    occurs: dict = {}
    for q in rels:
        for u in {u for u, _ in q}:
            occurs.setdefault(u, []).append(q)

    def gain(qs, y, body):
        return sum(len(q) - len(cyclic_reduce(_substitute(q, y, body))) for q in qs)

    # only letters cyclically next to y can cancel against it
    beside: dict = {}
    for r in bad:
        for k, (u, _) in enumerate(r):
            for w, _ in (r[k - 1], r[(k + 1) % len(r)]):
                if w != u:
                    beside.setdefault(u, set()).add(w)
    best, best_gain = None, 0
    for y in sorted(beside):
        local = [r for r in bad if any(u == y for u, _ in r)]
        for c in sorted(beside[y]):
            for e in (1, -1):
                ce, yl = ((c, e),), ((y, 1),)
                for body in (ce + yl, yl + ce, _inverse(ce) + yl + ce):
                    if gain(local, y, body) <= 0:
                        continue
                    total = gain(occurs[y], y, body)
                    if total > best_gain:
                        best, best_gain = (y, body), total
    return best


def recognize_raag(p: Presentation, max_moves: int = 10_000) -> SimpleGraph | NotRecognized:
    """Bounded Tietze simplification, then read commutator relators as edges.

    Moves, in order of preference: drop trivial and repeated relators;
    eliminate a generator occurring once in some relator; apply the
    substitution y -> c y, y c or c^-1 y c that shortens the relators most;
    when a relator reads [U, W] with a generator y occurring once in W,
    replace y by the new generator W (a Nielsen move).  Repeated states end
    the search.
    """
    gens = list(p.generators)
    rels = list(p.relators)
    visited: set = set()
    for _ in range(max_moves):
        seen = set()
        cleaned = []
        for r in rels:
            r = cyclic_reduce(r)
            key = _canonical_relator(r)
            if r and key not in seen:
                seen.add(key)
                cleaned.append(r)
        rels = cleaned
        # eliminate a generator that occurs once in a relator
        # the elimination that lengthens the other relators least
        count: dict = {}
        for r in rels:
            for u, _ in r:
                count[u] = count.get(u, 0) + 1
        move, least = None, None
        for i, r in enumerate(rels):
            for x in _single_occurrence(r):
                growth = (len(r) - 2) * (count[x] - 1) - len(r)
                if least is None or growth < least:
                    move, least = (i, x), growth
        if move is not None:
            i, x = move
            r = rels.pop(i)
            k = next(j for j, (y, _) in enumerate(r) if y == x)
            s = r[k][1]
            # r = P x^s S = 1  =>  x^s = P^-1 S^-1
            body = _inverse(r[:k]) + _inverse(r[k + 1:])
            if s < 0:
                body = _inverse(body)
            rels = [_substitute(q, x, free_reduce(body)) for q in rels]
            gens.remove(x)
            continue
        simple = [r for r in rels if _is_simple_commutator(r)]
        if len(simple) == len(rels):
            break
        # shorten the other relators modulo the simple commutators
        raag = SimpleGraph(gens, [(r[0][0], r[1][0]) for r in simple])
        shorter = [r if _is_simple_commutator(r) else _reduce_modulo(raag, r) for r in rels]
        if sum(map(len, shorter)) < sum(map(len, rels)):
            rels = [r for r in shorter if r]
            continue
        move = _shortening_move(rels)
        if move is not None:
            y, body = move
            rels = [_substitute(q, y, body) if any(u == y for u, _ in q) else q for q in rels]
            continue
        state = frozenset(_canonical_relator(r) for r in rels)
        if state in visited:
            break
        visited.add(state)
        # Nielsen move: turn a relator [U, V] into [x, y] one side at a time
        done = False
        for r in rels:
            if _is_simple_commutator(r):
                continue
            form = _as_commutator(r)
            if form is None:
                continue
            for W in sorted(form, key=len, reverse=True):
                once = _single_occurrence(W) if len(W) > 1 else []
                if once:
                    break
            else:
                continue
            y = min(once, key=lambda z: sum(z == u for q in rels for u, _ in q))
            k = next(j for j, (u, _) in enumerate(W) if u == y)
            f = W[k][1]
            # new y' = W = P y^f S  =>  y^f = P^-1 y' S^-1
            body = _inverse(W[:k]) + ((y, 1),) + _inverse(W[k + 1:])
            if f < 0:
                body = _inverse(body)
            rels = [_substitute(q, y, free_reduce(body)) for q in rels]
            done = True
            break
        if not done:
            break
    edges = set()
    for r in rels:
        if not _is_simple_commutator(r):
            return NotRecognized(f"relator of length {len(r)} is not a commutator of two generators",
                                 tuple(rels))
        edges.add(frozenset((r[0][0], r[1][0])))
    return SimpleGraph(gens, [tuple(e) for e in edges])


# kernel shapes

def kernel_structure_free_product(n1: GroupExpr, n2: GroupExpr, a1: int, a2: int) -> GroupExpr:
    """Kernel of G_1 * G_2 -> A_1 x A_2 from the kernels N_i and orders a_i = |A_i|."""
    if a1 < 1 or a2 < 1:
        raise GraphError("quotient orders must be positive")
    return FreeProduct(free_power(n1, a2), free_power(n2, a1), FreeRank((a1 - 1) * (a2 - 1)))


def kernel_structure_cograph(g: SimpleGraph, residues: dict) -> GroupExpr | P4Witness:
    """Kernel of A_Γ -> ∏ Z_{r_v} evaluated over the cotree."""
    for v in g.vertices:
        if int(residues[v]) < 1:
            raise GraphError(f"residue for {v!r} must be positive")
    tree = cograph_decompose(g)
    if isinstance(tree, P4Witness):
        return tree

    def walk(t) -> tuple[GroupExpr, int]:
        if isinstance(t, Leaf):
            return FreeRank(1), int(residues[t.vertex])
        parts = [walk(c) for c in t.children]
        if isinstance(t, Join):
            return DirectProduct(*(k for k, _ in parts)), prod(a for _, a in parts)
        kernel, order = parts[0]
        for k, a in parts[1:]:
            kernel = kernel_structure_free_product(kernel, k, order, a)
            order *= a
        return kernel, order

    return walk(tree)[0]


@dataclass
class CharacteristicVerdict:
    characteristic: bool
    witness: object = None      # violating LS generator
    detail: str = ""

    def __bool__(self) -> bool:
        return self.characteristic


def is_characteristic_kernel(g: SimpleGraph, residues: dict) -> CharacteristicVerdict:
    """Whether ∏ r_v Z ⊂ Z^V is preserved by every LS generator's matrix."""
    r = [int(residues[v]) for v in g.vertices]
    for gen in ls_generators(g):
        m = abelianization_matrix(g, endo_of_ls(g, gen))
        for j, rj in enumerate(r):
            for i, ri in enumerate(r):
                if (m[i][j] * rj) % ri:
                    return CharacteristicVerdict(False, gen,
                                                 f"{g.vertices[j]}^{rj} leaves the kernel "
                                                 f"(coefficient {m[i][j]} on {g.vertices[i]})")
    return CharacteristicVerdict(True)


# embedding targets

def prime_congruent_one(d: int, limit: int = 10**6) -> int:
    """Smallest prime p with p ≡ 1 (mod d)."""
    if d < 1:
        raise GraphError("d must be positive")
    p = d + 1
    while p <= limit:
        if isprime(p):
            return p
        p += d
    raise BoundExceeded("prime search", p, limit)


def virtual_embed_target(g: SimpleGraph, v: str, d: int) -> tuple[SimpleGraph, int]:
    g.check_vertex(v)
    if d < 1:
        raise GraphError("d must be positive")
    return amalgam_graph(g, star(g, v), d), prime_congruent_one(d)


def semidirect_quotient(g: SimpleGraph, v: str, d: int) -> SemidirectQuotient | None:
    """The Z_p ⋊ Z_d quotient with w the first vertex outside st(v); None if st(v) = V."""
    outside = [w for w in g.vertices if w not in star(g, v)]
    if not outside:
        return None
    return SemidirectQuotient(prime_congruent_one(d), d, v, outside[0])


def _clean(spec: dict) -> dict:
    out = {}
    for i, x in spec.items():
        i, x = int(i), int(x)
        if i < 1:
            raise GraphError(f"factor index must be positive, got {i}")
        out[i] = x
    return out


@dataclass
class EmbedReport:
    source: GroupExpr
    target: GroupExpr
    conditions: dict        # condition text -> bool
    case: str = ""

    @property
    def embeds(self) -> bool:
        return all(self.conditions.values())


def embed_target_fpa(e: dict, r: dict) -> EmbedReport:
    """Source *_i (Z^i)^{*e_i}, residue r_i on each Z^i factor."""
    e = {i: k for i, k in _clean(e).items() if k}
    r = _clean(r)
    if not e:
        raise GraphError("need at least one factor")
    for i in e:
        if r.get(i, 0) < 1:
            raise GraphError(f"missing positive residue r_{i}")
    E = sum(e.values())
    R = prod(r[i] ** (i * k) for i, k in e.items())
    c = {i: k * R // r[i] ** i for i, k in e.items()}
    f = (E - 1) * R - sum(c.values()) + 1
    source = FreeProduct(*(free_power(FreeAbelianRank(i), k) for i, k in e.items()))
    target = FreeProduct(FreeRank(f), *(free_power(FreeAbelianRank(i), c[i]) for i in c))
    conditions = {}
    if e.get(1, 0) > 0:
        case = "e_1 > 0"
        conditions[f"gcd(E-1, r_1) = gcd({E - 1}, {r[1]}) = 1"] = gcd(E - 1, r[1]) == 1
        for i in sorted(e):
            if i != 1:
                conditions[f"r_{i} | r_1 ({r[i]} | {r[1]})"] = r[1] % r[i] == 0
    else:
        case = "e_1 = 0"
        top = max(e)
        for i in sorted(e):
            vals = [e.get(j, 0) - (j == i) for j in range(1, top + 1)] + [r[i]]
            gg = 0
            for x in vals:
                gg = gcd(gg, x)
            conditions[f"gcd({', '.join(map(str, vals))}) = 1"] = gg == 1
    return EmbedReport(source, target, conditions, case)


def embed_target_dpf(e: dict, r: dict) -> EmbedReport:
    """Source ∏_i F_i^{e_i} (i >= 2), residue r_i on each F_i factor."""
    e = {i: k for i, k in _clean(e).items() if k}
    r = _clean(r)
    if not e:
        raise GraphError("need at least one factor")
    for i in e:
        if i < 2:
            raise GraphError(f"free factors need rank >= 2, got F_{i}")
        if r.get(i, 0) < 1:
            raise GraphError(f"missing positive residue r_{i}")
    source = DirectProduct(*(FreeRank(i) for i, k in sorted(e.items()) for _ in range(k)))
    target = DirectProduct(*(FreeRank(r[i] ** i * (i - 1) + 1)
                             for i, k in sorted(e.items()) for _ in range(k)))
    conditions = {f"gcd({i - 1}, r_{i}={r[i]}) = 1": gcd(i - 1, r[i]) == 1 for i in sorted(e)}
    return EmbedReport(source, target, conditions, "direct product of free groups")


def fpa_graph(e: dict) -> SimpleGraph:
    """Disjoint union of cliques: e_i copies of K_i."""
    from .groupexpr import to_graph
    return to_graph(FreeProduct(*(free_power(FreeAbelianRank(i), k)
                                  for i, k in _clean(e).items() if k)), prefix="v")


__all__ = [
    "AbelianQuotient", "SemidirectQuotient", "FiniteQuotientSpec", "Presentation", "NotRecognized",
    "residue_quotient", "cyclic_vertex_quotient", "reidemeister_schreier", "recognize_raag",
    "kernel_structure_free_product", "kernel_structure_cograph", "is_characteristic_kernel",
    "virtual_embed_target", "semidirect_quotient", "embed_target_fpa", "embed_target_dpf",
    "prime_congruent_one", "EmbedReport", "CharacteristicVerdict", "fpa_graph",
    "free_reduce", "cyclic_reduce",
]
