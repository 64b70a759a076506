"""Automorphisms of A_Γ: Laurence-Servatius generators, Whitehead
automorphisms, and an executable check of Day's presentation.

Products of automorphisms are function compositions: ``X Y`` applies ``Y``
first.  Commutators are ``[X, Y] = X Y X^-1 Y^-1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .graphs import (BoundExceeded, GraphError, SimpleGraph, components_minus_star,
                     dominates, graph_automorphisms, link)
from .words import Letter, Word, normal_letters

# enumerate_whitehead / Day verification refuse larger graphs by default
WHITEHEAD_BOUND = 5


def inv(x: Letter) -> Letter:
    return (x[0], -x[1])


def all_letters(g: SimpleGraph) -> list[Letter]:
    """L = V ∪ V^-1 in canonical letter order."""
    return [(v, s) for v in g.vertices for s in (1, -1)]


def letter_text(x: Letter) -> str:
    return x[0] if x[1] > 0 else f"{x[0]}^-1"


def letters_text(A: Iterable[Letter], g: SimpleGraph | None = None) -> str:
    if g is not None:
        key = lambda x: (g.index[x[0]], -x[1])
    else:
        key = lambda x: (x[0], -x[1])
    return "{" + ",".join(letter_text(x) for x in sorted(A, key=key)) + "}"


# endomorphisms

@dataclass(frozen=True, eq=False)
class Endomorphism:
    """Images of the generators, in vertex order, as normal-form letter tuples."""
    images: tuple

    def __eq__(self, other) -> bool:
        return isinstance(other, Endomorphism) and (
            self is other or (hash(self) == hash(other) and self.images == other.images))

    def __hash__(self) -> int:
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash(self.images)
            self.__dict__["_hash"] = h
            return h

    @cached_property
    def inverse_images(self) -> tuple:
        return tuple(tuple((v, -s) for v, s in reversed(w)) for w in self.images)

    def image(self, g: SimpleGraph, v: str) -> Word:
        return Word(self.images[g.index[v]])

    def as_dict(self, g: SimpleGraph) -> dict[str, Word]:
        return {v: Word(w) for v, w in zip(g.vertices, self.images)}


def endomorphism(g: SimpleGraph, images: dict[str, Word]) -> Endomorphism:
    """Build from a partial generator -> word map (missing generators fixed)."""
    out = []
    for v in g.vertices:
        w = images.get(v, Word.gen(v))
        for u, s in w.letters:
            g.check_vertex(u)
        out.append(normal_letters(g, w.letters))
    return Endomorphism(tuple(out))


@lru_cache(maxsize=None)
def identity(g: SimpleGraph) -> Endomorphism:
    return Endomorphism(tuple(((v, 1),) for v in g.vertices))


def _substitute(g: SimpleGraph, e: Endomorphism, letters) -> tuple:
    idx = g.index
    ims, invs = e.images, e.inverse_images
    out: list = []
    for v, s in letters:
        out.extend(ims[idx[v]] if s > 0 else invs[idx[v]])
    return tuple(out)


def apply(g: SimpleGraph, e: Endomorphism, w: Word) -> Word:
    for v, _ in w.letters:
        g.check_vertex(v)
    return Word(normal_letters(g, _substitute(g, e, w.letters)))


@lru_cache(maxsize=1 << 20)
def compose(g: SimpleGraph, f: Endomorphism, e: Endomorphism) -> Endomorphism:
    """f ∘ e, i.e. v -> f(e(v))."""
    return Endomorphism(tuple(normal_letters(g, _substitute(g, f, w)) for w in e.images))


def endos_equal(g: SimpleGraph, f: Endomorphism, e: Endomorphism) -> bool:
    nf = lambda x: tuple(normal_letters(g, w) for w in x.images)
    return nf(f) == nf(e)


def preserves_relators(g: SimpleGraph, e: Endomorphism) -> bool:
    """Each commutation relator [v, w] (edge) is sent to the trivial word."""
    for a, b in g.edge_list():
        rel = ((a, 1), (b, 1), (a, -1), (b, -1))
        if normal_letters(g, _substitute(g, e, rel)):
            return False
    return True


def abelian_matrix(g: SimpleGraph, e: Endomorphism) -> tuple:
    """Integer matrix (tuple of rows); column v is the exponent vector of e(v)."""
    n = len(g)
    idx = g.index
    rows = [[0] * n for _ in range(n)]
    for j, w in enumerate(e.images):
        for v, s in w:
            rows[idx[v]][j] += s
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class Certified:
    """An automorphism carried together with an explicitly constructed inverse."""
    forward: Endomorphism
    backward: Endomorphism

    def inverse(self) -> "Certified":
        return Certified(self.backward, self.forward)


def certified_mul(g: SimpleGraph, x: Certified, y: Certified) -> Certified:
    return Certified(compose(g, x.forward, y.forward), compose(g, y.backward, x.backward))


# Laurence-Servatius generators

@dataclass(frozen=True)
class Inversion:
    v: str

    def text(self) -> str:
        return f"inv {self.v}"


@dataclass(frozen=True)
class GraphSymmetry:
    images: tuple  # images of the vertices, in vertex order

    def text(self, g: SimpleGraph | None = None) -> str:
        if g is None:
            return f"sym {self.images}"
        return "sym " + cycle_text(g, self.images)


@dataclass(frozen=True)
class Transvection:
    """λ_{v,w}: w -> v w (needs w <= v, v != w)."""
    v: str
    w: str

    def text(self) -> str:
        return f"transv {self.v} {self.w}"


@dataclass(frozen=True)
class PartialConjugation:
    """γ_{v,A}: u -> v u v^-1 for u in the component A of Γ - st(v)."""
    v: str
    component: frozenset

    def text(self, g: SimpleGraph | None = None) -> str:
        members = sorted(self.component, key=(g.index.__getitem__ if g else str))
        return f"pconj {self.v} {{{' '.join(members)}}}"


LSGenerator = Inversion | GraphSymmetry | Transvection | PartialConjugation


def cycle_text(g: SimpleGraph, images: Sequence[str]) -> str:
    mapping = dict(zip(g.vertices, images))
    seen, parts = set(), []
    for v in g.vertices:
        if v in seen or mapping[v] == v:
            seen.add(v)
            continue
        cyc = [v]
        seen.add(v)
        x = mapping[v]
        while x != v:
            cyc.append(x)
            seen.add(x)
            x = mapping[x]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"


def ls_generators(g: SimpleGraph) -> list:
    """All inversions, graph symmetries, transvections and partial conjugations."""
    gens: list = [Inversion(v) for v in g.vertices]
    gens += [GraphSymmetry(p) for p in graph_automorphisms(g)]
    gens += [Transvection(v, w) for v in g.vertices for w in g.vertices
             if v != w and dominates(g, w, v)]
    gens += [PartialConjugation(v, c) for v in g.vertices for c in components_minus_star(g, v)]
    return gens


def check_ls_generator(g: SimpleGraph, gen) -> None:
    if isinstance(gen, Inversion):
        g.check_vertex(gen.v)
    elif isinstance(gen, GraphSymmetry):
        if tuple(gen.images) not in set(graph_automorphisms(g)):
            raise GraphError(f"{gen.images} is not a graph automorphism")
    elif isinstance(gen, Transvection):
        if gen.v == gen.w or not dominates(g, gen.w, gen.v):
            raise GraphError(f"transvection λ_{{{gen.v},{gen.w}}} needs {gen.w} <= {gen.v}")
    elif isinstance(gen, PartialConjugation):
        if frozenset(gen.component) not in set(components_minus_star(g, gen.v)):
            raise GraphError(f"{sorted(gen.component)} is not a component of Γ - st({gen.v})")
    else:
        raise TypeError(f"not a Laurence-Servatius generator: {gen!r}")


@lru_cache(maxsize=None)
def endo_of_ls(g: SimpleGraph, gen, inverse: bool = False) -> Endomorphism:
    """The endomorphism of an LS generator (or of its inverse)."""
    check_ls_generator(g, gen)
    sign = -1 if inverse else 1
    if isinstance(gen, Inversion):
        return endomorphism(g, {gen.v: Word.gen(gen.v, -1)})
    if isinstance(gen, GraphSymmetry):
        mapping = dict(zip(g.vertices, gen.images))
        if inverse:
            mapping = {b: a for a, b in mapping.items()}
        return endomorphism(g, {v: Word.gen(w) for v, w in mapping.items()})
    if isinstance(gen, Transvection):
        return endomorphism(g, {gen.w: Word([(gen.v, sign), (gen.w, 1)])})
    v = gen.v
    return endomorphism(g, {u: Word([(v, sign), (u, 1), (v, -sign)]) for u in gen.component})


def right_transvection(g: SimpleGraph, v: str, w: str) -> Endomorphism:
    """ρ_{v,w}: w -> w v."""
    return endomorphism(g, {w: Word([(w, 1), (v, 1)])})


def conjugation(g: SimpleGraph, word: Word) -> Endomorphism:
    """Inner automorphism u -> word u word^-1."""
    return endomorphism(g, {u: word * Word.gen(u) * word.inverse() for u in g.vertices})


# Whitehead automorphisms

@dataclass(frozen=True)
class Type1:
    """v -> perm(v)^sign(v): a permutation of the letters V ∪ V^-1."""
    signs: tuple
    perm: tuple

    def text(self, g: SimpleGraph) -> str:
        inv_part = " ".join(v for v, s in zip(g.vertices, self.signs) if s < 0)
        return f"type1 signs[{inv_part}] {cycle_text(g, self.perm)}"


@dataclass(frozen=True)
class Type2:
    """(A, a): multiplier a ∈ A, a^-1 ∉ A."""
    A: frozenset
    a: Letter

    def text(self, g: SimpleGraph | None = None) -> str:
        return f"({letters_text(self.A, g)}, {letter_text(self.a)})"


WhiteheadAuto = Type1 | Type2


def type1_identity(g: SimpleGraph) -> Type1:
    return Type1((1,) * len(g), tuple(g.vertices))


def type1_act(g: SimpleGraph, t: Type1, x: Letter) -> Letter:
    i = g.index[x[0]]
    return (t.perm[i], t.signs[i] * x[1])


def type1_mul(g: SimpleGraph, s: Type1, t: Type1) -> Type1:
    """The product s t (t applied first) in (Z_2)^V ⋊ Aut(Γ)."""
    idx = g.index
    perm, signs = [], []
    for i, _ in enumerate(g.vertices):
        j = idx[t.perm[i]]
        perm.append(s.perm[j])
        signs.append(s.signs[j] * t.signs[i])
    return Type1(tuple(signs), tuple(perm))


def type1_inverse(g: SimpleGraph, t: Type1) -> Type1:
    idx = g.index
    signs = [1] * len(g)
    perm = [""] * len(g)
    for i, v in enumerate(g.vertices):
        j = idx[t.perm[i]]
        perm[j] = v
        signs[j] = t.signs[i]
    return Type1(tuple(signs), tuple(perm))


def whitehead_inverse(g: SimpleGraph, wa) -> object:
    """Explicit inverse: (A, a)^-1 = (A - a + a^-1, a^-1); type (1) by the group law."""
    if isinstance(wa, Type1):
        return type1_inverse(g, wa)
    return Type2((wa.A - {wa.a}) | {inv(wa.a)}, inv(wa.a))


def _check_type2(g: SimpleGraph, A, a) -> tuple[frozenset, Letter]:
    A = frozenset((str(v), int(s)) for v, s in A)
    a = (str(a[0]), int(a[1]))
    for v, s in A | {a}:
        g.check_vertex(v)
        if s not in (1, -1):
            raise GraphError(f"bad sign in letter {(v, s)}")
    if a not in A:
        raise GraphError(f"multiplier {letter_text(a)} is not in A")
    if inv(a) in A:
        raise GraphError(f"A contains the inverse of the multiplier {letter_text(a)}")
    return A, a


def whitehead_well_defined(g: SimpleGraph, A, a) -> tuple[bool, str]:
    """Day's criterion for (A, a) to define an automorphism.

    (1) V ∩ A ∩ A^-1 - lk(ā) is a union of components of Γ - st(ā);
    (2) ā >= x̄ for every x ∈ A - A^-1.
    """
    A, a = _check_type2(g, A, a)
    abar = a[0]
    both = {v for v in g.vertices if (v, 1) in A and (v, -1) in A} - link(g, abar)
    covered = set()
    for comp in components_minus_star(g, abar):
        if comp <= both:
            covered |= comp
        elif comp & both:
            return False, f"condition 1: {sorted(comp & both)} splits a component of Γ - st({abar})"
    if covered != both:
        return False, f"condition 1: {sorted(both - covered)} not in Γ - st({abar})"
    for x in sorted(A, key=lambda y: (g.index[y[0]], -y[1])):
        if inv(x) not in A and not dominates(g, x[0], abar):
            return False, f"condition 2: {x[0]} is not dominated by {abar}"
    return True, "well-defined"


def type2_formula(g: SimpleGraph, A, a) -> Endomorphism:
    """The four-case formula for (A, a), whether or not it is an automorphism."""
    A, a = _check_type2(g, A, a)
    images = {}
    for v in g.vertices:
        if v == a[0]:
            continue
        fwd, bwd = (v, 1) in A, (v, -1) in A
        word = [(v, 1)]
        if bwd:
            word = [inv(a)] + word
        if fwd:
            word = word + [a]
        images[v] = Word(word)
    return endomorphism(g, images)


def type1_endo(g: SimpleGraph, t: Type1) -> Endomorphism:
    return endomorphism(g, {v: Word.gen(p, s) for v, p, s in zip(g.vertices, t.perm, t.signs)})


@lru_cache(maxsize=None)
def _endo_of_whitehead(g: SimpleGraph, wa) -> Endomorphism:
    if isinstance(wa, Type1):
        return type1_endo(g, wa)
    return type2_formula(g, wa.A, wa.a)


def endo_of_whitehead(g: SimpleGraph, wa, check: bool = True) -> Endomorphism:
    if isinstance(wa, Type1):
        if tuple(wa.perm) not in set(graph_automorphisms(g)):
            raise GraphError(f"{wa.perm} is not a graph automorphism")
    elif check:
        ok, reason = whitehead_well_defined(g, wa.A, wa.a)
        if not ok:
            raise GraphError(f"{wa.text(g)} is not well-defined: {reason}")
    return _endo_of_whitehead(g, wa)


@lru_cache(maxsize=None)
def certified_whitehead(g: SimpleGraph, wa) -> Certified:
    return Certified(_endo_of_whitehead(g, wa), _endo_of_whitehead(g, whitehead_inverse(g, wa)))


def _subset_order(g: SimpleGraph, A: frozenset) -> tuple:
    return tuple(sorted((g.index[v], -s) for v, s in A))


def all_type2_candidates(g: SimpleGraph) -> Iterator[Type2]:
    """Every (A, a) with a ∈ A and a^-1 ∉ A, well-defined or not."""
    letters = all_letters(g)
    for a in letters:
        others = [x for x in letters if x != a and x != inv(a)]
        subsets = []
        for r in range(len(others) + 1):
            subsets += [frozenset(c) | {a} for c in itertools.combinations(others, r)]
        for A in sorted(subsets, key=lambda S: (len(S), _subset_order(g, S))):
            yield Type2(A, a)


def enumerate_type1(g: SimpleGraph) -> list[Type1]:
    autos = graph_automorphisms(g)
    return [Type1(signs, p) for p in autos
            for signs in itertools.product((1, -1), repeat=len(g))]


@lru_cache(maxsize=32)
def enumerate_whitehead(g: SimpleGraph, bound: int = WHITEHEAD_BOUND) -> tuple:
    """All type (1) and all well-defined type (2) Whitehead automorphisms."""
    if len(g) > bound:
        raise BoundExceeded("enumerate_whitehead", len(g), bound)
    t1 = enumerate_type1(g)
    t2 = [c for c in all_type2_candidates(g) if whitehead_well_defined(g, c.A, c.a)[0]]
    return tuple(t1) + tuple(t2)


# brute-force oracle for well-definedness

def _matrix_inverse(m: tuple) -> tuple | None:
    """Exact inverse of an integer matrix when it is integral, else None."""
    from fractions import Fraction
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for row in aug:
        vals = row[n:]
        if any(x.denominator != 1 for x in vals):
            return None
        out.append(tuple(int(x) for x in vals))
    return tuple(out)


@lru_cache(maxsize=32)
def _endomorphism_pool(g: SimpleGraph) -> dict:
    """Relator-preserving type (2) formula maps, indexed by abelian matrix."""
    pool: dict = {}
    for c in all_type2_candidates(g):
        e = type2_formula(g, c.A, c.a)
        if preserves_relators(g, e):
            pool.setdefault(abelian_matrix(g, e), []).append(e)
    return pool


def brute_force_well_defined(g: SimpleGraph, A, a) -> bool:
    """Oracle: the formula kills every relator and has a two-sided inverse among
    the relator-preserving type (2) formula maps."""
    A, a = _check_type2(g, A, a)
    phi = type2_formula(g, A, a)
    if not preserves_relators(g, phi):
        return False
    minv = _matrix_inverse(abelian_matrix(g, phi))
    if minv is None:
        return False
    ident = identity(g)
    for psi in _endomorphism_pool(g).get(minv, []):
        if compose(g, psi, phi) == ident and compose(g, phi, psi) == ident:
            return True
    return False


# Day's presentation

@dataclass(frozen=True)
class RelationInstance:
    relation: int
    left: tuple    # ((WhiteheadAuto, ±1), ...), product read as composition
    right: tuple
    note: str = ""


def _sigma_ab(g: SimpleGraph, a: Letter, b: Letter) -> Type1:
    """Type (1) element with a -> b^-1 and b -> a (ā, b̄ swapped)."""
    x, e = a
    y, d = b
    perm = list(g.vertices)
    signs = [1] * len(g)
    i, j = g.index[x], g.index[y]
    perm[i], perm[j] = y, x
    signs[i] = -d * e
    signs[j] = e * d
    return Type1(tuple(signs), tuple(perm))


def _commutator(x, y) -> tuple:
    return ((x, 1), (y, 1), (x, -1), (y, -1))


def iter_day_relations(g: SimpleGraph, bound: int = WHITEHEAD_BOUND) -> Iterator[RelationInstance]:
    """Every instance of Day's relations (1)-(10) whose side conditions hold
    among the enumerated Whitehead automorphisms."""
    whs = enumerate_whitehead(g, bound)
    t1 = [w for w in whs if isinstance(w, Type1)]
    t2 = [w for w in whs if isinstance(w, Type2)]
    well = set(t2)
    L = frozenset(all_letters(g))
    nb = g.neighbours

    def wd(A, a):
        return Type2(frozenset(A), a) if Type2(frozenset(A), a) in well else None

    # (1) (A,a)^-1 = (A - a + a^-1, a^-1), checked as (A,a)(A-a+a^-1,a^-1) = e
    for x in t2:
        y = wd((x.A - {x.a}) | {inv(x.a)}, inv(x.a))
        if y is not None:
            yield RelationInstance(1, ((x, 1), (y, 1)), ())

    by_mult: dict = {}
    for x in t2:
        by_mult.setdefault(x.a, []).append(x)

    # (2) (A,a)(B,a) = (A ∪ B, a) with A ∩ B = {a}
    for a, group in by_mult.items():
        for x in group:
            for y in group:
                if x.A & y.A == {a}:
                    z = wd(x.A | y.A, a)
                    if z is not None:
                        yield RelationInstance(2, ((x, 1), (y, 1)), ((z, 1),))

    # (3), (4), (9), (10): pairs
    for x in t2:
        a, A = x.a, x.A
        for y in t2:
            b, B = y.a, y.A
            side = not (A & B) or b[0] in nb[a[0]]
            if a not in B and inv(a) not in B and side:
                if b not in A and inv(b) not in A:
                    yield RelationInstance(3, _commutator(x, y), ())
                elif b not in A and inv(b) in A:
                    z = wd((B - {b}) | {a}, a)
                    if z is not None:
                        yield RelationInstance(4, _commutator(x, y), ((z, -1),))
        for b in all_letters(g):
            y = wd(L - {inv(b)}, b)
            if y is None:
                continue
            if b not in A and inv(b) not in A:
                yield RelationInstance(9, _commutator(x, y), ())
            elif b != a and b in A and inv(b) not in A:
                z = wd(L - {inv(a)}, a)
                if z is not None:
                    yield RelationInstance(10, _commutator(x, y), ((z, 1),))

    # (5) (A-a+a^-1, b)(A,a) = (A-b+b^-1, a) σ_{a,b}
    for x in t2:
        a, A = x.a, x.A
        for b in sorted(A, key=lambda y: (g.index[y[0]], -y[1])):
            if b == a or inv(b) in A or b[0] == a[0]:
                continue
            if not (dominates(g, a[0], b[0]) and dominates(g, b[0], a[0])):
                continue
            l1 = wd((A - {a}) | {inv(a)}, b)
            r1 = wd((A - {b}) | {inv(b)}, a)
            if l1 is None or r1 is None:
                continue
            sigma = _sigma_ab(g, a, b)
            yield RelationInstance(5, ((l1, 1), (x, 1)), ((r1, 1), (sigma, 1)))

    # (6) σ (A,a) σ^-1 = (σ(A), σ(a))
    for s in t1:
        for x in t2:
            z = Type2(frozenset(type1_act(g, s, c) for c in x.A), type1_act(g, s, x.a))
            if z in well:
                yield RelationInstance(6, ((s, 1), (x, 1), (s, -1)), ((z, 1),))

    # (7) the multiplication table of type (1)
    for s in t1:
        for t in t1:
            yield RelationInstance(7, ((s, 1), (t, 1)), ((type1_mul(g, s, t), 1),))

    # (8) (A,a) = (L - a^-1, a)(L - A, a^-1)
    for x in t2:
        y = wd(L - {inv(x.a)}, x.a)
        z = wd(L - x.A, inv(x.a))
        if y is not None and z is not None:
            yield RelationInstance(8, ((x, 1),), ((y, 1), (z, 1)))


def day_relation_instances(g: SimpleGraph, bound: int = WHITEHEAD_BOUND) -> list[RelationInstance]:
    return list(iter_day_relations(g, bound))


def product_endomorphism(g: SimpleGraph, factors) -> Endomorphism:
    """Evaluate a product of Whitehead automorphisms (left factor applied last).

    Inverse factors use the explicit inverse formulas."""
    out = None
    for wa, e in factors:
        c = certified_whitehead(g, wa)
        x = c.forward if e > 0 else c.backward
        out = x if out is None else compose(g, out, x)
    return identity(g) if out is None else out


def instance_endomorphisms(g: SimpleGraph, inst: RelationInstance) -> tuple[Endomorphism, Endomorphism]:
    return product_endomorphism(g, inst.left), product_endomorphism(g, inst.right)


@dataclass
class Failure:
    relation: int
    instance: RelationInstance
    generator: str
    left_image: str
    right_image: str


@dataclass
class DayReport:
    instances: int = 0
    per_relation: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_day_presentation(g: SimpleGraph, bound: int = WHITEHEAD_BOUND) -> DayReport:
    report = DayReport(per_relation={k: 0 for k in range(1, 11)})
    for inst in iter_day_relations(g, bound):
        report.instances += 1
        report.per_relation[inst.relation] += 1
        left, right = instance_endomorphisms(g, inst)
        if left != right:
            for v, lw, rw in zip(g.vertices, left.images, right.images):
                if lw != rw:
                    report.failures.append(Failure(inst.relation, inst, v,
                                                   str(Word(lw)), str(Word(rw))))
                    break
    return report
