"""Shift integers and affine lifts of automorphisms to Z^V.

A lift is an affine map x -> M x + t with M the action on homology.  The
standard lifts of inversions and partial conjugations are translated along
their vertex by shift integers; these shifts must satisfy five linear
conditions for the lifts to respect Day's relations and to send inner
automorphisms into the lattice ∏ r_v Z.

Relation checks work on augmented matrices [[M, T], [0, I_k]].  With k = 1
the last column is a concrete shift vector; in symbolic mode each of the k
columns is the coefficient of one shift parameter, so a single pass over
the relation instances serves every shift system on the same graph.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .automorphisms import (GraphSymmetry, Inversion, PartialConjugation, Transvection,
                            Type1, WHITEHEAD_BOUND, abelian_matrix, compose,
                            conjugation, endo_of_ls, identity, iter_day_relations,
                            whitehead_inverse)
from .graphs import (GraphError, SimpleGraph, components_minus_star, dominates,
                     graph_automorphisms, link)
from .intlinalg import congruence_solvable, determinant, integer_kernel
from .words import Word

# solve_shift_system searches for a small representative over at most this many points
SHIFT_SEARCH_BOUND = 10**5


# shift systems

def shift_unknowns(g: SimpleGraph) -> list[tuple[str, frozenset]]:
    """The index set {(v, A) : A ∈ CC(v)} in a fixed order."""
    return [(v, A) for v in g.vertices for A in components_minus_star(g, v)]


def _singleton_dominators(g: SimpleGraph, v: str) -> list[str]:
    """Vertices w with {v} ∈ CC(w): w >= v and w not adjacent to v."""
    return [w for w in g.vertices
            if w != v and w not in g.neighbours[v] and dominates(g, v, w)]


def _adjacent_dominator(g: SimpleGraph, v: str) -> bool:
    return any(dominates(g, v, w) for w in g.neighbours[v])


@dataclass
class ShiftSystem:
    residues: dict          # vertex -> r_v >= 1
    shifts: dict            # (vertex, frozenset component) -> s_{v,A}
    class_shift: dict       # vertex -> s_[v], constant on domination classes

    def total(self, g: SimpleGraph, v: str) -> int:
        """S_v, the sum of s_{v,A} over A ∈ CC(v)."""
        return sum(self.shifts.get((v, A), 0) for A in components_minus_star(g, v))

    def to_dict(self, g: SimpleGraph) -> dict:
        order = g.index.__getitem__
        return {
            "residues": {v: self.residues[v] for v in g.vertices},
            "shifts": {v: [{"component": sorted(A, key=order), "shift": self.shifts.get((v, A), 0)}
                           for A in components_minus_star(g, v)] for v in g.vertices},
            "class_shift": {v: self.class_shift.get(v, 0) for v in g.vertices},
        }

    def dumps(self, g: SimpleGraph) -> str:
        return json.dumps(self.to_dict(g), indent=2)

    @classmethod
    def from_dict(cls, g: SimpleGraph, data: dict) -> "ShiftSystem":
        try:
            residues = {v: int(data["residues"][v]) for v in g.vertices}
            shifts = {}
            for v, entries in data.get("shifts", {}).items():
                g.check_vertex(v)
                for e in entries:
                    shifts[(v, frozenset(e["component"]))] = int(e["shift"])
            class_shift = {v: int(data.get("class_shift", {}).get(v, 0)) for v in g.vertices}
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed shift system: {exc}") from None
        known = set(shift_unknowns(g))
        for key in shifts:
            if key not in known:
                raise GraphError(f"{sorted(key[1])} is not a component of Γ - st({key[0]})")
        if any(r < 1 for r in residues.values()):
            raise GraphError("residues must be positive")
        return cls(residues, shifts, class_shift)

    @classmethod
    def loads(cls, g: SimpleGraph, text: str) -> "ShiftSystem":
        import yaml
        return cls.from_dict(g, yaml.safe_load(text))


def derived_class_shift(g: SimpleGraph, shifts: dict) -> dict:
    """s_[v] = s_{w,{v}} for the first non-adjacent w >= v, else 0."""
    out = {}
    for v in g.vertices:
        ws = _singleton_dominators(g, v)
        out[v] = shifts.get((ws[0], frozenset([v])), 0) if ws else 0
    return out


@lru_cache(maxsize=256)
def _parameter_index(g: SimpleGraph) -> dict:
    keys = [("s",) + u for u in shift_unknowns(g)] + [("c", v) for v in g.vertices]
    return {k: i for i, k in enumerate(keys)}


@lru_cache(maxsize=256)
def _linear_conditions(g: SimpleGraph) -> dict[str, list[tuple[list[int], tuple]]]:
    """Conditions 1-4 and the class-shift rule as rows over the parameters,
    each row paired with a witness."""
    pidx = _parameter_index(g)
    k = len(pidx)
    cc = {v: components_minus_star(g, v) for v in g.vertices}

    def row(terms):
        r = [0] * k
        for key, c in terms:
            r[pidx[key]] += c
        return r

    def total(v, c=1):
        return [(("s", v, A), c) for A in cc[v]]

    conds: dict = {"1": [], "2": [], "3": [], "4": [], "class": []}
    for v in g.vertices:
        for w in g.vertices:
            if v == w or not dominates(g, v, w):
                continue
            conds["1"].append((row(total(v) + total(w, -1)), (v, w)))
            for A in cc[v]:
                if w in A:
                    continue
                terms = [(("s", v, A), 1)] + [(("s", w, B), -1) for B in cc[w] if B <= A]
                conds["2"].append((row(terms), (v, w, A)))
    for perm in graph_automorphisms(g):
        mp = dict(zip(g.vertices, perm))
        for v, A in shift_unknowns(g):
            img = (mp[v], frozenset(mp[u] for u in A))
            conds["3"].append((row([(("s", v, A), 1), (("s",) + img, -1)]), (v, A, perm)))
    for v in g.vertices:
        ws = _singleton_dominators(g, v)
        single = frozenset([v])
        for w1, w2 in zip(ws, ws[1:]):
            conds["4"].append((row([(("s", w1, single), 1), (("s", w2, single), -1)]), (v, w1, w2)))
        if _adjacent_dominator(g, v):
            for w in ws:
                conds["4"].append((row([(("s", w, single), 1)]), (v, w)))
        terms = [(("c", v), 1)] + ([(("s", ws[0], single), -1)] if ws else [])
        conds["class"].append((row(terms), (v,)))
    return conds


def _parameter_vector(g: SimpleGraph, s: ShiftSystem) -> list[int]:
    pidx = _parameter_index(g)
    vec = [0] * len(pidx)
    for (v, A) in shift_unknowns(g):
        vec[pidx[("s", v, A)]] = s.shifts.get((v, A), 0)
    for v in g.vertices:
        vec[pidx[("c", v)]] = s.class_shift.get(v, 0)
    return vec


@dataclass
class ConditionReport:
    results: dict = field(default_factory=dict)   # condition -> (ok, witness or None)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.results.values())


def check_shift_conditions(g: SimpleGraph, s: ShiftSystem) -> ConditionReport:
    vec = _parameter_vector(g, s)
    report = ConditionReport()
    for name, rows in _linear_conditions(g).items():
        bad = next((w for r, w in rows if sum(a * b for a, b in zip(r, vec))), None)
        report.results[name] = (bad is None, bad)
    bad5 = next((v for v in g.vertices if (s.total(g, v) + 1) % s.residues[v]), None)
    report.results["5"] = (bad5 is None, bad5)
    return report


@dataclass
class Infeasible:
    reason: str
    witness: object = None


def _check_residues(g: SimpleGraph, residues: dict) -> dict:
    out = {}
    for v in g.vertices:
        if v not in residues:
            raise GraphError(f"no residue for vertex {v!r}")
        r = int(residues[v])
        if r < 1:
            raise GraphError(f"residue for {v!r} must be positive, got {r}")
        out[v] = r
    return out


@lru_cache(maxsize=256)
def _condition_lattice(g: SimpleGraph) -> list[list[int]]:
    """Basis of the integer solutions of conditions 1-4 and the class rule."""
    rows = [r for rs in _linear_conditions(g).values() for r, _ in rs]
    return integer_kernel(rows, len(_parameter_index(g)))


def solve_shift_system(g: SimpleGraph, residues: dict,
                       search_bound: int = SHIFT_SEARCH_BOUND) -> ShiftSystem | Infeasible:
    """Integers satisfying conditions 1-5, or an infeasibility witness.

    Conditions 1-4 cut out a lattice B Z^d; condition 5 becomes congruences
    in the lattice coordinates, decided as one linear Diophantine system.
    A small representative is then picked among coordinates mod lcm(r)."""
    from .intlinalg import solve_integer_system
    residues = _check_residues(g, residues)
    pidx = _parameter_index(g)
    k = len(pidx)
    basis = _condition_lattice(g)
    d = len(basis)
    cc = {v: components_minus_star(g, v) for v in g.vertices}

    def coeffs(v):
        # coefficient of t_j in S_v
        return [sum(b[pidx[("s", v, A)]] for A in cc[v]) for b in basis]

    cong = {v: coeffs(v) for v in g.vertices}
    blocked = [v for v in g.vertices if not congruence_solvable(cong[v], -1, residues[v])]
    if blocked:
        return Infeasible("condition 5 has no solution at these vertices", blocked)
    # joint system: c_v·t + r_v u_v = -1 for all v
    n = len(g)
    A = [cong[v] + [residues[v] if j == i else 0 for j in range(n)]
         for i, v in enumerate(g.vertices)]
    sol = solve_integer_system(A, [-1] * n, d + n)
    if sol is None:
        return Infeasible("condition 5 has no joint solution", "joint")
    L = 1
    for r in residues.values():
        L = L * r // gcd(L, r)
    t0 = [x % L for x in sol[0][:d]]

    def params(t):
        return [sum(b[i] * c for b, c in zip(basis, t)) for i in range(k)]

    def ok(t):
        return all((sum(c * x for c, x in zip(cong[v], t)) + 1) % residues[v] == 0
                   for v in g.vertices)

    best = t0
    if L ** d <= search_bound:
        cands = (list(t) for t in itertools.product(range(L), repeat=d))
        score = lambda t: (sum(abs(x) for x in params(t)), params(t))
        best = min((t for t in cands if ok(t)), key=score, default=t0)
    vec = params(best)
    shifts = {u: vec[pidx[("s",) + u]] for u in shift_unknowns(g)}
    class_shift = {v: vec[pidx[("c", v)]] for v in g.vertices}
    return ShiftSystem(residues, shifts, class_shift)


def uniform_component_shifts(g: SimpleGraph, r: int) -> ShiftSystem | Infeasible:
    """Uniform residue r; s_{v,A} = s on whole components of Γ, with s(m-1) ≡ -1 (mod r)."""
    if r < 1:
        raise GraphError(f"residue must be positive, got {r}")
    comps = set(g.connected_components())
    m = len(comps)
    if gcd(r, m - 1) != 1:
        return Infeasible(f"gcd(r, m-1) = gcd({r}, {m - 1}) > 1", {"r": r, "m": m})
    s = 0 if r == 1 else (-pow(m - 1, -1, r)) % r
    shifts = {(v, A): (s if A in comps else 0) for v, A in shift_unknowns(g)}
    return ShiftSystem({v: r for v in g.vertices}, shifts, derived_class_shift(g, shifts))


# affine lifts

@dataclass(frozen=True)
class AffineLift:
    linear: tuple   # rows
    shift: tuple

    def __call__(self, x):
        return tuple(sum(a * b for a, b in zip(row, x)) + t for row, t in zip(self.linear, self.shift))


def affine_compose(f: AffineLift, e: AffineLift) -> AffineLift:
    """f ∘ e."""
    M = np.array(f.linear, dtype=np.int64) @ np.array(e.linear, dtype=np.int64)
    t = np.array(f.linear, dtype=np.int64) @ np.array(e.shift, dtype=np.int64) + np.array(f.shift)
    return AffineLift(tuple(map(tuple, M.tolist())), tuple(t.tolist()))


def abelianization_matrix(g: SimpleGraph, e) -> tuple:
    """Action on H_1 = Z^V: column v is the exponent vector of e(v)."""
    m = abelian_matrix(g, e)
    if abs(determinant(m)) != 1:
        raise GraphError("abelianization matrix is not unimodular; not an automorphism")
    return m


def _shift_columns(g: SimpleGraph, gen, s: ShiftSystem | None, pidx: dict | None) -> np.ndarray:
    """n × k shift block of the lift of an LS generator."""
    n = len(g)
    k = 1 if s is not None else len(pidx)
    T = np.zeros((n, k), dtype=np.int64)
    if isinstance(gen, Inversion):
        v, key, value = gen.v, ("c", gen.v), (s.class_shift.get(gen.v, 0) if s else None)
    elif isinstance(gen, PartialConjugation):
        v, key = gen.v, ("s", gen.v, frozenset(gen.component))
        value = s.shifts.get((gen.v, frozenset(gen.component)), 0) if s else None
    else:
        return T
    if s is not None:
        T[g.index[v], 0] = value
    else:
        T[g.index[v], pidx[key]] = 1
    return T


def lift_of_generator(g: SimpleGraph, gen, s: ShiftSystem) -> AffineLift:
    """Standard lift of an LS generator, translated by its shift integer."""
    M = abelianization_matrix(g, endo_of_ls(g, gen))
    T = _shift_columns(g, gen, s, None)[:, 0]
    return AffineLift(M, tuple(int(x) for x in T))


def whitehead_factors(g: SimpleGraph, wa) -> list:
    """Write a Whitehead automorphism as a product of LS generators
    ((generator, ±1) pairs, left factor applied last)."""
    if isinstance(wa, Type1):
        out = [(GraphSymmetry(tuple(wa.perm)), 1)]
        return out + [(Inversion(v), 1) for v, e in zip(g.vertices, wa.signs) if e < 0]
    x, eps = wa.a
    A = wa.A
    out = []
    for y in g.vertices:
        if y == x:
            continue
        fwd, bwd = (y, 1) in A, (y, -1) in A
        if fwd and not bwd:
            # ({x, y}, x) = ρ_{x,y}; ({x^-1, y}, x^-1) = ρ_{x,y}^-1
            out += _rho(g, x, y, eps)
        elif bwd and not fwd:
            # ({x, y^-1}, x) = λ_{x,y}^-1; ({x^-1, y^-1}, x^-1) = λ_{x,y}
            out.append((Transvection(x, y), -eps))
    both = {y for y in g.vertices if (y, 1) in A and (y, -1) in A} - link(g, x)
    for C in components_minus_star(g, x):
        if C <= both:
            out.append((PartialConjugation(x, C), -eps))
    return out


def _rho(g: SimpleGraph, v: str, w: str, sign: int) -> list:
    """ρ_{v,w}^sign as LS factors."""
    if w in g.neighbours[v]:
        return [(Transvection(v, w), sign)]
    gamma = PartialConjugation(v, frozenset([w]))
    if sign > 0:
        return [(Transvection(v, w), 1), (gamma, -1)]
    return [(gamma, 1), (Transvection(v, w), -1)]


class _LiftEvaluator:
    """Augmented lift matrices of LS generators and Whitehead automorphisms."""

    def __init__(self, g: SimpleGraph, s: ShiftSystem | None):
        self.g = g
        self.s = s
        self.pidx = None if s is not None else _parameter_index(g)
        self.n = len(g)
        self.k = 1 if s is not None else len(self.pidx)
        self._ls: dict = {}
        self._wh: dict = {}

    def ls(self, gen, e: int) -> np.ndarray:
        key = (gen, e)
        if key not in self._ls:
            n, k = self.n, self.k
            T = _shift_columns(self.g, gen, self.s, self.pidx)
            fwd = np.eye(n + k, dtype=np.int64)
            fwd[:n, :n] = abelianization_matrix(self.g, endo_of_ls(self.g, gen))
            fwd[:n, n:] = T
            back = np.eye(n + k, dtype=np.int64)
            Minv = np.array(abelianization_matrix(self.g, endo_of_ls(self.g, gen, inverse=True)),
                            dtype=np.int64)
            back[:n, :n] = Minv
            back[:n, n:] = -Minv @ T
            self._ls[(gen, 1)] = fwd
            self._ls[(gen, -1)] = back
        return self._ls[key]

    def whitehead(self, wa, e: int) -> np.ndarray:
        key = (wa, e)
        if key not in self._wh:
            target = wa if e > 0 else whitehead_inverse(self.g, wa)
            out = np.eye(self.n + self.k, dtype=np.int64)
            for gen, f in whitehead_factors(self.g, target):
                out = out @ self.ls(gen, f)
            self._wh[key] = out
        return self._wh[key]

    def product(self, factors) -> np.ndarray:
        out = None
        for wa, e in factors:
            m = self.whitehead(wa, e)
            out = m if out is None else out @ m
        return np.eye(self.n + self.k, dtype=np.int64) if out is None else out


def lift_of_whitehead(g: SimpleGraph, wa, s: ShiftSystem) -> AffineLift:
    m = _LiftEvaluator(g, s).whitehead(wa, 1)
    n = len(g)
    return AffineLift(tuple(map(tuple, m[:n, :n].tolist())), tuple(m[:n, n].tolist()))


@dataclass
class LiftFailure:
    relation: int
    instance: object
    detail: str


@dataclass
class LiftReport:
    instances: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_relations_on_lifts(g: SimpleGraph, s: ShiftSystem,
                              bound: int = WHITEHEAD_BOUND) -> LiftReport:
    """Compose the concrete lifts of both sides of every Day relation instance."""
    ev = _LiftEvaluator(g, s)
    n = len(g)
    report = LiftReport()
    for inst in iter_day_relations(g, bound):
        report.instances += 1
        left, right = ev.product(inst.left), ev.product(inst.right)
        if not np.array_equal(left, right):
            what = "linear part" if not np.array_equal(left[:n, :n], right[:n, :n]) else "shift"
            report.failures.append(LiftFailure(inst.relation, inst, what))
    return report


@dataclass
class SymbolicRelations:
    """Per-graph residuals of every relation instance as linear forms in the shifts."""
    instances: int
    linear_failures: list          # instances whose linear parts differ
    rows: np.ndarray               # distinct nonzero residual rows, shape (m, k)
    owners: list                   # per row: (relation, first instance, count)


@lru_cache(maxsize=64)
def symbolic_relations(g: SimpleGraph, bound: int = WHITEHEAD_BOUND) -> SymbolicRelations:
    ev = _LiftEvaluator(g, None)
    n = len(g)
    seen: dict = {}
    owners: list = []
    linear_failures = []
    count = 0
    for inst in iter_day_relations(g, bound):
        count += 1
        left, right = ev.product(inst.left), ev.product(inst.right)
        if not np.array_equal(left[:n, :n], right[:n, :n]):
            linear_failures.append(inst)
            continue
        diff = left[:n, n:] - right[:n, n:]
        for row in diff:
            if row.any():
                key = tuple(row.tolist())
                if key not in seen:
                    seen[key] = len(owners)
                    owners.append([inst.relation, inst, 0])
                owners[seen[key]][2] += 1
    k = ev.k
    rows = np.array(list(seen), dtype=np.int64).reshape(len(seen), k)
    return SymbolicRelations(count, linear_failures, rows, owners)


def verify_relations_symbolic(g: SimpleGraph, s: ShiftSystem,
                              bound: int = WHITEHEAD_BOUND) -> LiftReport:
    """Same verdict as verify_relations_on_lifts, evaluated from the cached
    symbolic residuals (one failure entry per violated residual form)."""
    sym = symbolic_relations(g, bound)
    report = LiftReport(instances=sym.instances)
    for inst in sym.linear_failures:
        report.failures.append(LiftFailure(inst.relation, inst, "linear part"))
    if len(sym.rows):
        vals = sym.rows @ np.array(_parameter_vector(g, s), dtype=np.int64)
        for i in np.nonzero(vals)[0]:
            rel, inst, cnt = sym.owners[i]
            report.failures.append(LiftFailure(rel, inst, f"shift ({cnt} instances)"))
    return report


@dataclass
class InnerReport:
    results: dict = field(default_factory=dict)   # vertex -> (ok, total shift S_v + 1)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.results.values())


def verify_inner_killed(g: SimpleGraph, s: ShiftSystem) -> InnerReport:
    """The lift of conjugation by v, followed by translation by x_v, lies in ∏ r_v Z."""
    n = len(g)
    report = InnerReport()
    for v in g.vertices:
        lift = AffineLift(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)
        endo = identity(g)
        for A in components_minus_star(g, v):
            gen = PartialConjugation(v, A)
            lift = affine_compose(lift, lift_of_generator(g, gen, s))
            endo = compose(g, endo, endo_of_ls(g, gen))
        if endo != conjugation(g, Word.gen(v)):
            raise GraphError(f"partial conjugations at {v} do not compose to conjugation")
        i = g.index[v]
        shift = list(lift.shift)
        shift[i] += 1
        in_lattice = (all(lift.linear[a][b] == int(a == b) for a in range(n) for b in range(n))
                      and all(x % s.residues[u] == 0 for u, x in zip(g.vertices, shift)))
        report.results[v] = (in_lattice, shift[i])
    return report


def is_unimodular(m) -> bool:
    return abs(determinant(m)) == 1


__all__ = [
    "AffineLift", "ShiftSystem", "Infeasible", "ConditionReport", "LiftReport", "InnerReport",
    "abelianization_matrix", "lift_of_generator", "lift_of_whitehead", "whitehead_factors",
    "solve_shift_system", "check_shift_conditions", "uniform_component_shifts", "derived_class_shift",
    "verify_relations_on_lifts", "verify_relations_symbolic", "symbolic_relations",
    "verify_inner_killed", "affine_compose", "shift_unknowns", "is_unimodular",
]
