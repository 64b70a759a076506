"""p-adic valuations and Z_p-ranks of (pure) automorphism groups of RAAGs,
Minkowski's bound, and necessary conditions for embeddings between outer
automorphism groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from sympy import factorint, isprime, primerange
from sympy.ntheory import multiplicity

from .graphs import (BoundExceeded, GraphError, SimpleGraph, domination_structure,
                     graph_automorphisms, labeled_quotient_automorphisms, quotient_graph)

GROUP_ORDER_BOUND = 10_000


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise GraphError(f"{p} is not prime")


@dataclass(frozen=True)
class TorsionProfile:
    """nu and rank are (lo, hi) intervals; exact values have lo == hi."""
    p: int
    nu: tuple[int, int]
    rank: tuple[int, int]

    def __post_init__(self):
        for lo, hi in (self.nu, self.rank):
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if self.rank[0] > self.nu[1]:
            raise ValueError("rank lower bound exceeds nu upper bound")

    def text(self) -> str:
        def iv(x):
            return str(x[0]) if x[0] == x[1] else f"[{x[0]}, {x[1]}]"
        return f"p={self.p} nu={iv(self.nu)} rank={iv(self.rank)}"


# general linear groups and free groups

def nu_p_gl(n: int, p: int) -> int:
    """nu_p of GL(n, Z), Aut(F_n) and Out(F_n)."""
    _check_prime(p)
    if n < 1:
        raise GraphError("n must be positive")
    total, q = 0, p - 1
    while q <= n:
        total += n // q
        q *= p
    return total


def rank_p_gl(n: int, p: int) -> int:
    _check_prime(p)
    if n < 1:
        raise GraphError("n must be positive")
    return n // (p - 1)


def minkowski(n: int) -> int:
    """lcm of the orders of finite subgroups of GL(n, Z)."""
    if n < 1:
        raise GraphError("n must be positive")
    return prod(p ** nu_p_gl(n, p) for p in primerange(2, n + 2))


# pure automorphism groups

def _class_sizes(g: SimpleGraph) -> list[int]:
    return [len(c) for c in domination_structure(g).classes]


def nu_p_pure(g: SimpleGraph, p: int) -> int:
    """nu_p of the pure (outer) automorphism group: classes contribute like GL(|[v]|)."""
    _check_prime(p)
    total = 0
    for size in _class_sizes(g):
        q = p - 1
        while q <= size:
            total += size // q
            q *= p
    return total


def rank_p_pure(g: SimpleGraph, p: int) -> int:
    _check_prime(p)
    return sum(size // (p - 1) for size in _class_sizes(g))


def lower_bound_factors(g: SimpleGraph) -> list[tuple[str, int]]:
    """Factors of the product subgroup of the pure automorphism group built from
    the domination classes: ("Aut(F)", k) for null classes with k > 1 vertices,
    ("GL", k) for complete classes (singletons included)."""
    ds = domination_structure(g)
    return [("Aut(F)" if kind == "Null" else "GL", len(cls))
            for cls, kind in zip(ds.classes, ds.class_kind)]


def nu_p_of_factors(factors, p: int) -> int:
    return sum(nu_p_gl(k, p) for _, k in factors)


def rank_p_of_factors(factors, p: int) -> int:
    return sum(rank_p_gl(k, p) for _, k in factors)


# finite permutation groups

def _perm_mul(a: tuple, b: tuple) -> tuple:
    # apply b first
    return tuple(a[i] for i in b)


def group_closure(gens, bound: int = GROUP_ORDER_BOUND) -> set[tuple]:
    """All elements of the permutation group generated by gens (image tuples on 0..n-1)."""
    gens = [tuple(x) for x in gens]
    if not gens:
        return {()}
    n = len(gens[0])
    if any(len(x) != n or sorted(x) != list(range(n)) for x in gens):
        raise GraphError("generators must be permutations of one common range")
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = _perm_mul(s, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > bound:
                        raise BoundExceeded("group order", len(seen), bound)
                    nxt.append(y)
        frontier = nxt
    return seen


def nu_p_finite_group(perms, p: int, bound: int = GROUP_ORDER_BOUND) -> int:
    _check_prime(p)
    return multiplicity(p, len(group_closure(perms, bound)))


def _order(x: tuple) -> int:
    identity = tuple(range(len(x)))
    k, y = 1, x
    while y != identity:
        y = _perm_mul(x, y)
        k += 1
    return k


def rank_p_finite_group(perms, p: int, bound: int = GROUP_ORDER_BOUND) -> int:
    """Largest rank of an elementary abelian p-subgroup, by exhaustive search."""
    _check_prime(p)
    elements = group_closure(perms, bound)
    identity = next(x for x in elements if x == tuple(range(len(x))))
    order_p = sorted(x for x in elements if _order(x) == p)
    seen: set = set()

    def powers(x):
        out, y = [], identity
        for _ in range(p):
            out.append(y)
            y = _perm_mul(x, y)
        return out

    def grow(subgroup: frozenset) -> int:
        best = 0
        for x in order_p:
            if x in subgroup or any(_perm_mul(x, y) != _perm_mul(y, x) for y in subgroup):
                continue
            bigger = frozenset(_perm_mul(a, z) for a in powers(x) for z in subgroup)
            if bigger not in seen:
                seen.add(bigger)
                best = max(best, 1 + grow(bigger))
        return best

    return grow(frozenset({identity}))


def _as_index_perms(images: list[tuple[str, ...]], vertices) -> list[tuple[int, ...]]:
    pos = {v: i for i, v in enumerate(vertices)}
    return [tuple(pos[v] for v in img) for img in images]


def labeled_quotient_group(g: SimpleGraph) -> list[tuple[int, ...]]:
    """The label-preserving automorphisms of the quotient graph as index permutations."""
    q = quotient_graph(g)
    return _as_index_perms(labeled_quotient_automorphisms(q), q.graph.vertices)


def graph_symmetry_group(g: SimpleGraph) -> list[tuple[int, ...]]:
    return _as_index_perms(graph_automorphisms(g), g.vertices)


# bounds for the full groups

def full_group_bounds(g: SimpleGraph, p: int, outer: bool = True) -> TorsionProfile:
    """Intervals for nu_p and rank_p of Out(A_g) (outer) or Aut(A_g).

    Both groups share the same bounds: the pure part gives the lower bound,
    the label-preserving quotient symmetries and GL(|V|, Z) the upper one.
    """
    _check_prime(p)
    symmetries = labeled_quotient_group(g)
    nu_lo, rank_lo = nu_p_pure(g, p), rank_p_pure(g, p)
    n = len(g)
    nu_hi = min(nu_lo + nu_p_finite_group(symmetries, p), nu_p_gl(n, p))
    rank_hi = min(rank_lo + rank_p_finite_group(symmetries, p), rank_p_gl(n, p))
    return TorsionProfile(p, (nu_lo, nu_hi), (rank_lo, rank_hi))


def abelian_fits_aut_fn(prime_powers, n: int) -> bool:
    """Whether the abelian group ∏ Z_{p_i^{e_i}} embeds in Aut(F_n)."""
    total = 0
    for q in prime_powers:
        q = int(q)
        factors = factorint(q) if q >= 2 else {}
        if len(factors) != 1:
            raise GraphError(f"{q} is not a prime power")
        (p, e), = factors.items()
        total += p ** e - p ** (e - 1)
    return total <= n


# obstructions

@dataclass
class Violation:
    condition: str          # "vertex-count", "asymmetry", "symmetry-torsion", "torsion-bounds"
    p: int | None
    detail: str


@dataclass
class ObstructionReport:
    violations: list[Violation] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    @property
    def blocked(self) -> bool:
        return bool(self.violations)


def obstruction_report(source: SimpleGraph, target: SimpleGraph, primes=None) -> ObstructionReport:
    """Necessary conditions for an embedding Out(A_source) -> Out(A_target)."""
    report = ObstructionReport()
    if primes is None:
        primes = list(primerange(2, len(target) + 2))
    ns, nt = len(source), len(target)
    report.checked.append("vertex-count")
    if ns > nt:
        report.violations.append(Violation("vertex-count", None, f"{ns} > {nt}"))

    report.checked.append("asymmetry")
    source_aut = graph_symmetry_group(source)
    target_aut = graph_symmetry_group(target)
    if len(target_aut) == 1 and len(source_aut) > 1:
        report.violations.append(Violation(
            "asymmetry", None, f"target is asymmetric, source has {len(source_aut)} symmetries"))

    target_sizes = _class_sizes(target)
    for p in primes:
        report.checked.append(f"symmetry-torsion p={p}")
        nu_s = nu_p_finite_group(source_aut, p)
        nu_t = nu_p_finite_group(target_aut, p)
        if nu_s > nu_t and all(s < p - 1 for s in target_sizes):
            report.violations.append(Violation(
                "symmetry-torsion", p,
                f"nu_p(Aut source graph) = {nu_s} > {nu_t} with all target classes below {p - 1}"))

        report.checked.append(f"torsion-bounds p={p}")
        bs, bt = full_group_bounds(source, p), full_group_bounds(target, p)
        if bs.nu[0] > bt.nu[1]:
            report.violations.append(Violation(
                "torsion-bounds", p, f"nu lower {bs.nu[0]} > target upper {bt.nu[1]}"))
        if bs.rank[0] > bt.rank[1]:
            report.violations.append(Violation(
                "torsion-bounds", p, f"rank lower {bs.rank[0]} > target upper {bt.rank[1]}"))
    return report
