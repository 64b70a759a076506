"""Expressions for groups built from free and free abelian groups by free and
direct products, kept in a canonical form so that equal shapes compare equal."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import itertools
from itertools import groupby

from .graphs import SimpleGraph, disjoint_union, join

_KIND_ORDER = {"Z": 0, "dp": 1, "fp": 2, "F": 3}


@dataclass(frozen=True)
class GroupExpr:
    """kind is "F" (free, rank), "Z" (free abelian, rank >= 2), "fp" or "dp"
    (free or direct product of children).  Z^1 is stored as F_1."""
    kind: str
    rank: int = 0
    children: tuple = ()

    def sort_key(self):
        # larger abelian ranks first so text reads (Z^3) * (Z^2) * F_k; free ranks ascend
        rank = -self.rank if self.kind == "Z" else self.rank
        return (_KIND_ORDER[self.kind], rank, tuple(c.sort_key() for c in self.children))

    def __str__(self) -> str:
        return render(self)

    @property
    def is_trivial(self) -> bool:
        return self.kind == "F" and self.rank == 0


def FreeRank(k: int) -> GroupExpr:
    if k < 0:
        raise ValueError(f"negative rank {k}")
    return GroupExpr("F", k)


def FreeAbelianRank(i: int) -> GroupExpr:
    if i < 0:
        raise ValueError(f"negative rank {i}")
    if i <= 1:
        return GroupExpr("F", i)
    return GroupExpr("Z", i)


def FreeProduct(*children: GroupExpr) -> GroupExpr:
    flat: list[GroupExpr] = []
    free = 0
    for c in children:
        for d in (c.children if c.kind == "fp" else (c,)):
            if d.kind == "F":
                free += d.rank
            else:
                flat.append(d)
    if free:
        flat.append(GroupExpr("F", free))
    if not flat:
        return FreeRank(0)
    if len(flat) == 1:
        return flat[0]
    return GroupExpr("fp", 0, tuple(sorted(flat, key=GroupExpr.sort_key)))


def DirectProduct(*children: GroupExpr) -> GroupExpr:
    flat: list[GroupExpr] = []
    abelian = 0
    for c in children:
        for d in (c.children if c.kind == "dp" else (c,)):
            if d.kind == "Z" or (d.kind == "F" and d.rank <= 1):
                abelian += d.rank
            else:
                flat.append(d)
    if abelian:
        flat.append(FreeAbelianRank(abelian))
    if not flat:
        return FreeRank(0)
    if len(flat) == 1:
        return flat[0]
    return GroupExpr("dp", 0, tuple(sorted(flat, key=GroupExpr.sort_key)))


def free_power(e: GroupExpr, k: int) -> GroupExpr:
    return FreeProduct(*([e] * k))


def direct_power(e: GroupExpr, k: int) -> GroupExpr:
    return DirectProduct(*([e] * k))


def render(e: GroupExpr) -> str:
    if e.kind == "F":
        if e.rank == 0:
            return "1"
        return "Z" if e.rank == 1 else f"F_{e.rank}"
    if e.kind == "Z":
        return f"Z^{e.rank}"
    sep, power = (" * ", "*") if e.kind == "fp" else (" x ", "x")
    parts = []
    for child, run in groupby(e.children):
        k = len(list(run))
        text = render(child)
        if k == 1 or e.kind == "dp":
            parts += [text] * k
            continue
        if child.kind != "F":
            text = f"({text})"
        parts.append(f"{text}^{{{power}{k}}}")
    inner = [f"({p})" if sep == " x " and " * " in p else p for p in parts]
    return sep.join(inner)


def euler_characteristic(e: GroupExpr) -> Fraction:
    if e.kind == "F":
        return Fraction(1 - e.rank)
    if e.kind == "Z":
        return Fraction(0)
    if e.kind == "fp":
        chi = Fraction(1)
        for c in e.children:
            chi += euler_characteristic(c) - 1
        return chi
    chi = Fraction(1)
    for c in e.children:
        chi *= euler_characteristic(c)
    return chi


def to_graph(e: GroupExpr, prefix: str = "x") -> SimpleGraph:
    """A defining graph: F_k edgeless, Z^i complete, * disjoint union, x join."""
    counter = iter(range(10**9))

    def build(x: GroupExpr) -> SimpleGraph:
        if x.kind in ("F", "Z"):
            names = [f"{prefix}{next(counter)}" for _ in range(x.rank)]
            return SimpleGraph(names, [] if x.kind == "F" else itertools.combinations(names, 2))
        combine = disjoint_union if x.kind == "fp" else join
        return combine(*(build(c) for c in x.children))

    return build(e)
