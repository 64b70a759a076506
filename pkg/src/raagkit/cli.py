"""Command-line front end: ``raagkit <command> <action> [options]``.

Graphs are given as a path to a YAML/JSON document with ``vertices`` and
``edges`` or as a family shorthand such as ``P4``.  Output is key: value
lines, or one JSON document with ``--json``.  Exit status is 0 for every
analysis outcome and 2 for errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .automorphisms import (GraphSymmetry, PartialConjugation, Type1, enumerate_whitehead, letters_text, ls_generators,
                            verify_day_presentation)
from .graphs import (BoundExceeded, GraphError, P4Witness, SimpleGraph, amalgam_graph,
                     cograph_decompose, cotree_text, domination_structure, graph_automorphisms,
                     load_graph, named_graph, quotient_graph)
from .groupexpr import euler_characteristic
from .lifts import (Infeasible, ShiftSystem, check_shift_conditions, solve_shift_system,
                    verify_inner_killed, verify_relations_symbolic)
from .subgroups import (NotRecognized, cyclic_vertex_quotient, embed_target_dpf,
                        embed_target_fpa, is_characteristic_kernel, kernel_structure_cograph,
                        recognize_raag, reidemeister_schreier, residue_quotient,
                        virtual_embed_target)
from .torsion import full_group_bounds, nu_p_pure, obstruction_report, rank_p_pure
from .words import Word, normal_form, nth_roots, words_equal

STATUSES = ("ok", "infeasible", "not-recognized", "blocked", "error")


def _scalar(x) -> str:
    return json.dumps(x, default=str) if isinstance(x, (dict, list, tuple)) else str(x)


@dataclass
class CommandResult:
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 2 if self.status == "error" else 0

    def text(self) -> str:
        lines = [f"status: {self.status}"]
        for k, v in self.payload.items():
            if isinstance(v, list):
                lines.append(f"{k}:")
                lines += [f"  - {_scalar(x)}" for x in v]
            elif isinstance(v, dict):
                lines.append(f"{k}:")
                lines += [f"  {a}: {_scalar(b)}" for a, b in v.items()]
            else:
                lines.append(f"{k}: {v}")
        lines += [f"note: {d}" for d in self.diagnostics]
        return "\n".join(lines)

    def json(self) -> str:
        return json.dumps({"status": self.status, "payload": self.payload,
                           "diagnostics": self.diagnostics}, indent=2, default=str)


# argument helpers

def read_graph(arg: str) -> SimpleGraph:
    path = Path(arg)
    if path.exists():
        return load_graph(path)
    try:
        return named_graph(arg)
    except GraphError:
        raise GraphError(f"no graph file or known graph name {arg!r}") from None


def parse_residues(g: SimpleGraph, text: str) -> dict:
    """``3`` for every vertex, or ``a=2,b=3``."""
    text = text.strip()
    try:
        if "=" not in text:
            return {v: int(text) for v in g.vertices}
        out = {}
        for part in text.split(","):
            v, _, r = part.partition("=")
            g.check_vertex(v.strip())
            out[v.strip()] = int(r)
    except ValueError:
        raise GraphError(f"malformed residues {text!r}") from None
    missing = [v for v in g.vertices if v not in out]
    if missing:
        raise GraphError(f"no residue for {', '.join(missing)}")
    return out


def parse_factors(text: str) -> tuple[dict, dict]:
    """``i:r`` per factor copy, e.g. ``2:2,2:2`` is two rank-2 factors with residue 2."""
    e: dict = {}
    r: dict = {}
    for part in text.split(","):
        try:
            i, rr = (int(x) for x in part.split(":"))
        except ValueError:
            raise GraphError(f"malformed factor {part!r}, expected i:r") from None
        if r.get(i, rr) != rr:
            raise GraphError(f"conflicting residues for rank {i}")
        e[i] = e.get(i, 0) + 1
        r[i] = rr
    return e, r


def _shift_system(g: SimpleGraph, args) -> ShiftSystem | Infeasible:
    if args.shifts:
        return ShiftSystem.loads(g, Path(args.shifts).read_text())
    return solve_shift_system(g, parse_residues(g, args.residues))


def generator_text(g: SimpleGraph, gen) -> str:
    if isinstance(gen, (GraphSymmetry, PartialConjugation)):
        return gen.text(g)
    return gen.text()


# commands

def cmd_graph(args) -> CommandResult:
    g = read_graph(args.graph)
    if args.action == "show":
        return CommandResult("ok", {"graph": g.dumps()})
    if args.action == "dot":
        return CommandResult("ok", {"dot": g.to_dot()})
    if args.action == "domination":
        ds = domination_structure(g)
        order = sorted((v, w) for v, w in ds.pairs if v != w)
        return CommandResult("ok", {
            "dominations": [f"{v} <= {w}" for v, w in order],
            "classes": [f"{{{','.join(c)}}} {k}" for c, k in zip(ds.classes, ds.class_kind)]})
    if args.action == "quotient":
        q = quotient_graph(g)
        return CommandResult("ok", {
            "classes": {name: q.label_text(name) for name in q.graph.vertices},
            "edges": [f"{a} -- {b}" for a, b in q.graph.edge_list()]})
    if args.action == "cograph":
        t = cograph_decompose(g)
        if isinstance(t, P4Witness):
            return CommandResult("ok", {"cograph": False, "induced_p4": " - ".join(t.path)})
        return CommandResult("ok", {"cograph": True, "cotree": cotree_text(t)})
    if args.action == "amalgam":
        lam = [v for v in (args.lam or "").split(",") if v]
        h = amalgam_graph(g, lam, args.d)
        return CommandResult("ok", {"vertices": len(h), "graph": h.dumps()})
    if args.action == "aut":
        auts = graph_automorphisms(g)
        return CommandResult("ok", {"order": len(auts),
                                    "automorphisms": [" ".join(a) for a in auts]})
    raise GraphError(f"unknown graph action {args.action!r}")


def cmd_word(args) -> CommandResult:
    g = read_graph(args.graph)
    w = Word.parse(args.word)
    if args.action == "nf":
        return CommandResult("ok", {"normal_form": str(normal_form(g, w))})
    if args.action == "equal":
        if args.other is None:
            raise GraphError("word equal needs --other")
        return CommandResult("ok", {"equal": words_equal(g, w, Word.parse(args.other))})
    if args.action == "roots":
        roots = nth_roots(g, w, args.n, args.radius)
        return CommandResult("ok", {"count": len(roots), "roots": [str(u) for u in roots]})
    raise GraphError(f"unknown word action {args.action!r}")


def _day(g: SimpleGraph, bound: int) -> CommandResult:
    rep = verify_day_presentation(g, bound)
    payload = {"instances": rep.instances, "failures": len(rep.failures),
               "per_relation": {f"R{k}": n for k, n in rep.per_relation.items()}}
    notes = [f"R{f.relation} at {f.generator}: {f.left_image} != {f.right_image}"
             for f in rep.failures[:10]]
    return CommandResult("ok", payload, notes)


def cmd_auto(args) -> CommandResult:
    g = read_graph(args.graph)
    if args.action == "ls":
        gens = ls_generators(g)
        return CommandResult("ok", {"count": len(gens), "generators": [generator_text(g, x) for x in gens]})
    if args.action == "whitehead":
        found = enumerate_whitehead(g, args.bound)
        type1 = [w for w in found if isinstance(w, Type1)]
        type2 = [w for w in found if not isinstance(w, Type1)]
        return CommandResult("ok", {"type1": len(type1), "type2": len(type2),
                                    "type2_list": [f"({letters_text(w.A, g)}, "
                                                   f"{letters_text([w.a])})" for w in type2]})
    if args.action in ("day", "verify"):
        return _day(g, args.bound)
    raise GraphError(f"unknown auto action {args.action!r}")


def cmd_shifts(args) -> CommandResult:
    g = read_graph(args.graph)
    if args.action == "solve":
        s = solve_shift_system(g, parse_residues(g, args.residues))
        if isinstance(s, Infeasible):
            return CommandResult("infeasible", {"reason": s.reason, "witness": s.witness})
        return CommandResult("ok", {"shift_system": s.to_dict(g)})
    if args.action == "check":
        s = _shift_system(g, args)
        if isinstance(s, Infeasible):
            return CommandResult("infeasible", {"reason": s.reason, "witness": s.witness})
        rep = check_shift_conditions(g, s)
        return CommandResult("ok", {"conditions": {
            k: "ok" if ok else f"violated ({w})" for k, (ok, w) in rep.results.items()},
            "satisfied": rep.ok})
    raise GraphError(f"unknown shifts action {args.action!r}")


def cmd_lifts(args) -> CommandResult:
    g = read_graph(args.graph)
    s = _shift_system(g, args)
    if isinstance(s, Infeasible):
        return CommandResult("infeasible", {"reason": s.reason, "witness": s.witness})
    if args.action == "verify":
        rep = verify_relations_symbolic(g, s, args.bound)
        notes = [f"R{f.relation}: {f.detail}" for f in rep.failures[:10]]
        return CommandResult("ok", {"instances": rep.instances, "failures": len(rep.failures)},
                             notes)
    if args.action == "inner":
        rep = verify_inner_killed(g, s)
        return CommandResult("ok", {"killed": rep.ok, "vertices": {
            v: ("ok" if ok else "fails") + f" (S+1 = {t})" for v, (ok, t) in rep.results.items()}})
    raise GraphError(f"unknown lifts action {args.action!r}")


def cmd_subgroup(args) -> CommandResult:
    g = read_graph(args.graph)
    if args.action == "rs":
        if args.vertex:
            q = cyclic_vertex_quotient(g, args.vertex, args.d)
        else:
            q = residue_quotient(g, parse_residues(g, args.residues))
        p = reidemeister_schreier(g, q, args.bound)
        payload = {"index": p.meta["index"], "generators": len(p.generators),
                   "relators": len(p.relators)}
        if args.verbose:
            payload["presentation"] = p.text()
        h = recognize_raag(p)
        if isinstance(h, NotRecognized):
            payload["reason"] = h.reason
            return CommandResult("not-recognized", payload)
        payload["raag_vertices"] = len(h)
        payload["raag_edges"] = len(h.edges)
        payload["raag"] = h.dumps()
        return CommandResult("ok", payload)
    residues = parse_residues(g, args.residues)
    if args.action in ("kernel", "cograph-kernel"):
        k = kernel_structure_cograph(g, residues)
        if isinstance(k, P4Witness):
            return CommandResult("not-recognized", {"induced_p4": " - ".join(k.path)})
        return CommandResult("ok", {"kernel": str(k), "euler": str(euler_characteristic(k))})
    if args.action == "char":
        v = is_characteristic_kernel(g, residues)
        payload = {"characteristic": v.characteristic}
        if v.witness is not None:
            payload["witness"] = generator_text(g, v.witness)
            payload["detail"] = v.detail
        return CommandResult("ok", payload)
    raise GraphError(f"unknown subgroup action {args.action!r}")


def cmd_embed(args) -> CommandResult:
    if args.action in ("fpa", "dpf"):
        e, r = parse_factors(args.factors)
        rep = (embed_target_fpa if args.action == "fpa" else embed_target_dpf)(e, r)
        return CommandResult("ok", {"source": str(rep.source), "target": str(rep.target),
                                    "case": rep.case, "embeds": rep.embeds,
                                    "conditions": {k: v for k, v in rep.conditions.items()}})
    if args.action == "virtual":
        g = read_graph(args.graph)
        h, p = virtual_embed_target(g, args.vertex, args.d)
        return CommandResult("ok", {"prime": p, "vertices": len(h), "edges": len(h.edges),
                                    "target": h.dumps()})
    raise GraphError(f"unknown embed action {args.action!r}")


def cmd_torsion(args) -> CommandResult:
    g = read_graph(args.graph)
    if args.action == "profile":
        return CommandResult("ok", {"p": args.p, "nu_pure": nu_p_pure(g, args.p),
                                    "rank_pure": rank_p_pure(g, args.p)})
    if args.action == "bounds":
        prof = full_group_bounds(g, args.p, outer=not args.aut)
        return CommandResult("ok", {"group": "Aut" if args.aut else "Out", "p": prof.p,
                                    "nu": list(prof.nu), "rank": list(prof.rank)})
    raise GraphError(f"unknown torsion action {args.action!r}")


def cmd_obstruct(args) -> CommandResult:
    s, t = read_graph(args.source), read_graph(args.target)
    primes = [int(x) for x in args.primes.split(",")] if args.primes else None
    rep = obstruction_report(s, t, primes)
    payload = {"checked": rep.checked,
               "violations": [f"{v.condition}" + (f" p={v.p}" if v.p else "") + f": {v.detail}"
                              for v in rep.violations]}
    if rep.blocked:
        payload["blocked"] = rep.violations[0].condition
        return CommandResult("blocked", payload)
    return CommandResult("ok", payload)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="raagkit", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="emit one JSON document")
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, actions, func, graph=True):
        p = sub.add_parser(name)
        p.add_argument("action", choices=actions)
        if graph:
            p.add_argument("--graph", required=True, help="graph file or name such as P4")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = command("graph", ["show", "dot", "domination", "quotient", "cograph", "amalgam", "aut"],
                cmd_graph)
    p.add_argument("--lam", help="comma-separated vertices of the amalgamated subgraph")
    p.add_argument("--d", type=int, default=2)

    p = command("word", ["nf", "equal", "roots"], cmd_word)
    p.add_argument("--word", required=True, help="e.g. 'a b^-1 a'")
    p.add_argument("--other")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--radius", type=int, default=4)

    for name, actions in (("auto", ["ls", "whitehead", "day"]), ("day", ["verify"])):
        p = command(name, actions, cmd_auto)
        p.add_argument("--bound", type=int, default=5)

    for name, actions, func in (("shifts", ["solve", "check"], cmd_shifts),
                                ("lifts", ["verify", "inner"], cmd_lifts)):
        p = command(name, actions, func)
        p.add_argument("--residues", default="2", help="'3' or 'a=2,b=3'")
        p.add_argument("--shifts", help="shift system file (else solved from residues)")
        p.add_argument("--bound", type=int, default=5)

    p = command("subgroup", ["rs", "kernel", "cograph-kernel", "char"], cmd_subgroup)
    p.add_argument("--residues", default="2")
    p.add_argument("--vertex", help="for rs: use the Z_d quotient sending only this vertex")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--bound", type=int, default=512, help="largest quotient order")
    p.add_argument("--verbose", action="store_true")

    p = command("embed", ["fpa", "dpf", "virtual"], cmd_embed, graph=False)
    p.add_argument("--factors", help="i:r per factor copy, e.g. 2:2,1:2")
    p.add_argument("--graph")
    p.add_argument("--vertex")
    p.add_argument("--d", type=int, default=2)

    p = command("torsion", ["profile", "bounds"], cmd_torsion)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--aut", action="store_true", help="bounds for Aut instead of Out")

    p = sub.add_parser("obstruct")
    p.add_argument("source_pos", nargs="?")
    p.add_argument("target_pos", nargs="?")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--primes", help="comma-separated primes (default p <= |V(target)| + 1)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_obstruct)
    return ap


def run(argv) -> CommandResult:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return CommandResult("error", {}, [f"bad arguments (argparse exit {exc.code})"])
    if args.command == "obstruct":
        args.source = args.source or args.source_pos
        args.target = args.target or args.target_pos
        if not (args.source and args.target):
            return CommandResult("error", {}, ["obstruct needs a source and a target graph"])
    if args.command == "embed" and args.action in ("fpa", "dpf") and not args.factors:
        return CommandResult("error", {}, ["embed fpa/dpf needs --factors"])
    if args.command == "embed" and args.action == "virtual" and not (args.graph and args.vertex):
        return CommandResult("error", {}, ["embed virtual needs --graph and --vertex"])
    try:
        result = args.func(args)
    except BoundExceeded as exc:
        return CommandResult("error", {"bound": exc.bound, "size": exc.size}, [str(exc)])
    except (GraphError, OSError) as exc:
        return CommandResult("error", {}, [str(exc)])
    result.payload = {"command": f"{args.command} {getattr(args, 'action', '')}".strip(),
                      **result.payload}
    return result


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    result = run(argv)
    as_json = "--json" in argv
    print(result.json() if as_json else result.text())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
