"""Command-line front end.

Exit codes: 0 success, 1 parse/validation error or oracle disagreement,
2 precondition refusal (e.g. ``stratify`` with non-minuscule mu).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .catalog import CatalogError, build
from .dsl import COMMANDS, DSLError, Scenario, normalize_mu, parse, serialize
from .lattice import IntMatrix, format_rational
from .rootdatum import BasedRootDatum, GaloisAction, RootDatumError
from .sets import (
    GroupDatum,
    KottwitzError,
    KottwitzSet,
    PreconditionError,
    dualize_to_Jb,
    enumerate_B_dual,
    enumerate_B_mu,
    is_fully_hn_decomposable,
    minute,
    stratification_report,
)

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------


def parse_vector(text: str, what: str) -> tuple:
    text = text.strip().strip("()")
    try:
        out = tuple(Fraction(p.strip()) for p in text.split(",")) if text else ()
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: cannot read {text!r} as comma-separated integers or p/q") from None
    if any("." in p for p in text.split(",")):
        raise UsageError(f"{what}: decimals are not exact; write p/q")
    return out


def parse_group_spec(spec: str):
    name, _, params = spec.partition(":")
    try:
        values = [int(p) for p in params.split(",")] if params else []
    except ValueError:
        raise UsageError(f"--group: cannot read parameters in {spec!r}") from None
    return build(name.strip(), values)


def group_from_json(obj) -> GroupDatum:
    try:
        rank = int(obj["rank"])
        rd = BasedRootDatum.from_simple(rank, obj["simple_roots"], obj["simple_coroots"])
        gal = obj.get("galois")
        g = GaloisAction(IntMatrix.from_rows(gal["matrix"], cols=rank), int(gal["order"])) if gal else None
        xi = [Fraction(x) for x in obj["xi"]] if obj.get("xi") else None
        return GroupDatum.make(rd, g, xi, obj.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, KottwitzError):
            raise
        raise UsageError(f"malformed group object in JSON input: {exc}") from None


def group_to_json(gd: GroupDatum) -> dict:
    return {
        "name": gd.name,
        "rank": gd.rd.rank,
        "simple_roots": [list(r) for r in gd.rd.simple_roots],
        "simple_coroots": [list(c) for c in gd.rd.simple_coroots],
        "galois": None if gd.g.is_trivial() else {"order": gd.g.order, "matrix": gd.g.generator.to_rows()},
        "xi": None if gd.quasi_split else [format_rational(x) for x in gd.xi],
    }


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _q(x) -> str:
    return format_rational(Fraction(x))


def _dim(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else _q(x)


def _class_records(ks: KottwitzSet, dims=None) -> List[dict]:
    out = []
    for i, (c, v) in enumerate(zip(ks.elements, ks.hn_verdicts)):
        out.append(
            {
                "nu": [_q(x) for x in c.nu],
                "kappa": list(c.kappa.coords),
                "basic": c.basic,
                "hn_decomposable": v.json_value(),
                "witness_levi": None
                if v.witness is None
                else [ks.gd.rel.orbit_name(k) for k in sorted(v.witness)],
                "stratum_dim": None if dims is None else _dim(dims[i]),
            }
        )
    return out


def build_report(gd: GroupDatum, mu: Sequence[int], command: str) -> dict:
    mu = tuple(int(x) for x in mu)
    mv = minute(gd, mu)
    report = {
        "group": group_to_json(gd),
        "mu": list(mu),
        "xi": [_q(x) for x in gd.xi],
        "command": command,
    }
    minute_values = {name: _q(v) for name, v in zip(mv.orbit_names, mv.values)}
    if command in ("enumerate", "minute"):
        ks = enumerate_B_mu(gd, mu)
        report["set"] = "B(G,mu)"
        report["classes"] = _class_records(ks)
        report["fully_hn_decomposable"] = is_fully_hn_decomposable(ks)
    elif command == "dual":
        ks = enumerate_B_dual(gd, mu)
        report["set"] = "B(G,0,nu_b mu^-1)"
        report["classes"] = _class_records(ks)
        report["fully_hn_decomposable"] = is_fully_hn_decomposable(ks)
    elif command == "stratify":
        rep = stratification_report(gd, mu)
        ks = enumerate_B_dual(gd, mu)
        report["set"] = "B(G,0,nu_b mu^-1)"
        report["classes"] = _class_records(ks, [s.dimension for s in rep.strata])
        report["fully_hn_decomposable"] = rep.fully_hn_decomposable
        report["flag_dimension"] = rep.flag_dimension
        report["hasse"] = [list(e) for e in rep.hasse]
        report["c1_consistent"] = rep.c1_consistent
    elif command == "dualize":
        d = dualize_to_Jb(gd, mu)
        report["set"] = "B(G,0,nu_b mu^-1)"
        report["classes"] = _class_records(d.dual_set)
        report["fully_hn_decomposable"] = is_fully_hn_decomposable(d.dual_set)
        report["xi_J"] = [_q(x) for x in d.gd_J.xi]
        report["jb_classes"] = _class_records(d.jb_set)
        report["jb_image"] = {str(j): i for j, i in d.pairs}
        report["bijection"] = d.is_bijection
    elif command == "hn-check":
        d = dualize_to_Jb(gd, mu)
        ks = enumerate_B_mu(gd, mu)
        report["set"] = "B(G,mu)"
        report["classes"] = _class_records(ks)
        report["fully_hn_decomposable"] = is_fully_hn_decomposable(ks)
        report["three_sets"] = {
            "B(G,mu)": is_fully_hn_decomposable(ks),
            "B(G,0,nu_b mu^-1)": is_fully_hn_decomposable(d.dual_set),
            "B(J_b,mu^-1)": is_fully_hn_decomposable(d.jb_set),
            "minute": mv.minute,
        }
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown command {command!r}")
    report["minute_values"] = minute_values
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# table rendering
# ---------------------------------------------------------------------------

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def greek(orbit: str) -> str:
    return "+".join("α" + p[1:].translate(_SUB) for p in orbit.split("+"))


def vec_text(v) -> str:
    return "(" + ",".join(str(x).replace("-", "−") for x in v) + ")"


def _verdict_text(c: dict) -> str:
    if c["hn_decomposable"] == "basic":
        return "basic"
    if c["hn_decomposable"]:
        return "HN decomposable via M = {" + ", ".join(greek(o) for o in c["witness_levi"]) + "}"
    return "not HN decomposable"


def _class_table(classes: List[dict], with_dim: bool = False) -> List[str]:
    rows = [["#", "ν", "κ", "HN"] + (["dim"] if with_dim else [])]
    for i, c in enumerate(classes):
        row = [str(i), vec_text(c["nu"]), vec_text(c["kappa"]), _verdict_text(c)]
        if with_dim:
            row.append(str(c["stratum_dim"]) + ("  admissible locus" if c["basic"] else ""))
        rows.append(row)
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    return ["  " + "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]


def _fully_text(flag: bool) -> str:
    return "fully HN decomposable" if flag else "NOT fully HN decomposable"


def _hasse_lines(report: dict) -> List[str]:
    classes = report["classes"]
    gd = group_from_json(dict(report["group"]))
    weights = []
    for c in classes:
        nu = [Fraction(x) for x in c["nu"]]
        weights.append(sum(gd.rel.omega_pairings(nu)))
    order = sorted(range(len(classes)), key=lambda i: (weights[i], i))
    below = {i: sorted(a for a, b in report["hasse"] if b == i) for i in range(len(classes))}
    lines = ["Hasse diagram (rows by Σ⟨ν,ω̃⟩, each row lists the classes it covers):"]
    for i in order:
        label = "basic" if classes[i]["basic"] else "ν=" + vec_text(classes[i]["nu"])
        cov = ", ".join(f"[{j}]" for j in below[i]) or "-"
        lines.append(f"  [{i}] {label}  covers {cov}")
    return lines


def render_table(report: dict) -> str:
    cmd = report["command"]
    classes = report["classes"]
    name = report["group"]["name"] or "G"
    head = f"{name}, μ = {vec_text(report['mu'])}"
    if any(Fraction(x) for x in report["xi"]):
        head += f", ξ = {vec_text(report['xi'])}"
    lines: List[str] = []
    minute_vals = report["minute_values"]
    if cmd == "minute":
        bad = [(o, v) for o, v in minute_vals.items() if Fraction(v) > 1]
        if bad:
            lines.append(
                "NOT fully HN decomposable; witness " + ", ".join(f"{greek(o)}: {v} > 1" for o, v in bad)
            )
        else:
            lines.append("fully HN decomposable (minute)")
        lines.append(head)
        lines.append("  " + "  ".join(f"{greek(o)}: {v}" for o, v in minute_vals.items()))
        lines.append(f"B(G, μ): {len(classes)} classes, {_fully_text(report['fully_hn_decomposable'])}")
        lines += _class_table(classes)
    elif cmd == "stratify":
        n = len(classes)
        parts = []
        for c in classes:
            label = "[basic]" if c["basic"] else f"[ν={vec_text(c['nu'])}]"
            parts.append(f"{label} dim {c['stratum_dim']}")
        if n == 1:
            lines.append(f"1 stratum: {parts[0]} (admissible locus = full flag variety)")
        else:
            lines.append(f"{n} strata: " + "; ".join(parts))
        lines.append(head)
        lines.append(
            f"dim F(G, μ) = {report['flag_dimension']}; index set B(G, 0, ν_b μ⁻¹) is "
            f"{_fully_text(report['fully_hn_decomposable'])}"
        )
        lines += _class_table(classes, with_dim=True)
        lines += _hasse_lines(report)
    elif cmd == "dualize":
        jb = report["jb_classes"]
        status = "bijection" if report["bijection"] else "NOT a bijection"
        lines.append(f"B(J_b, μ⁻¹) → B(G, 0, ν_b μ⁻¹): {len(jb)} → {len(classes)} classes, {status}")
        lines.append(head)
        lines.append(f"J_b: ξ = {vec_text(report['xi_J'])}")
        lines.append(f"B(J_b, μ⁻¹): {_fully_text(all(c['hn_decomposable'] is not False for c in jb))}")
        lines += _class_table(jb)
        lines.append(f"B(G, 0, ν_b μ⁻¹): {_fully_text(report['fully_hn_decomposable'])}")
        lines += _class_table(classes)
        lines.append("image: " + ", ".join(f"[{j}] ↦ [{i}]" for j, i in report["jb_image"].items()))
    elif cmd == "hn-check":
        three = report["three_sets"]
        agree = len({three[k] for k in three}) == 1
        lines.append(
            ("verdicts agree: " if agree else "verdicts DISAGREE: ")
            + "; ".join(f"{k}: {_fully_text(v) if k != 'minute' else ('minute' if v else 'not minute')}" for k, v in three.items())
        )
        lines.append(head)
        lines += _class_table(classes)
    else:
        title = "B(G, μ)" if cmd == "enumerate" else "B(G, 0, ν_b μ⁻¹)"
        lines.append(f"{title}: {len(classes)} classes, {_fully_text(report['fully_hn_decomposable'])}")
        lines.append(head)
        lines += _class_table(classes)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# oracle comparison
# ---------------------------------------------------------------------------


def oracle_check(gd: GroupDatum, mu: Sequence[int], command: str) -> List[str]:
    """Recompute the sets behind ``command`` through the oracles; return disagreements."""
    from . import oracle

    problems = []
    sets = []
    if command in ("enumerate", "minute", "hn-check"):
        sets.append(("B(G,mu)", enumerate_B_mu(gd, mu), mu))
    if command in ("dual", "stratify", "dualize", "hn-check"):
        sets.append(("B(G,0,nu_b mu^-1)", enumerate_B_dual(gd, mu), [0] * gd.rd.rank))
    if command in ("dualize", "hn-check"):
        d = dualize_to_Jb(gd, mu)
        sets.append(("B(J_b,mu^-1)", d.jb_set, d.mu_inv))
    for label, ks, lift in sets:
        main = {(c.nu, c.kappa.coords) for c in ks}
        other = oracle.levi_path_enumerate(ks.gd, lift, ks.delta, check_stability=True)
        if main != other:
            problems.append(f"{label}: Levi-path oracle gives {len(other)} classes, enumeration {len(main)}")
        for c, v in zip(ks.elements, ks.hn_verdicts):
            w = oracle.hn_decomposable_exhaustive(ks.gd, c.nu, ks.delta)
            if w.kind != v.kind:
                problems.append(f"{label}: HN verdict for {c.nu} differs ({v.kind} vs {w.kind})")
    if command == "enumerate" and gd.quasi_split and _is_split_gl(gd):
        poly = oracle.gln_polygon_enumerate(gd.rd.rank, mu)
        if poly != {c.nu for c in sets[0][1]}:
            problems.append("B(G,mu): polygon oracle disagrees")
    return problems


def _is_split_gl(gd: GroupDatum) -> bool:
    rd, g = build("gl", [gd.rd.rank])
    return rd == gd.rd and gd.g.is_trivial()


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kottwitz", description="Kottwitz sets, HN decomposability and HN strata.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd in COMMANDS + ("run", "parse"):
        sp = sub.add_parser(cmd)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--group", help="catalog shorthand such as gl:4 or res_gl:2,2")
        src.add_argument("--file", help="scenario file in the DSL ('-' reads standard input)")
        src.add_argument("--from-json", dest="from_json", help="replay a JSON report ('-' for standard input)")
        sp.add_argument("--mu", help="cocharacter, e.g. 1,1,0,0")
        sp.add_argument("--xi", help="inner-twist coweight, e.g. 1/2,-1/2")
        sp.add_argument("--output", choices=("table", "json"))
        sp.add_argument("--oracle-check", action="store_true", dest="oracle_check")
    return p


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _resolve(args, stdin):
    """Return ``(GroupDatum, mu, command, output)`` for an invocation."""
    output = args.output
    command = args.command
    if args.from_json is not None:
        try:
            obj = json.loads(_read(args.from_json, stdin))
            gd = group_from_json(obj["group"])
            mu = tuple(int(x) for x in obj["mu"])
            if command == "run":
                command = obj["command"]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, KottwitzError):
                raise
            raise UsageError(f"cannot replay JSON: {exc}") from None
        output = output or "json"
    elif args.file is not None:
        scen = parse(_read(args.file, stdin))
        gd, mu = scen.group, scen.mu
        if command == "run":
            command = scen.command
        output = output or scen.output
        if command == "parse":
            return scen, None, command, output
    else:
        rd, g = parse_group_spec(args.group)
        gd = GroupDatum.make(rd, g, name=args.group)
        if args.mu is None:
            raise UsageError("--mu is required with --group")
        mu = None
        if command == "run":
            raise UsageError("'run' needs --file or --from-json")
    if args.xi is not None:
        xi = parse_vector(args.xi, "--xi")
        gd = GroupDatum.make(gd.rd, gd.g, xi, gd.name, check=False)
    if args.mu is not None:
        v = parse_vector(args.mu, "--mu")
        if any(x.denominator != 1 for x in v):
            raise UsageError("--mu must be integral")
        if len(v) != gd.rd.rank:
            raise UsageError(f"--mu has {len(v)} entries, the group has rank {gd.rd.rank}")
        mu = normalize_mu(gd, [int(x) for x in v])
    if command == "parse":
        return Scenario(gd, mu), None, command, output
    return gd, mu, command, output or "table"


def main(argv: Optional[Sequence[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("warning: %(message)s"))
    logger = logging.getLogger("kottwitz")
    logger.addHandler(handler)
    propagate, logger.propagate = logger.propagate, False
    try:
        args = make_parser().parse_args(argv)
        gd, mu, command, output = _resolve(args, stdin)
        if command == "parse":
            stdout.write(serialize(gd))
            return 0
        report = build_report(gd, mu, command)
        stdout.write(to_json(report) if output == "json" else render_table(report))
        if args.oracle_check:
            problems = oracle_check(gd, mu, command)
            if problems:
                for p in problems:
                    stderr.write(f"oracle check: {p}\n")
                return 1
            stderr.write("oracle check: enumeration agrees with the oracles\n")
        return 0
    except PreconditionError as exc:
        stderr.write(f"refused: {exc}\n")
        return 2
    except DSLError as exc:
        stderr.write(f"parse error: {exc}\n")
        return 1
    except (UsageError, CatalogError, KottwitzError, RootDatumError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    finally:
        logger.removeHandler(handler)
        logger.propagate = propagate


def entry() -> None:
    sys.exit(main())
