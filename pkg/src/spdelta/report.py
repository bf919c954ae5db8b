"""Report assembly and rendering.

The JSON schema is flat and stable: the keys "orders", "multiplicities",
"cohomology" (a list of {i, j, dim}), "involutive", "char", "thm1", "thm2",
"e1", "seed" and "cap" are always present (null when a section was not
computed), plus command-specific detail keys.  Output is deterministic for a
fixed (input, flags) pair: dictionaries are dumped with sorted keys and all
exact scalars are rendered as strings.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from .field import GaussianRational


def jsonable(value):
    """Recursively convert exact scalars, tuples and dataclasses into plain
    JSON-serialisable data."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, GaussianRational):
        return repr(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


SCHEMA_KEYS = ("input", "command", "orders", "multiplicities", "cohomology",
               "involutive", "i_properties", "acyclicity", "char", "thm1",
               "thm2", "e1", "restriction", "reduction", "descend", "errors",
               "seed", "cap", "field")


def empty_report(command: str, seed: int, cap: int, field_name: str) -> dict:
    report = {key: None for key in SCHEMA_KEYS}
    report["command"] = command
    report["seed"] = seed
    report["cap"] = cap
    report["field"] = field_name
    return report


def cohomology_entries(table: dict) -> list[dict]:
    return [{"i": i, "j": j, "dim": d}
            for (i, j), d in sorted(table.items()) if d != 0]


def render_json(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def _fmt_cohomology(entries) -> list[str]:
    if not entries:
        return ["  (all groups vanish)"]
    return [f"  H^{{{e['i']},{e['j']}}} = {e['dim']}" for e in entries]


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if report.get("input"):
        lines.append(f"input: {report['input']}")
    lines.append(f"cap: {report['cap']}   seed: {report['seed']}   "
                 f"field: {report['field']}")
    if report.get("errors"):
        lines.append(f"error: {report['errors']}")
    if report.get("orders") is not None:
        lines.append(f"orders: {report['orders']}")
        mult = report.get("multiplicities") or []
        if mult:
            lines.append("multiplicities: "
                         + ", ".join(f"m({m['r']}) = {m['m']}" for m in mult))
        else:
            lines.append("multiplicities: (none)")
    if report.get("cohomology") is not None:
        lines.append("nonzero Spencer cohomology:")
        lines.extend(_fmt_cohomology(report["cohomology"]))
    inv = report.get("involutive")
    if inv is not None:
        lines.append(f"involutive: {inv['verdict']}")
        for entry in inv["per_order"]:
            lines.append(f"  order {entry['order']}: {entry['verdict']} "
                         f"(attempts {entry['attempts']}, "
                         f"cohomology check {entry['cohomology_vanishes']})")
    props = report.get("i_properties")
    if props is not None:
        for name in ("I1", "I2", "I3"):
            if name in props:
                lines.append(f"{name}: {props[name]['verdict']}")
    acyc = report.get("acyclicity")
    if acyc is not None:
        lines.append(f"{acyc['m']}-acyclic: {acyc['verdict']} "
                     f"(violations: {acyc['violations']})")
    char = report.get("char")
    if char is not None:
        lines.append("characteristicity of V*:")
        lines.append(f"  weakly characteristic (k={char['k_char']}): "
                     f"{char['weakly_char']}")
        lines.append(f"  strongly characteristic (k={char['k_char']}): "
                     f"{char['strongly_char']}")
        lines.append(f"  weakly non-characteristic (k={char['k_nonchar']}): "
                     f"{char['weakly_nonchar']}")
        lines.append(f"  strongly non-characteristic (k={char['k_nonchar']}): "
                     f"{char['strongly_nonchar']}")
        if char.get("pencil") is not None:
            pencil = char["pencil"]
            lines.append(f"  pencil: characteristic covector exists = "
                         f"{pencil['exists']}")
            if pencil.get("covector"):
                lines.append(f"  covector: {jsonable(pencil['covector'])}")
    thm1 = report.get("thm1")
    if thm1 is not None:
        lines.append(f"thm1: hypotheses met = {thm1['hypotheses_met']}"
                     + (f" (failing: {', '.join(thm1['failing_hypotheses'])})"
                        if thm1["failing_hypotheses"] else ""))
        lines.append(f"thm1: all cells match = {thm1['all_match']}")
        for (i, j, lhs, rhs) in thm1["mismatches"]:
            lines.append(f"  mismatch at ({i},{j}): computed {lhs}, "
                         f"formula {rhs}")
    thm2 = report.get("thm2")
    if thm2 is not None:
        lines.append(f"thm2: strongly characteristic = {thm2['strongly_char']}, "
                     f"covector exists = {thm2['pencil_exists']}"
                     + (" (partial, sampled pencils)" if thm2["partial"] else ""))
        lines.append(f"thm2: equivalence holds = {thm2['equivalence_holds']}, "
                     f"involutivity hypothesis violated = "
                     f"{thm2['hypothesis_violated']}")
        if thm2.get("covector"):
            lines.append(f"  covector: {jsonable(thm2['covector'])}")
    e1 = report.get("e1")
    if e1 is not None:
        for table in e1["tables"]:
            lines.append(f"E_1 / E_2 grid for l = {table['l']} "
                         f"(rows q descending, columns p = 0..t):")
            grid = {(c["p"], c["q"]): c for c in table["cells"]}
            qs = sorted({q for (_, q) in grid}, reverse=True)
            ps = sorted({p for (p, _) in grid})
            for q in qs:
                row = [f"q={q}:"]
                for p in ps:
                    cell = grid.get((p, q))
                    row.append("." if cell is None
                               else f"{cell['e1']}/{cell['e2']}")
                lines.append("  " + "  ".join(row))
    rest = report.get("restriction")
    if rest is not None:
        lines.append(f"restricted system dims: {rest['dims']}")
    red = report.get("reduction")
    if red is not None:
        lines.append(f"reduction er_{red['order']}: new dependent rank "
                     f"{red['nu_hat']}, dims {red['dims']}")
    desc = report.get("descend")
    if desc is not None:
        lines.append(f"descended dims: {desc['dims']}; fixpoint after "
                     f"{desc['fixpoint_steps']} step(s), cap exhausted: "
                     f"{desc['cap_exhausted']}")
    corollary = report.get("corollary") if "corollary" in report else None
    if corollary is not None:
        lines.append("corollary Euler sums:")
        for cell in corollary["cells"]:
            lines.append(f"  (i={cell['i']}, j={cell['j']}): sum = "
                         f"{cell['euler_sum']} -> holds = {cell['holds']}")
    return "\n".join(lines) + "\n"
