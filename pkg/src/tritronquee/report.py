"""JSON/text rendering of a certificate run.

Rationals become "p/q" strings and balls become {"mid", "rad"} decimal
strings (rad rounded up), so the report never contains a binary float.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass
from datetime import datetime, timezone
from fractions import Fraction

import mpmath as mp
from flint import acb, arb

from .certificates import PASS, Check
from .scalars import decimal_parts, format_rational

SECTIONS = {
    "D1": ("d1.w0", "d1.contraction"),
    "D2": ("mismatch.L", "d2.residual", "d2.positivity", "d2.greens", "d2.handoff", "d2.E0",
           "d2.fixed_point"),
    "D3": ("d3.pu_positive", "d3.QT", "d3.handoff", "d3.E0", "d3.fixed_point"),
    "D4": ("tables", "mismatch.x0r", "d4.residual", "d4.series", "d4.handoff", "d4.E0",
           "d4.fixed_point"),
    "theorem": ("theorem",),
    "pole": ("pole.count", "pole.location"),
}
REPORT_KEYS = ("D1", "D2", "D3", "D4", "pole", "theorem", "oracle", "meta")


def encode(v):
    """Plain-JSON form of the values that occur in results."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v) if abs(v) >= 2 ** 53 else v
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, arb):
        mid, rad = decimal_parts(v)
        return {"mid": mid, "rad": rad}
    if isinstance(v, acb):
        return {"re": encode(v.real), "im": encode(v.imag)}
    if isinstance(v, (mp.mpf, mp.mpc)):
        return mp.nstr(v, 20)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Check):
        return encode_check(v)
    if is_dataclass(v):
        return {k: encode(getattr(v, k)) for k in v.__dataclass_fields__}
    if isinstance(v, dict):
        return {str(k): encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set)):
        return [encode(x) for x in v]
    return str(v)


def encode_check(c: Check) -> dict:
    out = {"name": c.name, "relation": c.relation, "paper_value": encode(c.claimed),
           "computed": encode(c.computed), "margin": encode(c.margin), "status": c.status,
           "description": c.description}
    if c.note:
        out["note"] = c.note
    return out


def encode_node(res) -> dict:
    out = {"status": res.status, "checks": [encode_check(c) for c in res.checks],
           "values": encode(res.values)}
    if res.note:
        out["note"] = res.note
    if res.broken_ancestor:
        out["broken_ancestor"] = res.broken_ancestor
    return out


def build_report(results: dict, meta: dict, oracle: dict | None = None, extras: dict | None = None) -> dict:
    report = {}
    for key, nodes in SECTIONS.items():
        report[key] = {n: encode_node(results[n]) for n in nodes if n in results}
    report["oracle"] = encode(oracle) if oracle is not None else {"status": "not run"}
    statuses = {n: r.status for n, r in results.items()}
    report["meta"] = {**encode(meta), "node_status": statuses,
                      "all_pass": all(s == PASS for s in statuses.values()),
                      **({} if extras is None else encode(extras))}
    return {k: report[k] for k in REPORT_KEYS}


def timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def render_text(results: dict) -> str:
    lines = []
    for key, nodes in SECTIONS.items():
        for n in nodes:
            if n not in results:
                continue
            r = results[n]
            lines.append(f"[{r.status}] {n}" + (f"  ({r.note})" if r.note else ""))
            for c in r.checks:
                comp = encode(c.computed)
                if isinstance(comp, dict) and "mid" in comp:
                    comp = f"{comp['mid']} +/- {comp['rad']}"
                lines.append(f"    {c.status:4s} {c.name}: {comp} {c.relation} {encode(c.claimed)}")
    return "\n".join(lines) + "\n"
