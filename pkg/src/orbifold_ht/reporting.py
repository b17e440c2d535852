"""Deterministic report rendering: fixed-width tables and structured JSON.

Structured output carries a schema version and a stable field order; the
timing field stays null unless explicitly requested, so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA = "orbifold-ht.report/1"
TOOL_VERSION = "0.1.0"


def frac_str(x):
    """Exact rational rendering: integers bare, otherwise numerator/denominator."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def bidegree_str(pq):
    return f"({frac_str(pq[0])},{frac_str(pq[1])})"


def build_report(command, scenario_name, options, result, timing_ms=None):
    return {
        "schema": SCHEMA,
        "tool": f"orbifold-ht {TOOL_VERSION}",
        "command": command,
        "scenario": scenario_name,
        "options": options,
        "result": result,
        "timing_ms": timing_ms,
    }


def emit_structured(report):
    return json.dumps(report, indent=2) + "\n"


def emit_table(report):
    """Fixed-width rendering of a report; deterministic row ordering.

    The result payload is a list of sections, each {"title", "columns",
    "rows"} with stringly-typed cells, or {"title", "lines"}.
    """
    out = []
    out.append(f"# {report['command']} : {report['scenario']}")
    opts = report.get("options") or {}
    if opts:
        rendered = ", ".join(f"{k}={v}" for k, v in opts.items())
        out.append(f"# options: {rendered}")
    for section in report["result"]["sections"]:
        out.append("")
        out.append(section["title"])
        if "lines" in section:
            out.extend(section["lines"])
            continue
        cols = section["columns"]
        rows = section["rows"]
        widths = [len(c) for c in cols]
        for row in rows:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(str(cell)))
        header = "  ".join(c.ljust(w) for c, w in zip(cols, widths))
        out.append(header)
        out.append("  ".join("-" * w for w in widths))
        for row in rows:
            out.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return "\n".join(out) + "\n"


def checks_payload(checks):
    payload = []
    for c in sorted(checks, key=lambda c: c.check_id):
        entry = {
            "id": c.check_id,
            "status": "pass" if c.passed else "fail",
            "detail": c.detail,
            "count": c.count,
        }
        if c.witness is not None:
            entry["witness"] = c.witness
        payload.append(entry)
    return payload


def checks_section(title, checks):
    rows = [[c.check_id, "pass" if c.passed else "fail", str(c.count), c.detail]
            for c in sorted(checks, key=lambda c: c.check_id)]
    return {"title": title, "columns": ["check", "status", "count", "detail"],
            "rows": rows}
