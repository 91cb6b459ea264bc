"""Text renderings of bbas, reports and comparison tables (json, tsv, markdown)."""

from __future__ import annotations

import json

from .algebra import SetElement, element_sort_key, format_expr
from .fusion import ConflictLedger
from .mass import MassFunction

FORMATS = ("json", "tsv", "markdown")


def number(x: float) -> str:
    text = f"{x:.12g}"
    return "0" if text == "-0" else text


def json_number(x: float) -> float | int:
    value = float(number(x))
    return int(value) if value.is_integer() else value


def pretty_expr(x: SetElement) -> str:
    """Set-notation label for humans; not parseable."""
    text = format_expr(x)
    if text == "0":
        return "∅"
    if text == "1":
        return "Θ"
    return " ∪ ".join("∩".join(lit.replace("!", "¬") for lit in term.split("&")) for term in text.split("|"))


def _label(x: SetElement, fmt: str) -> str:
    return pretty_expr(x) if fmt == "markdown" else format_expr(x)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _tsv(header: list[str], rows: list[list[str]]) -> str:
    return "\n".join("\t".join(r) for r in [header] + rows) + "\n"


def mass_object(m: MassFunction, include_empty: bool = False) -> dict:
    items = m.sorted_items()
    if include_empty and m.frame.empty not in m:
        items = [(m.frame.empty, 0.0)] + items
    return {format_expr(x): json_number(v) for x, v in items}


def render_masses(m: MassFunction, fmt: str, include_empty: bool = False, title: str = "") -> str:
    items = m.sorted_items()
    if include_empty and m.frame.empty not in m:
        items = [(m.frame.empty, 0.0)] + items
    rows = [[_label(x, fmt), number(v)] for x, v in items]
    if fmt == "tsv":
        return _tsv(["element", "mass"], rows)
    if fmt == "markdown":
        head = f"{title}\n\n" if title else ""
        return head + _md_table(["element", "mass"], rows)
    raise ValueError(f"unknown format {fmt!r}")


def render_report(report, fmt: str) -> str:
    if fmt == "json":
        return _dumps(
            {
                "rule": report.rule.value,
                "event": format_expr(report.event.element),
                "k_cond": json_number(report.k_cond),
                "recipients": [format_expr(x) for x in report.recipients],
                "degenerate_fallback_used": report.degenerate_fallback_used,
                "result": mass_object(report.result),
            }
        )
    title = (
        f"**{report.rule.value}** given {pretty_expr(report.event.element)} "
        f"(conflict {number(report.k_cond)})"
    )
    return render_masses(report.result, fmt, title=title)


def render_combination(
    left: str, right: str, combined: MassFunction, ledger: ConflictLedger, fmt: str
) -> str:
    pairs = [(x, y, p) for x, y, p in ledger.pairs]
    if fmt == "json":
        return _dumps(
            {
                "left": left,
                "right": right,
                "result": mass_object(combined, include_empty=True),
                "conflict": {
                    "total": json_number(ledger.total),
                    "pairs": [
                        {"left": format_expr(x), "right": format_expr(y), "mass": json_number(p)}
                        for x, y, p in pairs
                    ],
                },
            }
        )
    ledger_rows = [[_label(x, fmt), _label(y, fmt), number(p)] for x, y, p in pairs]
    if fmt == "tsv":
        return (
            render_masses(combined, fmt, include_empty=True)
            + "\n"
            + _tsv(["left", "right", "conflict"], ledger_rows)
        )
    if fmt == "markdown":
        return (
            render_masses(combined, fmt, include_empty=True, title=f"**{left} ⊕ {right}**")
            + "\n"
            + f"conflict total {number(ledger.total)}\n\n"
            + _md_table([left, right, "conflict"], ledger_rows)
        )
    raise ValueError(f"unknown format {fmt!r}")


def render_comparison(event: SetElement, rows: list[dict], fmt: str) -> str:
    """``rows`` are dicts with ``label``, ``kind`` and either ``masses``
    (a MassFunction) or ``reason`` (for an undefined rule)."""
    frame = event.frame
    columns = {frame.empty}
    for row in rows:
        if "masses" in row:
            columns.update(row["masses"])
    columns = sorted(columns, key=element_sort_key)

    if fmt == "json":
        out_rows = []
        for row in rows:
            item = {"label": row["label"], "kind": row["kind"]}
            if "masses" in row:
                item["status"] = "ok"
                item["masses"] = mass_object(row["masses"])
            else:
                item["status"] = "undefined"
                item["reason"] = row["reason"]
            out_rows.append(item)
        return _dumps(
            {
                "event": format_expr(event),
                "columns": [format_expr(c) for c in columns],
                "rows": out_rows,
            }
        )

    table = []
    for row in rows:
        if "masses" in row:
            cells = [number(row["masses"][c]) for c in columns]
        else:
            cells = ["N/A"] * len(columns)
        table.append([row["label"]] + cells)
    header = ["rule"] + [_label(c, fmt) for c in columns]
    if fmt == "tsv":
        return _tsv(header, table)
    if fmt == "markdown":
        return f"conditioning on {pretty_expr(event)}\n\n" + _md_table(header, table)
    raise ValueError(f"unknown format {fmt!r}")
