"""Reading and writing tables.

CSV: header row lists variables (``x1,x2``), body rows list atoms.
JSON: ``{"schema": ["x1", "x2"], "rows": [["a", "b"]]}``; the empty table is
``{"schema": "ALL", "rows": []}``.
"""

from __future__ import annotations

import csv
import io
import json

from .tables import Table, bottom
from .transforms import parse_var, schema_is_all, var_name
from .tuples import NTuple


def table_to_json(T: Table) -> dict:
    if schema_is_all(T.schema):
        return {"schema": "ALL", "rows": []}
    cols = sorted(T.schema)
    return {
        "schema": [var_name(c) for c in cols],
        "rows": [[str(r(c)) for c in cols] for r in T.sorted_rows()],
    }


def table_from_json(data: dict, ground=None) -> Table:
    if data.get("schema") == "ALL":
        if data.get("rows"):
            raise ValueError("ALL-schema table must have no rows")
        return bottom(ground if ground else {"?"})
    cols = [parse_var(v) for v in data["schema"]]
    rows = set()
    for raw in data["rows"]:
        if len(raw) != len(cols):
            raise ValueError(f"row {raw} does not match schema {data['schema']}")
        rows.add(NTuple.of(dict(zip(cols, (str(a) for a in raw)))))
    atoms = {a for r in rows for a in r.rng}
    if ground is not None:
        ground = frozenset(ground)
        if not atoms <= ground:
            raise ValueError(f"atoms {sorted(atoms - ground)} outside ground set")
    else:
        ground = frozenset(atoms) or frozenset({"?"})
    if not rows:
        return bottom(ground)
    return Table.from_rows(ground, rows)


def table_to_csv(T: Table) -> str:
    if schema_is_all(T.schema):
        raise ValueError("the empty table has no CSV form; use JSON")
    cols = sorted(T.schema)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([var_name(c) for c in cols])
    for r in T.sorted_rows():
        w.writerow([str(r(c)) for c in cols])
    return buf.getvalue()


def table_from_csv(text: str, ground=None) -> Table:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV input")
    cols = [parse_var(h) for h in header]
    rows = set()
    for raw in reader:
        if not raw:
            continue
        if len(raw) != len(cols):
            raise ValueError(f"row {raw} does not match header {header}")
        rows.add(NTuple.of(dict(zip(cols, raw))))
    return table_from_json(
        {"schema": [var_name(c) for c in cols],
         "rows": [[r(c) for c in cols] for r in rows]},
        ground=ground,
    )


def load_table(path: str, ground=None) -> Table:
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".json"):
        return table_from_json(json.loads(text), ground=ground)
    return table_from_csv(text, ground=ground)


def table_to_grid(T: Table) -> str:
    """Human-readable text grid, rows in canonical order."""
    if schema_is_all(T.schema):
        return "(empty table, schema ALL)"
    cols = sorted(T.schema)
    if not cols:
        return "(top table: one empty row)"
    header = [var_name(c) for c in cols]
    body = [[str(r(c)) for c in cols] for r in T.sorted_rows()]
    widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
              for i, h in enumerate(header)]
    lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for row in body:
        lines.append(" | ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)
