"""JSON and CSV forms of measures, reports and simulation summaries."""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from importlib import resources

from .partitions import format_partition, parse_partition
from .walk import ClassMeasure


def format_prob(p) -> str:
    """Exact values as "p/q" (integers bare), floats with 17 significant digits."""
    if isinstance(p, Fraction):
        return str(p)
    if isinstance(p, int):
        return str(p)
    return format(float(p), ".17g")


def parse_prob(text: str, exact: bool):
    return Fraction(text) if exact else float(text)


def format_parity(parity: int | None) -> str:
    return {1: "+1", -1: "-1", None: "mixed"}[parity]


def parse_parity(text: str) -> int | None:
    return {"+1": 1, "-1": -1, "mixed": None}[text]


def measure_to_dict(m: ClassMeasure) -> dict:
    return {
        "n": m.n,
        "parity": format_parity(m.parity),
        "mode": "exact" if m.exact else "float",
        "classes": [{"type": format_partition(mu), "prob": format_prob(p)} for mu, p in m.probs.items()],
    }


def measure_from_dict(d: dict) -> ClassMeasure:
    exact = d.get("mode", "exact") == "exact"
    probs = {parse_partition(c["type"]): parse_prob(c["prob"], exact) for c in d["classes"]}
    return ClassMeasure(d["n"], probs, parse_parity(d["parity"]), exact)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return format_prob(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def clean_float(x):
    """JSON has no NaN/inf; map them to null."""
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def csv_text(header, rows, metadata: dict | None = None) -> str:
    buf = io.StringIO()
    if metadata:
        for key, value in metadata.items():
            buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else (format_prob(v) if isinstance(v, (float, Fraction)) else v) for v in row])
    return buf.getvalue()


def load_schema(name: str) -> dict:
    text = resources.files("cyclewalk").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
