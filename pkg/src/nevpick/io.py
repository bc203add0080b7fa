"""File formats: JSON for structured data, CSV for dense numeric dumps.

Field names are documented in docs/schema.md; SCHEMA_VERSION is written into
every JSON document. Floats are written with 17 significant digits and keys
are sorted, so identical inputs give byte-identical files.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .blaschke import ZeroSequence
from .errors import BadParams
from .pick import PickProblem

SCHEMA_VERSION = 1

EXTREMAL_FIELDS = ("z_re", "z_im", "gamma", "value_re", "value_im", "modulus", "circle_residual")
VERTEVORRAT_FIELDS = ("z_re", "z_im", "c_re", "c_im", "rho")
CONTOUR_FIELDS = ("component", "x", "y")


class InvalidInput(BadParams):
    pass


def _plain(obj):
    """Recursively convert numpy scalars/arrays and complex numbers to JSON types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(float(obj.real)), _plain(float(obj.imag))]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj):
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(dumps(obj))


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {path}: {exc}") from exc


def _complex_list(items, what):
    out = []
    if not isinstance(items, list):
        raise InvalidInput(f"{what} must be a list of [re, im] pairs")
    for it in items:
        if isinstance(it, (int, float)) and not isinstance(it, bool):
            out.append(complex(it))
        elif isinstance(it, list) and len(it) == 2 and all(isinstance(v, (int, float)) for v in it):
            out.append(complex(it[0], it[1]))
        else:
            raise InvalidInput(f"bad entry in {what}: {it!r}")
    return out


def problem_to_json(p):
    return {"schema": SCHEMA_VERSION, "nodes": list(p.nodes), "targets": list(p.targets), "meta": p.meta}


def problem_from_json(doc):
    if not isinstance(doc, dict) or "nodes" not in doc or "targets" not in doc:
        raise InvalidInput("problem must be an object with 'nodes' and 'targets'")
    nodes = _complex_list(doc["nodes"], "nodes")
    targets = _complex_list(doc["targets"], "targets")
    try:
        return PickProblem(tuple(nodes), tuple(targets), dict(doc.get("meta", {})))
    except BadParams as exc:
        raise InvalidInput(str(exc)) from exc


def load_problem(path):
    return problem_from_json(_read_json(path))


def save_problem(path, p):
    write_json(path, problem_to_json(p))


def zeros_to_json(seq):
    return {"schema": SCHEMA_VERSION, "zeros": list(seq.zeros), "generator": seq.generator}


def zeros_from_json(doc):
    if isinstance(doc, list):
        doc = {"zeros": doc}
    if not isinstance(doc, dict) or "zeros" not in doc:
        raise InvalidInput("zeros file must be a list of [re, im] pairs or an object with 'zeros'")
    try:
        return ZeroSequence(tuple(_complex_list(doc["zeros"], "zeros")), dict(doc.get("generator", {})))
    except BadParams as exc:
        raise InvalidInput(str(exc)) from exc


def load_zeros(path):
    return zeros_from_json(_read_json(path))


def save_zeros(path, seq):
    write_json(path, zeros_to_json(seq))


def format_float(x):
    return "%.17g" % float(x)


def csv_text(fields, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([v if isinstance(v, (int, str)) and not isinstance(v, bool) else format_float(v) for v in row])
    return buf.getvalue()


def write_csv(path, fields, rows):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(csv_text(fields, rows))


def contour_rows(contour):
    for k, line in enumerate(contour.polylines):
        for p in line:
            yield (k, p.real, p.imag)


def integral_to_json(value, error, spec):
    return {"schema": SCHEMA_VERSION, "value": value, "error": error, "spec": spec.to_json()}
