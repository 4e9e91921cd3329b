"""JSONL and CSV writers with 17-significant-digit floats."""
from __future__ import annotations

import csv
import json
import math

import numpy as np


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialised")
    text = format(x, ".17g")
    if all(ch not in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj):
    """Compact JSON with every float written to 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def step_record(step):
    return {"k": step.k, "v": step.line.v, "Q": step.line.Q, "p": step.p,
            "alpha": step.alpha, "theta": step.theta, "A": step.A, "dist": step.dist}


def trajectory_records(traj):
    records = [step_record(s) for s in traj.steps]
    records.append({"final_v": traj.final.v, "final_Q": traj.final.Q, "m": traj.m})
    return records


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(dumps(rec) + "\n")


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def integral_header(dim):
    k = 2 * dim - 1
    return (["traj_id", "tag", "m"] + [f"v{i + 1}" for i in range(dim)]
            + [f"Q{i + 1}" for i in range(dim)] + [f"I{i + 1}" for i in range(k)]
            + [f"Is{i + 1}" for i in range(k)])


def integral_row(traj_id, tag, line, vector):
    cells = [str(traj_id), tag, str(vector.m)]
    for arr in (line.v, line.Q, vector.values, vector.smooth_values):
        cells.extend(format_float(x) for x in arr)
    return cells


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
