"""File formats: shot-record CSV, result JSON/CSV serialization.

The shot CSV carries one tally per row under the header ``m,shots,ones`` with
an optional trailing ``label`` column (circuit/machine tag).  Rows need not
be sorted; duplicate depths within one label are merged by summing.  All
numeric output is serialized with 12 significant digits.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

from .device import ShotRecord
from .estimation import AmplitudeEstimate, ShotSchedule
from .experiments import RmseCurve
from .fitting import MODEL_KINDS, FitResult
from .models import GaussianNoiseParams

_HEADERS = (["m", "shots", "ones"], ["m", "shots", "ones", "label"])


def fmt12(x: float) -> str:
    """Format a float with 12 significant digits."""
    return f"{x:.12g}"


def round12(value):
    """Recursively round floats in a JSON-ready structure to 12 significant digits."""
    if isinstance(value, float):
        return float(fmt12(value)) if math.isfinite(value) else value
    if isinstance(value, dict):
        return {k: round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round12(v) for v in value]
    return value


def dump_json(obj, path: str | Path | None) -> str:
    """Serialize to JSON (12-significant-digit floats); write if path given."""
    text = json.dumps(round12(obj), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_shot_csv(path: str | Path) -> dict[str, list[ShotRecord]]:
    """Parse a shot CSV into records grouped by label.

    Unlabeled files map to the empty-string label.  Duplicate (label, m)
    rows are merged by summing shots and ones; records are returned sorted
    by depth.

    Raises:
        ValueError: malformed header/row (with line number) or a row whose
            tallies violate 0 <= ones <= shots.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if header not in _HEADERS:
            raise ValueError(
                f"{path}: line 1: header must be 'm,shots,ones[,label]', got {','.join(header)!r}"
            )
        has_label = len(header) == 4
        merged: dict[tuple[str, int], list[int]] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}: line {lineno}: expected {len(header)} fields")
            try:
                m, shots, ones = int(row[0]), int(row[1]), int(row[2])
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: m, shots, ones must be integers"
                ) from None
            label = row[3] if has_label else ""
            if m < 0 or shots < 1 or not (0 <= ones <= shots):
                raise ValueError(
                    f"{path}: line {lineno}: invalid tally m={m} shots={shots} ones={ones}"
                )
            bucket = merged.setdefault((label, m), [0, 0])
            bucket[0] += shots
            bucket[1] += ones
    grouped: dict[str, list[ShotRecord]] = {}
    for (label, m), (shots, ones) in sorted(merged.items()):
        grouped.setdefault(label, []).append(ShotRecord(m=m, shots=shots, ones=ones))
    return grouped


def write_shot_csv(
    path: str | Path | None, records: dict[str, list[ShotRecord]] | list[ShotRecord]
) -> str:
    """Write records as shot CSV (LF line endings); returns the text.

    A plain list is written unlabeled; a dict keyed by label includes the
    label column unless the only label is the empty string.
    """
    if isinstance(records, list):
        grouped = {"": records}
    else:
        grouped = records
    with_label = any(label for label in grouped)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_HEADERS[1] if with_label else _HEADERS[0])
    for label in sorted(grouped):
        for record in sorted(grouped[label], key=lambda r: r.m):
            row = [record.m, record.shots, record.ones]
            if with_label:
                row.append(label)
            writer.writerow(row)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="")
    return text


def fit_result_dict(result: FitResult) -> dict:
    """JSON-ready form of one fit result."""
    out = {
        "label": result.label,
        "model": result.model_kind,
        "theta_hat": result.theta_hat,
        "sse": result.sse,
        "r_squared": result.r_squared,
        "converged": result.converged,
        "residuals": list(result.residuals),
    }
    if isinstance(result.noise_params, GaussianNoiseParams):
        out["k_mu"] = result.noise_params.k_mu
        out["k_sigma"] = result.noise_params.k_sigma
    else:
        out["p_coh"] = result.noise_params.p_coh_tilde
    return out


def report_csv(rows: list[dict]) -> str:
    """Render a fit_report comparison table as CSV.

    Columns: label, one R^2 column per family, and the best-flagged families
    joined by '+'.
    """
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", *MODEL_KINDS, "best"])
    for row in rows:
        r2s = row["r_squared"]
        writer.writerow(
            [
                row["label"],
                *[fmt12(r2s[kind]) if kind in r2s else "" for kind in MODEL_KINDS],
                "+".join(row["best"]),
            ]
        )
    return buf.getvalue()


def estimate_dict(estimate: AmplitudeEstimate, label: str = "") -> dict:
    """JSON-ready form of one amplitude estimate."""
    return {
        "label": label,
        "method": estimate.method,
        "theta_hat": estimate.theta_hat,
        "a_hat": estimate.a_hat,
        "log_likelihood": estimate.log_likelihood,
        "n_clamped": estimate.n_clamped,
        "flat_likelihood": estimate.flat_likelihood,
    }


def schedule_dict(schedule: ShotSchedule) -> dict:
    """JSON-ready form of a shot schedule."""
    return {"entries": [{"m": m, "n_shots": n} for m, n in schedule.entries]}


def curves_csv(curves: list[RmseCurve]) -> str:
    """Tidy CSV of RMSE curves: setting, x_kind, x, rmse."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["setting", "x_kind", "x", "rmse"])
    for curve in curves:
        for x, rmse in curve.points:
            writer.writerow([curve.setting, curve.x_kind, fmt12(x), fmt12(rmse)])
    return buf.getvalue()


__all__ = [
    "fmt12",
    "round12",
    "dump_json",
    "read_shot_csv",
    "write_shot_csv",
    "fit_result_dict",
    "report_csv",
    "estimate_dict",
    "schedule_dict",
    "curves_csv",
]
