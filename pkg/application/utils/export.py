"""Writers for the machine-readable artifacts: JSON, CSV and raw matrix dumps."""
import json # Import json for the JSON artifacts
import logging # Import logging to report written files
from pathlib import Path # Import Path for output files

import numpy as np # Import numpy for the raw matrix payloads
import pandas as pd # Import pandas to render CSV tables

from application.dof.errors import ConfigurationError # Import the input error type
from application.utils.numeric import round_nested # Import rounding to 12 significant digits

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
MATRIX_DTYPE = "<c16"


def to_json(payload):
    """UTF-8 JSON text with floats rounded to 12 significant digits."""
    return json.dumps(round_nested(payload), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def to_csv(frame):
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_text(text, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info("wrote %s (%d bytes)", path, len(text.encode("utf-8")))
    return path


def region_frame(region):
    """Vertices of a region as rows (vertex, d1, d2, labels)."""
    return pd.DataFrame({
        "vertex": range(len(region.vertices)),
        "d1": [v.d1 for v in region.vertices],
        "d2": [v.d2 for v in region.vertices],
        "labels": [";".join(v.labels) for v in region.vertices],
    })


def dump_matrices(matrices, path):
    """One JSON header line, then every matrix as column-major little-endian complex128.

    The header lists name, shape and byte offset of each matrix relative to the
    first byte after the header line.
    """
    entries, chunks, offset = [], [], 0
    for name in sorted(matrices):
        data = np.asarray(matrices[name], dtype=MATRIX_DTYPE)
        if data.ndim != 2:
            raise ConfigurationError(f"matrix {name} must be two-dimensional")
        raw = data.tobytes(order="F")
        entries.append({"name": name, "shape": list(data.shape), "offset": offset,
                        "dtype": "complex128", "order": "F", "endian": "little"})
        chunks.append(raw)
        offset += len(raw)
    header = json.dumps({"matrices": entries}, separators=(",", ":")).encode("utf-8") + b"\n"
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(header + b"".join(chunks))
    logger.info("dumped %d matrices to %s", len(entries), path)
    return path


def load_matrices(path):
    blob = Path(path).read_bytes()
    newline = blob.index(b"\n")
    header = json.loads(blob[:newline].decode("utf-8"))
    body = blob[newline + 1:]
    result = {}
    for entry in header["matrices"]:
        rows, cols = entry["shape"]
        try:
            flat = np.frombuffer(body, dtype=MATRIX_DTYPE, count=rows * cols, offset=entry["offset"])
        except ValueError:
            raise ConfigurationError(f"truncated matrix {entry['name']}") from None
        result[entry["name"]] = flat.reshape((rows, cols), order="F").astype(complex)
    return result


def allocation_frame(allocation):
    """One row per boundary sample for Case II, otherwise a single summary row."""
    if allocation.boundary:
        return pd.DataFrame([
            {"lam": s.lam, "branch": s.branch, "A2": s.policy.A2, "A2p": s.policy.A2p, "d2": s.d2}
            for s in allocation.boundary
        ])
    policy, dof = allocation.policy, allocation.dof
    return pd.DataFrame([{
        "regime": allocation.regime.value, "scheme": policy.scheme,
        "A1": policy.A1, "A2": policy.A2, "rho": policy.rho,
        "dc": dof.dc, "dp1": dof.dp1, "dp2": dof.dp2, "sum": dof.sum_dof,
    }])


def checks_frame(report):
    return pd.DataFrame([
        {"name": c.name, "branch": c.branch, "closed_form": c.closed_form,
         "oracle": c.oracle, "deviation": c.deviation}
        for c in report.checks
    ], columns=["name", "branch", "closed_form", "oracle", "deviation"])
