"""
Result writers.

Both formats are byte-stable: floats use the shortest round-trip ``repr``,
JSON keys are sorted and the indentation is fixed, so the same
configuration and seed always produce the same file.
"""

import csv
import hashlib
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .. import __version__
from ..models.experiment import ExperimentConfig, ExperimentResult, OutputFormat


def plain(value: Any) -> Any:
    """Convert numpy scalars and enums into JSON-compatible Python values."""
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if hasattr(value, "value") and isinstance(value.value, str):
        return value.value
    return value


def format_cell(value: Any) -> str:
    """One CSV cell; floats keep full precision."""
    value = plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _rows(result: ExperimentResult) -> List[Dict[str, Any]]:
    return [{column: plain(row.get(column)) for column in result.columns} for row in result.rows]


def rows_checksum(result: ExperimentResult) -> str:
    """sha256 of the canonical JSON encoding of the rows."""
    canonical = json.dumps(_rows(result), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def provenance(config: ExperimentConfig, result: ExperimentResult) -> Dict[str, Any]:
    return {
        "paper_target": result.paper_target,
        "tolerance": result.tolerance,
        "version": __version__,
        "seed": config.seed,
        "checksum": rows_checksum(result),
    }


def render_csv(config: ExperimentConfig, result: ExperimentResult) -> str:
    """Provenance comment lines, a header row and the data rows."""
    buffer = io.StringIO()
    meta = provenance(config, result)
    buffer.write(f"# catsim {meta['version']}\n")
    buffer.write(f"# config: {json.dumps(config.provenance(), sort_keys=True)}\n")
    buffer.write(f"# seed: {config.seed}\n")
    if result.paper_target is not None:
        buffer.write(f"# paper_target: {result.paper_target}\n")
    if result.tolerance is not None:
        buffer.write(f"# tolerance: {format_cell(result.tolerance)}\n")
    buffer.write(f"# checksum: {meta['checksum']}\n")
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_cell(row.get(column)) for column in result.columns])
    return buffer.getvalue()


def render_json(config: ExperimentConfig, result: ExperimentResult) -> str:
    """``{config, rows, provenance}`` with sorted keys."""
    payload = {
        "config": config.provenance(),
        "columns": list(result.columns),
        "rows": _rows(result),
        "provenance": provenance(config, result),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render(config: ExperimentConfig, result: ExperimentResult) -> str:
    if config.format == OutputFormat.JSON:
        return render_json(config, result)
    return render_csv(config, result)


def write_result(
    config: ExperimentConfig, result: ExperimentResult, path: Optional[Path] = None
) -> str:
    """Render ``result`` and write it to ``path`` (or ``config.output``)."""
    text = render(config, result)
    target = path or config.output
    if target is not None:
        target = Path(target)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    return text


__all__ = [
    "plain",
    "format_cell",
    "rows_checksum",
    "provenance",
    "render_csv",
    "render_json",
    "render",
    "write_result",
]
