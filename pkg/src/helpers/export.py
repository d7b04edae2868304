import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, List, Sequence

from src.constants import CSV_FLOAT_FORMAT

logger = logging.getLogger("helpers.export")

DIAGNOSTIC_COLUMNS = ["u", "v", "code", "detail"]


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, CSV_FLOAT_FORMAT)
    return str(value)


def write_rows(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]], fmt: str = "csv") -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)

    if fmt == "json":
        # json writes floats with repr, which round-trips doubles exactly
        records = [dict(zip(columns, row)) for row in rows]
        path.write_text(json.dumps(records, indent=2) + "\n")
    else:
        with path.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(v) for v in row])


def diagnostics_path(out: Path) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".diagnostics.csv")


def write_diagnostics(out: Path, diagnostics: Iterable[Sequence[Any]]) -> Path:
    path = diagnostics_path(out)
    write_rows(path, DIAGNOSTIC_COLUMNS, diagnostics, "csv")
    return path


def format_rows(columns: Sequence[str], rows: List[Sequence[Any]], limit: int = 10) -> List[str]:
    """A few rows as aligned text, for the interactive shell"""
    lines = [", ".join(columns)]
    lines.extend(", ".join(_cell(v) for v in row) for row in rows[:limit])
    if len(rows) > limit:
        lines.append(f"... {len(rows) - limit} more rows")
    return lines
