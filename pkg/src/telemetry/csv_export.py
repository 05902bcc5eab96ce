"""
Trajectory CSV writer and schema check.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .trajectory import TrajectoryLog, trajectory_header


def format_float(value: float) -> str:
    """Round-trip exact float text, so identical runs produce identical files."""
    return format(float(value), ".17g")


def write_trajectory_csv(log: TrajectoryLog, output_file: str | Path) -> Path:
    """Write one header line and one line per logged row."""
    output_path = Path(output_file)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(log.header)
        for row in log.rows:
            writer.writerow([format_float(v) for v in row])
    return output_path


def read_trajectory_csv(input_file: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(input_file, "r", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            return [], []
        return header, [row for row in reader]


def _count_numbered(header: list[str], prefix: str) -> int:
    pattern = re.compile(rf"^{re.escape(prefix)}(\d+)$")
    return sum(1 for name in header if pattern.match(name))


def infer_dimensions(header: list[str]) -> tuple[int, int, int, int]:
    """(n, p, L, m) implied by a trajectory header."""
    n = _count_numbered(header, "x")
    p = _count_numbered(header, "th")
    L = _count_numbered(header, "wc")
    m = 1 if "u" in header else _count_numbered(header, "u")
    return n, p, L, m


@dataclass
class CheckReport:
    path: str
    rows: int = 0
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def check_trajectory_csv(input_file: str | Path, max_errors: int = 20) -> CheckReport:
    """
    Validate a trajectory file: header layout, strictly increasing t and
    finite numeric cells.
    """
    report = CheckReport(path=str(input_file))
    path = Path(input_file)
    if not path.exists():
        report.errors.append(f"file not found: {input_file}")
        return report

    header, rows = read_trajectory_csv(path)
    if not header:
        report.errors.append("empty file (no header)")
        return report

    n, p, L, m = infer_dimensions(header)
    if min(n, p, L, m) < 1:
        report.errors.append(f"header is missing a column block (n={n}, p={p}, L={L}, m={m})")
    elif header != trajectory_header(n, p, L, m):
        report.errors.append(
            "header does not match the trajectory layout: expected "
            + ",".join(trajectory_header(n, p, L, m))
        )

    report.rows = len(rows)
    if not rows:
        report.errors.append("no data rows")
        return report

    previous_t = -math.inf
    for line_no, row in enumerate(rows, start=2):
        if len(report.errors) >= max_errors:
            report.errors.append("too many errors, stopping")
            break
        if len(row) != len(header):
            report.errors.append(f"line {line_no}: expected {len(header)} cells, got {len(row)}")
            continue
        try:
            values = [float(cell) for cell in row]
        except ValueError:
            report.errors.append(f"line {line_no}: non-numeric cell")
            continue
        if not all(math.isfinite(v) for v in values):
            report.errors.append(f"line {line_no}: non-finite value")
        if not values[0] > previous_t:
            report.errors.append(f"line {line_no}: t={values[0]} does not increase")
        previous_t = values[0]
    return report
