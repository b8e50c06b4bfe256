import io
import json

from enum import Enum
from typing import List, Sequence

import pandas as pd

from tabulate import tabulate

from src.bench.bench_record import BenchMode, BenchRecord
from src.common.exceptions import ConfigurationError, MeshParseError

CSV_COLUMNS = ["mesh", "vertices", "elements", "mode", "serial_ms", "parallel_ms", "speedup", "workers", "peak_bytes"]
JSON_FIELDS = CSV_COLUMNS + ["repetitions"]
ROUNDED_COLUMNS = ["serial_ms", "parallel_ms", "speedup"]


class ReportFormat(Enum):
    CSV = "csv"
    JSON = "json"

    @classmethod
    def from_name(cls, name: str) -> "ReportFormat":
        try:
            return cls(name.lower())
        except ValueError:
            raise ConfigurationError(f"Unknown report format '{name}', expected csv or json")


def _record_row(record: BenchRecord) -> dict:
    return {
        "mesh": record.mesh_name,
        "vertices": record.vertex_count,
        "elements": record.element_count,
        "mode": record.mode.value,
        "serial_ms": record.serial_ms,
        "parallel_ms": record.parallel_ms,
        "speedup": record.speedup,
        "workers": record.worker_count,
        "peak_bytes": record.peak_bytes,
        "repetitions": record.repetitions,
    }


def _row_record(row: dict) -> BenchRecord:
    return BenchRecord(mesh_name=str(row["mesh"]),
                       vertex_count=int(row["vertices"]),
                       element_count=int(row["elements"]),
                       mode=BenchMode.from_name(str(row["mode"])),
                       serial_ms=float(row["serial_ms"]),
                       parallel_ms=float(row["parallel_ms"]),
                       speedup=float(row["speedup"]),
                       worker_count=int(row["workers"]),
                       repetitions=int(row.get("repetitions", 0)),
                       peak_bytes=int(row["peak_bytes"]))


def emit_report(records: Sequence[BenchRecord], report_format: ReportFormat = ReportFormat.CSV) -> bytes:
    """
    Render benchmark records. CSV rounds times and speedup to one decimal; JSON keeps full precision and also
    carries the repetition count.

    :param records: rows to render, in order
    :param report_format: CSV or JSON
    :return: encoded report
    """
    rows = [_record_row(record) for record in records]
    if report_format is ReportFormat.JSON:
        return (json.dumps([{field: row[field] for field in JSON_FIELDS} for row in rows], indent=2) + "\n").encode()

    df = pd.DataFrame.from_records(rows, columns=JSON_FIELDS)[CSV_COLUMNS]

    return df.to_csv(index=False, float_format="%.1f", lineterminator="\n").encode()


def read_report(data: bytes, report_format: ReportFormat = ReportFormat.JSON) -> List[BenchRecord]:
    """
    Parse a report written by emit_report. CSV reports come back with their rounded values and no repetition
    count.
    """
    try:
        if report_format is ReportFormat.JSON:
            rows = json.loads(data.decode())
        else:
            rows = pd.read_csv(io.BytesIO(data), dtype={"mesh": str, "mode": str}).to_dict(orient="records")

        return [_row_record(row) for row in rows]
    except (ValueError, KeyError, TypeError) as error:
        raise MeshParseError(f"Unreadable {report_format.value} report: {error}")


def render_table(records: Sequence[BenchRecord]) -> str:
    rows = [[record.mesh_name, record.vertex_count, record.element_count, record.mode.value,
             f"{record.serial_ms:.1f}", f"{record.parallel_ms:.1f}", f"{record.speedup:.1f}", record.worker_count,
             record.peak_bytes] for record in records]

    return tabulate(rows, headers=CSV_COLUMNS, tablefmt="github")
