"""Reader for the sweep CSV column contract."""

import csv

from altplots.figspec import PlotError

# column contract shared with the sweep tool; booleans are lowercase text
CSV_COLUMNS = ("vary_name", "vary_value", "pair", "i", "j", "concurrence",
               "energy", "solver", "converged", "clip", "seconds")

_FLOAT = {"vary_value", "concurrence", "energy", "clip", "seconds"}
_INT = {"i", "j"}
_BOOL = {"converged"}


def read_rows(path):
    """Parse one contract CSV into a list of typed dicts.

    Raises PlotError on a missing file, a foreign header, or a file that
    carries no data rows (a header-only CSV has nothing to draw).
    """
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise PlotError(f"{path}: empty file, expected the sweep "
                                "CSV header") from None
            if tuple(header) != CSV_COLUMNS:
                raise PlotError(
                    f"{path}: header {header} does not match the sweep "
                    f"column contract {list(CSV_COLUMNS)}")
            rows = []
            for line in reader:
                if len(line) != len(CSV_COLUMNS):
                    raise PlotError(f"{path}: malformed row {line}")
                row = dict(zip(CSV_COLUMNS, line))
                for k in _FLOAT:
                    row[k] = float(row[k])
                for k in _INT:
                    row[k] = int(row[k])
                for k in _BOOL:
                    row[k] = row[k] == "true"
                rows.append(row)
    except OSError as exc:
        raise PlotError(f"{path}: {exc.strerror}") from exc
    if not rows:
        raise PlotError(f"{path}: header-only CSV, no data rows to plot")
    return rows
