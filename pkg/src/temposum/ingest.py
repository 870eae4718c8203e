"""CSV loading for single users and cohorts."""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

from temposum.errors import (CohortTooSmall, DataError, EmptyCohort, EmptySeries, MissingColumn,
                             UnparseableValue)
from temposum.model import TimeSeries

log = logging.getLogger(__name__)

DEFAULT_EPOCH = date(2018, 1, 1)


@dataclass
class Dataset:
    users: dict[str, dict[str, TimeSeries]]
    excluded: dict[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.users)

    @property
    def attributes(self) -> list[str]:
        for series in self.users.values():
            return list(series)
        return []


def _parse_dates(cells: list[tuple[int, str]], column: str, epoch: date) -> list[date]:
    # integer day indices if every cell is an integer, ISO dates otherwise
    try:
        return [epoch + timedelta(days=int(c)) for _, c in cells]
    except ValueError:
        pass
    out = []
    for row, cell in cells:
        try:
            out.append(date.fromisoformat(cell))
        except ValueError:
            raise UnparseableValue(row, column, cell) from None
    return out


def parse_csv_text(text: str, date_column: str, attribute_columns: Sequence[str],
                   epoch: date = DEFAULT_EPOCH, source: str = "<csv>") -> dict[str, TimeSeries]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise MissingColumn(f"{source}: empty file, no header row") from None
    for col in [date_column, *attribute_columns]:
        if col not in header:
            raise MissingColumn(f"{source}: column {col!r} not found (have {header})")
    di = header.index(date_column)
    ai = {col: header.index(col) for col in attribute_columns}

    date_cells = []
    rows = []
    # row numbers are 1-based file lines, header is line 1
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        cell = row[di].strip() if di < len(row) else ""
        if not cell:
            raise UnparseableValue(lineno, date_column, cell)
        date_cells.append((lineno, cell))
        rows.append((lineno, row))
    dates = _parse_dates(date_cells, date_column, epoch)

    out = {}
    for col, idx in ai.items():
        points = []
        for d, (lineno, row) in zip(dates, rows):
            cell = row[idx].strip() if idx < len(row) else ""
            if not cell:
                continue
            try:
                value = float(cell)
            except ValueError:
                raise UnparseableValue(lineno, col, cell) from None
            if value != value or value in (float("inf"), float("-inf")):
                raise UnparseableValue(lineno, col, cell)
            points.append((d, value))
        if not points:
            raise EmptySeries(f"{source}: column {col!r} has no values")
        points.sort(key=lambda p: p[0])
        for (d0, _), (d1, _) in zip(points, points[1:]):
            if d0 == d1:
                raise DataError(f"{source}: duplicate date {d0} in column {col!r}")
        out[col] = TimeSeries.from_points(col, points)
    return out


def load_csv(path, date_column: str, attribute_columns: Sequence[str],
             epoch: date = DEFAULT_EPOCH) -> dict[str, TimeSeries]:
    """Load one user's log.  Empty cells drop the point for that attribute only."""
    path = Path(path)
    text = path.read_bytes().decode("utf-8-sig")
    return parse_csv_text(text, date_column, attribute_columns, epoch=epoch, source=str(path))


def load_cohort(directory, date_column: str, attribute_columns: Sequence[str], pattern: str = "*.csv",
                min_days: int = 0, epoch: date = DEFAULT_EPOCH, workers: int = 1) -> Dataset:
    """Load every matching file in `directory` as one user (user id = file stem).

    Users with fewer than `min_days` logged days are left out and recorded in
    ``Dataset.excluded``.
    """
    directory = Path(directory)
    files = sorted(p for p in directory.glob(pattern) if p.is_file())
    if not files:
        raise EmptyCohort(f"no files matching {pattern!r} in {directory}")

    def load(p):
        try:
            return load_csv(p, date_column, attribute_columns, epoch=epoch)
        except DataError as exc:
            exc.user_id = p.stem
            exc.args = (f"user {p.stem}: {exc}",)
            raise

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        loaded = list(pool.map(load, files))

    users, excluded = {}, {}
    for p, series in zip(files, loaded):
        days = len({d for s in series.values() for d in s.dates})
        if days < min_days:
            excluded[p.stem] = days
            log.info("excluding user %s: %d logged days < %d", p.stem, days, min_days)
            continue
        users[p.stem] = series
    return Dataset(users, excluded)


def require_cohort(dataset: Dataset, minimum: int = 2) -> None:
    if len(dataset) < minimum:
        raise CohortTooSmall(f"group summaries need at least {minimum} users, have {len(dataset)}")
