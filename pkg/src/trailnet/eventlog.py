"""Event-log data model and its CSV interchange format.

A log is a sequence of cases; each case carries an ordered sequence of
activity executions, optionally attributed to an originator and stamped
with a UTC instant. Activity names are compared byte-exact, never folded.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Sequence, TextIO

CSV_HEADER = ("case_id", "activity", "originator", "timestamp")
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


class LogError(ValueError):
    """A value violates the event-log contract."""


class LogParseError(LogError):
    """Input text cannot be turned into a valid event log."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 ``YYYY-MM-DDThh:mm:ssZ`` instant (UTC, second precision)."""
    try:
        naive = datetime.strptime(text, TIMESTAMP_FORMAT)
    except ValueError:
        raise LogError(f"bad timestamp {text!r}, expected YYYY-MM-DDThh:mm:ssZ") from None
    return naive.replace(tzinfo=timezone.utc)


def format_timestamp(instant: datetime) -> str:
    """Render a timestamp in the interchange format, converting to UTC."""
    return _normalize_timestamp(instant).strftime(TIMESTAMP_FORMAT)


def _normalize_timestamp(instant: datetime) -> datetime:
    # Naive datetimes are taken to already be UTC.
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=timezone.utc)
    instant = instant.astimezone(timezone.utc)
    if instant.microsecond != 0:
        raise LogError(f"timestamp {instant.isoformat()} has sub-second precision")
    return instant


@dataclass(frozen=True)
class Event:
    """One activity execution inside a case."""

    case_id: str
    activity: str
    originator: str | None = None
    timestamp: datetime | None = None

    def __post_init__(self):
        if not self.case_id:
            raise LogError("event has empty case_id")
        if not self.activity:
            raise LogError("event has empty activity")
        if not self.originator:
            object.__setattr__(self, "originator", None)
        if self.timestamp is not None:
            object.__setattr__(self, "timestamp", _normalize_timestamp(self.timestamp))


@dataclass(frozen=True)
class Trace:
    """The event sequence of one case.

    Either every event carries a timestamp (non-decreasing along the
    sequence) or none does; ordering then comes from the input.
    """

    case_id: str
    events: tuple[Event, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise LogError(f"case {self.case_id!r} has no events")
        for event in self.events:
            if event.case_id != self.case_id:
                raise LogError(
                    f"event of case {event.case_id!r} placed in case {self.case_id!r}"
                )
        stamps = [e.timestamp for e in self.events]
        if any(s is not None for s in stamps):
            if any(s is None for s in stamps):
                raise LogError(f"case {self.case_id!r} mixes timestamped and untimestamped events")
            if any(a > b for a, b in zip(stamps, stamps[1:])):
                raise LogError(f"case {self.case_id!r} events are not in timestamp order")

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class EventLog:
    """An ordered collection of traces with unique case ids."""

    traces: tuple[Trace, ...]

    def __post_init__(self):
        object.__setattr__(self, "traces", tuple(self.traces))
        seen: set[str] = set()
        for trace in self.traces:
            if trace.case_id in seen:
                raise LogError(f"duplicate case_id {trace.case_id!r}")
            seen.add(trace.case_id)

    @property
    def alphabet(self) -> frozenset[str]:
        return alphabet(self)

    def __len__(self) -> int:
        return len(self.traces)


def alphabet(log: EventLog) -> frozenset[str]:
    """The set of activity names occurring in at least one trace."""
    return frozenset(e.activity for t in log.traces for e in t.events)


def simplify(log: EventLog) -> list[tuple[str, ...]]:
    """One activity-name sequence per trace, in log order, duplicates kept."""
    return [t.activities for t in log.traces]


def log_from_sequences(
    sequences: Iterable[Sequence[str]],
    case_ids: Iterable[str] | None = None,
) -> EventLog:
    """Build a bare log from activity sequences (cases ``c1``, ``c2``, ... by default)."""
    sequences = list(sequences)
    if case_ids is None:
        case_ids = [f"c{i}" for i in range(1, len(sequences) + 1)]
    traces = []
    for case_id, seq in zip(case_ids, sequences, strict=True):
        traces.append(Trace(case_id, tuple(Event(case_id, a) for a in seq)))
    return EventLog(tuple(traces))


def parse_csv_log(source: str | TextIO) -> EventLog:
    """Parse the CSV interchange format into an :class:`EventLog`.

    Rows are grouped by ``case_id`` preserving file order within a case;
    cases whose events carry timestamps are then stably re-sorted by
    timestamp. Raises :class:`LogParseError` with the offending line
    number for malformed rows.
    """
    text = source.read() if hasattr(source, "read") else source
    reader = csv.reader(io.StringIO(text.lstrip("﻿"), newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise LogParseError("missing header row") from None
    if tuple(header) != CSV_HEADER:
        raise LogParseError(f"bad header {header!r}, expected {','.join(CSV_HEADER)}", 1)

    cases: dict[str, list[tuple[Event, int]]] = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise LogParseError(f"expected {len(CSV_HEADER)} fields, got {len(row)}", line)
        case_id, activity, originator, stamp = row
        if not case_id:
            raise LogParseError("empty case_id", line)
        if not activity:
            raise LogParseError("empty activity", line)
        try:
            timestamp = parse_timestamp(stamp) if stamp else None
        except LogError as exc:
            raise LogParseError(str(exc), line) from None
        event = Event(case_id, activity, originator or None, timestamp)
        cases.setdefault(case_id, []).append((event, line))

    traces = []
    for case_id, rows in cases.items():
        stamped = [line for event, line in rows if event.timestamp is not None]
        if stamped and len(stamped) != len(rows):
            missing = next(line for event, line in rows if event.timestamp is None)
            raise LogParseError(f"case {case_id!r} mixes timestamped and untimestamped rows", missing)
        events = [event for event, _ in rows]
        if stamped:
            events.sort(key=lambda e: e.timestamp)  # stable: ties keep file order
        traces.append(Trace(case_id, tuple(events)))
    return EventLog(tuple(traces))


def serialize_csv_log(log: EventLog) -> str:
    """Canonical CSV rendering: exact header, ``\\n`` line endings."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for trace in log.traces:
        for event in trace.events:
            writer.writerow(
                [
                    event.case_id,
                    event.activity,
                    event.originator or "",
                    format_timestamp(event.timestamp) if event.timestamp else "",
                ]
            )
    return out.getvalue()
