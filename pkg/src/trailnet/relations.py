"""Log-based ordering relations and the footprint matrix.

Four relations partition every ordered activity pair (a, b) of a log:
causal forward (a always hands over to b, never the reverse), its mirror,
parallel (direct succession observed in both orders), and unrelated
(never adjacent in either order).
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Mapping

from .eventlog import EventLog, simplify


class Relation(enum.Enum):
    """Ordering relation between two activities, with its cell symbol."""

    CAUSAL_FORWARD = "->"
    CAUSAL_BACKWARD = "<-"
    PARALLEL = "||"
    UNRELATED = "#"


_MIRROR = {
    Relation.CAUSAL_FORWARD: Relation.CAUSAL_BACKWARD,
    Relation.CAUSAL_BACKWARD: Relation.CAUSAL_FORWARD,
    Relation.PARALLEL: Relation.PARALLEL,
    Relation.UNRELATED: Relation.UNRELATED,
}


@dataclass(frozen=True)
class FootprintMatrix:
    """Relation lookup over the full alphabet x alphabet grid."""

    alphabet: tuple[str, ...]
    cells: Mapping[tuple[str, str], Relation]

    def __post_init__(self):
        expected = {(a, b) for a in self.alphabet for b in self.alphabet}
        if set(self.cells) != expected:
            raise ValueError("cells do not cover exactly alphabet x alphabet")
        for (a, b), rel in self.cells.items():
            if self.cells[(b, a)] is not _MIRROR[rel]:
                raise ValueError(f"cells for ({a!r}, {b!r}) break mirror symmetry")

    def relation(self, a: str, b: str) -> Relation:
        try:
            return self.cells[(a, b)]
        except KeyError:
            unknown = a if (a, a) not in self.cells else b
            raise KeyError(f"unknown activity {unknown!r}") from None


def direct_succession(log: EventLog) -> frozenset[tuple[str, str]]:
    """All pairs (a, b) where b immediately follows a in some trace."""
    pairs = set()
    for seq in simplify(log):
        pairs.update(zip(seq, seq[1:]))
    return frozenset(pairs)


def footprint(log: EventLog) -> FootprintMatrix:
    """Classify every ordered pair of the log's alphabet."""
    succ = direct_succession(log)
    names = tuple(sorted(log.alphabet))
    cells = {}
    for a in names:
        for b in names:
            forward = (a, b) in succ
            backward = (b, a) in succ
            if forward and backward:
                cells[(a, b)] = Relation.PARALLEL
            elif forward:
                cells[(a, b)] = Relation.CAUSAL_FORWARD
            elif backward:
                cells[(a, b)] = Relation.CAUSAL_BACKWARD
            else:
                cells[(a, b)] = Relation.UNRELATED
    return FootprintMatrix(names, cells)


def footprint_to_csv(matrix: FootprintMatrix) -> str:
    """CSV grid with activity headers and cell symbols, lexicographic order."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("",) + matrix.alphabet)
    for a in matrix.alphabet:
        writer.writerow([a] + [matrix.cells[(a, b)].value for b in matrix.alphabet])
    return out.getvalue()
