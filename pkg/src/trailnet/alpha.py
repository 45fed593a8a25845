"""Workflow-net discovery from event logs via the classic alpha miner.

The eight steps: collect the task alphabet, the initial and final tasks,
enumerate candidate place pairs (A, B) where every A-member causally
precedes every B-member and each side is internally unrelated, keep only
the inclusion-maximal pairs, then wire one place per surviving pair
between a fresh source and sink.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .eventlog import EventLog
from .relations import FootprintMatrix, Relation, footprint
from .petri import WorkflowNet

SOURCE_PLACE = "i_W"
SINK_PLACE = "o_W"
DEFAULT_ALPHABET_LIMIT = 16

CandidatePair = tuple[frozenset[str], frozenset[str]]


class AlphabetLimitError(ValueError):
    """Alphabet too large for the exponential pair enumeration."""

    def __init__(self, size: int, limit: int):
        super().__init__(f"alphabet has {size} activities, limit is {limit}")
        self.size = size
        self.limit = limit


class DanglingActivityWarning(UserWarning):
    """An activity ended up with no arcs in the mined net."""


@dataclass(frozen=True)
class AlphaIntermediates:
    """Every intermediate set of the miner, exposed for inspection."""

    t_w: frozenset[str]
    t_i: frozenset[str]
    t_o: frozenset[str]
    x_w: frozenset[CandidatePair]
    y_w: frozenset[CandidatePair]


def initial_tasks(log: EventLog) -> frozenset[str]:
    """First activity of each trace."""
    if not log.traces:
        raise ValueError("empty log has no initial tasks")
    return frozenset(t.events[0].activity for t in log.traces)


def final_tasks(log: EventLog) -> frozenset[str]:
    """Last activity of each trace."""
    if not log.traces:
        raise ValueError("empty log has no final tasks")
    return frozenset(t.events[-1].activity for t in log.traces)


def candidate_pairs(
    matrix: FootprintMatrix, alphabet_limit: int = DEFAULT_ALPHABET_LIMIT
) -> frozenset[CandidatePair]:
    """All pairs (A, B) of non-empty activity sets where every a in A causally
    precedes every b in B and both sides are pairwise unrelated.

    The pairwise-unrelated condition ranges over equal members too, so an
    activity in a parallel self-relation (a length-2 repetition) cannot
    appear on either side. Enumeration only ever extends sets that still
    satisfy the constraints, restricted to activities with causal arcs,
    but remains exponential in the worst case; ``alphabet_limit`` guards it.
    """
    if len(matrix.alphabet) > alphabet_limit:
        raise AlphabetLimitError(len(matrix.alphabet), alphabet_limit)

    def causal(a: str, b: str) -> bool:
        return matrix.cells[(a, b)] is Relation.CAUSAL_FORWARD

    def unrelated(a: str, b: str) -> bool:
        return matrix.cells[(a, b)] is Relation.UNRELATED

    # Only self-unrelated activities with at least one causal arc can occur.
    sources = [
        a
        for a in matrix.alphabet
        if unrelated(a, a) and any(causal(a, b) for b in matrix.alphabet)
    ]
    pairs: set[CandidatePair] = set()

    def extend_b(a_side: frozenset[str], chosen: list[str], candidates: list[str]) -> None:
        if chosen:
            pairs.add((a_side, frozenset(chosen)))
        for i, b in enumerate(candidates):
            if all(unrelated(b, other) for other in chosen):
                extend_b(a_side, chosen + [b], candidates[i + 1 :])

    def extend_a(chosen: list[str], candidates: list[str]) -> None:
        if chosen:
            targets = [
                b
                for b in matrix.alphabet
                if unrelated(b, b) and all(causal(a, b) for a in chosen)
            ]
            if not targets:
                return  # supersets of A only shrink the target pool
            extend_b(frozenset(chosen), [], targets)
        for i, a in enumerate(candidates):
            if all(unrelated(a, other) for other in chosen):
                extend_a(chosen + [a], candidates[i + 1 :])

    extend_a([], sources)
    return frozenset(pairs)


def maximal_pairs(pairs: frozenset[CandidatePair] | set[CandidatePair]) -> frozenset[CandidatePair]:
    """Pairs not componentwise contained in any other pair of the set.

    The candidate set is componentwise downward closed (every non-empty
    componentwise subset of a member is itself a member), so a pair is
    dominated exactly when some single-activity extension of one side is
    still in the set. That keeps the filter near-linear instead of
    quadratic in the candidate count.
    """
    pairs = set(pairs)
    universe = {x for a, b in pairs for x in a | b}

    def dominated(a: frozenset[str], b: frozenset[str]) -> bool:
        return any(
            (x not in a and (a | {x}, b) in pairs) or (x not in b and (a, b | {x}) in pairs)
            for x in universe
        )

    return frozenset((a, b) for a, b in pairs if not dominated(a, b))


def place_name(a_side: frozenset[str], b_side: frozenset[str]) -> str:
    """Canonical place name, stable across runs: ``p({A,...},{B,...})``."""
    return "p({%s},{%s})" % (",".join(sorted(a_side)), ",".join(sorted(b_side)))


def alpha(
    log: EventLog, alphabet_limit: int = DEFAULT_ALPHABET_LIMIT
) -> tuple[WorkflowNet, AlphaIntermediates]:
    """Mine a workflow net from the log; also returns every intermediate set."""
    if not log.traces:
        raise ValueError("cannot mine an empty log")
    t_w = log.alphabet
    t_i = initial_tasks(log)
    t_o = final_tasks(log)
    matrix = footprint(log)
    x_w = candidate_pairs(matrix, alphabet_limit)
    y_w = maximal_pairs(x_w)

    places = {SOURCE_PLACE, SINK_PLACE}
    arcs: set[tuple[str, str]] = set()
    for a_side, b_side in y_w:
        place = place_name(a_side, b_side)
        places.add(place)
        arcs.update((a, place) for a in a_side)
        arcs.update((place, b) for b in b_side)
    arcs.update((SOURCE_PLACE, t) for t in t_i)
    arcs.update((t, SINK_PLACE) for t in t_o)

    connected = {node for arc in arcs for node in arc}
    for task in sorted(t_w - connected):
        warnings.warn(
            f"activity {task!r} has no causal partners and is neither initial nor final; "
            "its transition dangles",
            DanglingActivityWarning,
            stacklevel=2,
        )

    net = WorkflowNet(
        places=frozenset(places),
        transitions=frozenset(t_w),
        arcs=frozenset(arcs),
        source=SOURCE_PLACE,
        sink=SINK_PLACE,
    )
    return net, AlphaIntermediates(t_w, t_i, t_o, x_w, y_w)


def _sorted_pairs(pairs: frozenset[CandidatePair]) -> list[list[list[str]]]:
    return sorted(
        [[sorted(a), sorted(b)] for a, b in pairs],
        key=lambda pair: (tuple(pair[0]), tuple(pair[1])),
    )


def intermediates_to_json(intermediates: AlphaIntermediates) -> str:
    """JSON rendering with lexicographically sorted members, stable byte-for-byte."""
    payload = {
        "T_W": sorted(intermediates.t_w),
        "T_I": sorted(intermediates.t_i),
        "T_O": sorted(intermediates.t_o),
        "X_W": _sorted_pairs(intermediates.x_w),
        "Y_W": _sorted_pairs(intermediates.y_w),
    }
    return json.dumps(payload, indent=2) + "\n"
