"""trailnet: mine developer workflow nets and social graphs from review trails."""

from .eventlog import (
    Event,
    EventLog,
    LogError,
    LogParseError,
    Trace,
    alphabet,
    log_from_sequences,
    parse_csv_log,
    serialize_csv_log,
    simplify,
)
from .relations import FootprintMatrix, Relation, direct_succession, footprint, footprint_to_csv
from .alpha import (
    AlphaIntermediates,
    AlphabetLimitError,
    DanglingActivityWarning,
    alpha,
    candidate_pairs,
    final_tasks,
    initial_tasks,
    intermediates_to_json,
    maximal_pairs,
)
from .petri import (
    Marking,
    NetStructureError,
    NotEnabledError,
    ReplayResult,
    TraceGenerationResult,
    WorkflowNet,
    enabled,
    fire,
    generate_traces,
    initial_marking,
    isomorphic,
    net_from_json,
    replay,
    to_dot,
    to_json,
)
from .reviews import (
    ByArtifact,
    ByCommit,
    ByThread,
    ByTopic,
    CaseStrategy,
    RecordError,
    RecordParseError,
    ReviewRecord,
    Role,
    TraceLog,
    build_log,
    durations,
    parse_records_jsonl,
    time_window_filter,
)
from .social import SocialGraph, graph_from_json, graph_to_dot, graph_to_json, handover_of_work, review_relation

__version__ = "0.1.0"

__all__ = [
    "Event",
    "EventLog",
    "LogError",
    "LogParseError",
    "Trace",
    "alphabet",
    "log_from_sequences",
    "parse_csv_log",
    "serialize_csv_log",
    "simplify",
    "FootprintMatrix",
    "Relation",
    "direct_succession",
    "footprint",
    "footprint_to_csv",
    "AlphaIntermediates",
    "AlphabetLimitError",
    "DanglingActivityWarning",
    "alpha",
    "candidate_pairs",
    "final_tasks",
    "initial_tasks",
    "intermediates_to_json",
    "maximal_pairs",
    "Marking",
    "NetStructureError",
    "NotEnabledError",
    "ReplayResult",
    "TraceGenerationResult",
    "WorkflowNet",
    "enabled",
    "fire",
    "generate_traces",
    "initial_marking",
    "isomorphic",
    "net_from_json",
    "replay",
    "to_dot",
    "to_json",
    "ByArtifact",
    "ByCommit",
    "ByThread",
    "ByTopic",
    "CaseStrategy",
    "RecordError",
    "RecordParseError",
    "ReviewRecord",
    "Role",
    "TraceLog",
    "build_log",
    "durations",
    "parse_records_jsonl",
    "time_window_filter",
    "SocialGraph",
    "graph_from_json",
    "graph_to_dot",
    "graph_to_json",
    "handover_of_work",
    "review_relation",
]
