from __future__ import annotations

import pytest

from trailnet import alpha, log_from_sequences

# Three-case log whose mined net is the canonical fixture throughout the
# suite: B and C run in either order, E is the alternative to both.
SAMPLE_SEQUENCES = ["ABCD", "ACBD", "AED"]

SAMPLE_CSV = "\n".join(
    [
        "case_id,activity,originator,timestamp",
        "1,A,,",
        "1,B,,",
        "1,C,,",
        "1,D,,",
        "2,A,,",
        "2,C,,",
        "2,B,,",
        "2,D,,",
        "3,A,,",
        "3,E,,",
        "3,D,,",
    ]
) + "\n"


@pytest.fixture
def sample_log():
    return log_from_sequences(SAMPLE_SEQUENCES)


@pytest.fixture
def sample_net(sample_log):
    return alpha(sample_log)[0]
