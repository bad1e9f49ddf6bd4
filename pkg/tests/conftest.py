import pytest

from delaygames.fixtures import random_corpus, random_delay_spec
from delaygames.model import REACHABILITY, SAFETY


@pytest.fixture(scope="session")
def control_corpus():
    """200 random control games, 50 of them with delay-dependent verdicts."""
    return random_corpus(200, 50)


def delay_spec_params(seed: int) -> dict:
    return {
        "n_states": 1 + seed % 5,
        "kind": (SAFETY, REACHABILITY)[(seed // 5) % 2],
        "alphabet_sizes": ((2, 2), (2, 2), (1, 2), (2, 1))[(seed // 10) % 4],
    }


@pytest.fixture(scope="session")
def delay_corpus():
    """Random delay-game conditions (lookahead set by the caller)."""
    return [(seed, random_delay_spec(seed, lookahead=0, **delay_spec_params(seed))) for seed in range(100)]
