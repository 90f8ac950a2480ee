import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hornforge import claw_instance, random_instance, refine
from hornforge.reduction import ReductionParams, build_cnf
from hornforge.reduction3 import build_3cnf

CORPUS_SEEDS = list(range(1, 51))


@pytest.fixture(scope="session")
def claw():
    return claw_instance()


@pytest.fixture(scope="session")
def claw_refined(claw):
    return refine(claw)


@pytest.fixture(scope="session")
def corpus():
    """50 seeded random feasible instances plus the claw (unrefined)."""
    return [random_instance(seed) for seed in CORPUS_SEEDS] + [claw_instance()]


@pytest.fixture(scope="session")
def corpus_refined(corpus):
    return [refine(inst) for inst in corpus]


def corpus_t(idx: int) -> int:
    """Amplification count used for corpus instance idx (exercises t > 1)."""
    return 1 + idx % 3


@pytest.fixture(scope="session")
def corpus_artifacts(corpus_refined):
    return [
        build_cnf(inst, ReductionParams.for_instance(inst, t=corpus_t(i)))
        for i, inst in enumerate(corpus_refined)
    ]


@pytest.fixture(scope="session")
def corpus_artifacts_3cnf(corpus_refined):
    return [build_3cnf(inst, t=corpus_t(i)) for i, inst in enumerate(corpus_refined)]
