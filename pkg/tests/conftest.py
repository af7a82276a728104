"""Shared fixtures; the heavy sampled runs are computed once per session."""

import pytest

from curvestats.harness import ExperimentConfig, run_experiment

MASTER_SEED = 20100623


@pytest.fixture(scope="session")
def d8_p2_result():
    """The headline family: plane, p = 2, degree 8, 10^5 samples."""
    cfg = ExperimentConfig(p=2, surface="p2", degree=8, mode="sample",
                           sample_count=100_000, master_seed=MASTER_SEED)
    return run_experiment(cfg)


@pytest.fixture(scope="session")
def d6_p3_result():
    cfg = ExperimentConfig(p=3, surface="p2", degree=6, mode="sample",
                           sample_count=20_000, master_seed=MASTER_SEED)
    return run_experiment(cfg)


@pytest.fixture(scope="session")
def segre_d4_result():
    cfg = ExperimentConfig(p=2, surface="segre", degree=4, mode="sample",
                           sample_count=10_000, master_seed=MASTER_SEED)
    return run_experiment(cfg)


@pytest.fixture(scope="session")
def d3_p2_exhaustive():
    cfg = ExperimentConfig(p=2, surface="p2", degree=3, mode="enumerate")
    return run_experiment(cfg)


@pytest.fixture(scope="session")
def d1_p2_exhaustive():
    cfg = ExperimentConfig(p=2, surface="p2", degree=1, mode="enumerate")
    return run_experiment(cfg)
