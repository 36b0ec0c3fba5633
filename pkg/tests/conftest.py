"""Shared fixtures for ccdbench tests"""
import numpy as np
import pytest

from ccdbench.config import DetectorSpec, SweepConfig
from ccdbench.const import DetectorName, Scenario
from ccdbench.signals import DgpSpec, SignalSet, make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(12345)


@pytest.fixture
def white_pair(rng):
    """Two independent white-noise series"""
    return rng.normal(size=2000), rng.normal(size=2000)


@pytest.fixture
def lag_copy_pair(rng):
    """y_t = x_{t-1} exactly"""
    base = rng.normal(size=1001)
    return base[1:], base[:-1]


@pytest.fixture
def white_signals(rng) -> SignalSet:
    return SignalSet(rng.normal(size=(2, 20000)))


@pytest.fixture
def small_config(tmp_path) -> SweepConfig:
    """Fast coupled sweep over two detectors"""
    return SweepConfig(
        dgp=DgpSpec.for_scenario(Scenario.COUPLED, seed=7, n_samples=2000),
        scenario=Scenario.COUPLED,
        detectors=(DetectorSpec(DetectorName.GC_VAR), DetectorSpec(DetectorName.VAR_GRAPH)),
        q_values=(5, 60),
        k_values=(1, 20),
        seeds=(0, 1),
        output_dir=tmp_path,
    )
