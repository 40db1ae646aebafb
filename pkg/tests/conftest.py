"""Shared random-instance generators for the test suite.

Costs are drawn from continuous distributions, so cost margins are nonzero
almost surely; generators that promise a finite threshold ratio reject the
draws where the margin signs disagree.
"""

import numpy as np

from sigeq import (
    AgentParams,
    AveragePower,
    GameSpec,
    NoiseModel,
    PeakPower,
    derived_quantities,
)


def random_agent(rng: np.random.Generator) -> AgentParams:
    prior0 = float(rng.uniform(0.05, 0.95))
    c = rng.uniform(0.0, 2.0, size=4)
    return AgentParams.from_prior0(
        prior0, ((float(c[0]), float(c[1])), (float(c[2]), float(c[3]))))


def _noise_and_power(rng: np.random.Generator) -> tuple[NoiseModel, PeakPower]:
    noise = NoiseModel.scalar(float(rng.uniform(0.2, 2.0)))
    power = PeakPower(float(rng.uniform(0.25, 4.0)), float(rng.uniform(0.25, 4.0)))
    return noise, power


def random_scalar_spec(rng: np.random.Generator,
                       finite_tau: bool = True) -> GameSpec:
    while True:
        noise, power = _noise_and_power(rng)
        spec = GameSpec(random_agent(rng), random_agent(rng), noise, power)
        if not finite_tau or derived_quantities(spec).tau.is_finite:
            return spec


def random_identical_spec(rng: np.random.Generator,
                          finite_tau: bool = True) -> GameSpec:
    while True:
        agent = random_agent(rng)
        noise, power = _noise_and_power(rng)
        spec = GameSpec(agent, agent, noise, power)
        if not finite_tau or derived_quantities(spec).tau.is_finite:
            return spec


def random_avg_spec(rng: np.random.Generator,
                    identical: bool = False,
                    finite_tau: bool = True) -> GameSpec:
    while True:
        tx = random_agent(rng)
        rx = tx if identical else random_agent(rng)
        spec = GameSpec(tx, rx, NoiseModel.scalar(float(rng.uniform(0.2, 2.0))),
                        AveragePower(float(rng.uniform(0.25, 4.0))))
        if not finite_tau or derived_quantities(spec).tau.is_finite:
            return spec


def random_spd_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    m = a @ a.T + n * np.eye(n)
    return 0.5 * (m + m.T)


def random_vector_spec(rng: np.random.Generator, n: int,
                       identical: bool = False,
                       finite_tau: bool = True) -> GameSpec:
    while True:
        tx = random_agent(rng)
        rx = tx if identical else random_agent(rng)
        noise = NoiseModel.matrix(random_spd_matrix(rng, n))
        power = PeakPower(float(rng.uniform(0.25, 4.0)),
                          float(rng.uniform(0.25, 4.0)))
        spec = GameSpec(tx, rx, noise, power, dimension=n)
        if not finite_tau or derived_quantities(spec).tau.is_finite:
            return spec


DEMO_TX = AgentParams.from_prior0(0.25, ((0.6, 0.4), (0.4, 0.6)))
DEMO_RX = AgentParams.from_prior0(0.25, ((0.0, 0.4), (0.9, 0.0)))


def demo_spec() -> GameSpec:
    return GameSpec(DEMO_TX, DEMO_RX, NoiseModel.scalar(0.1), PeakPower(1.0, 1.0))


def team_point_spec(sigma: float = 0.1) -> GameSpec:
    """Shared-parameter game at the demo receiver point (tau = 0.75)."""
    agent = AgentParams.from_prior0(0.25, ((0.0, 0.4), (0.9, 0.0)))
    return GameSpec(agent, agent, NoiseModel.scalar(sigma), PeakPower(1.0, 1.0))


def fragile_team_spec() -> GameSpec:
    """Shared-parameter game (tau = 4/27) whose small power budget leaves the
    endpoint comparison nearly tied, so 1e-3 cost offsets flip informativeness."""
    agent = AgentParams.from_prior0(0.25, ((0.0, 0.9), (0.4, 0.0)))
    return GameSpec(agent, agent, NoiseModel.scalar(30.0), PeakPower(1.0, 1.0))
