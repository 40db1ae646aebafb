"""Independent numeric checks: channel simulation and brute-force search.

The Monte Carlo estimator never touches the analytic error-probability
formulas; it pushes simulated observations through the decision rule and
counts.  The grid search does evaluate the analytic risk, but scans
separations by brute force instead of trusting the solver's case analysis.
Both exist to catch mistakes in the closed-form solvers.

Reproducibility contract: sampling uses the Philox counter-based generator,
one independent subsequence per (hypothesis, chunk) derived from the master
seed, and standard normals via the inverse CDF (scipy ndtri).  Chunk results
are integer tallies, so their sum does not depend on worker scheduling and
results are bitwise identical for any thread count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, ndtri

from .detection import (
    AgentParams,
    GameSpec,
    NoiseModel,
    PeakPower,
    ReceiverRule,
    RuleKind,
    SignalDesign,
    SpecError,
    bayes_risk,
    derived_quantities,
    prior_only_rule,
)
from .equilibrium import Concept

__all__ = ["McEstimate", "mc_estimate", "grid_search_transmitter"]

_CHUNK = 1 << 15
_MIN_SAMPLES = 10_000
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class McEstimate:
    """Empirical error probabilities and risks with per-quantity std errors."""

    p10_hat: float
    p01_hat: float
    risk_t_hat: float
    risk_r_hat: float
    p10_stderr: float
    p01_stderr: float
    risk_t_stderr: float
    risk_r_stderr: float
    n_samples: int
    seed: int


def _chunk_normals(seed: int, hyp: int, chunk: int, shape) -> np.ndarray:
    gen = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed,
                                                spawn_key=(hyp, chunk)))
    )
    u = gen.random(shape)
    # random() can return exactly 0, where the inverse CDF diverges
    u[u == 0.0] = 2.0 ** -53
    return ndtri(u)


def _count_h1_scalar(seed: int, hyp: int, chunk: int, size: int, signal: float,
                     sigma: float, a: float, eta: float) -> int:
    z = _chunk_normals(seed, hyp, chunk, size)
    y = signal + sigma * z
    return int(np.count_nonzero(a * y > eta))


def _count_h1_vector(seed: int, hyp: int, chunk: int, size: int,
                     signal: np.ndarray, chol: np.ndarray, a: np.ndarray,
                     eta: float) -> int:
    z = _chunk_normals(seed, hyp, chunk, (size, chol.shape[0]))
    y = z @ chol.T + signal
    return int(np.count_nonzero(y @ a > eta))


def _thread_cap() -> int:
    raw = os.environ.get("SIGEQ_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        value = 1
    return max(1, value)


def mc_estimate(signals: SignalDesign, rule: ReceiverRule, noise: NoiseModel,
                agents: tuple[AgentParams, AgentParams], n: int,
                seed: int) -> McEstimate:
    """Estimate error probabilities and risks by simulating the channel.

    Half the samples go to each hypothesis.  Degenerate rules ignore the
    observation, so their probabilities are exact and carry zero std error.
    """
    tx, rx = agents
    if n < _MIN_SAMPLES:
        raise SpecError("n: at least 10000 samples required")
    m = n // 2
    if noise.is_scalar:
        if isinstance(signals.s0, np.ndarray):
            raise SpecError("signals: scalar channel takes scalar signals")
    else:
        dim = noise.dimension
        for s in (signals.s0, signals.s1):
            if not isinstance(s, np.ndarray) or s.shape != (dim,):
                raise SpecError("signals: dimension mismatch with the channel")
        if rule.kind is RuleKind.THRESHOLD:
            a = np.asarray(rule.a, dtype=float)
            if a.shape != (dim,):
                raise SpecError("rule: direction dimension mismatch")

    if rule.kind is not RuleKind.THRESHOLD:
        p10, p01 = (1.0, 0.0) if rule.kind is RuleKind.ALWAYS_H1 else (0.0, 1.0)
        return McEstimate(p10, p01,
                          bayes_risk(tx, p10, p01), bayes_risk(rx, p10, p01),
                          0.0, 0.0, 0.0, 0.0, 2 * m, seed)

    chunks = [(c * _CHUNK, min(m, (c + 1) * _CHUNK))
              for c in range((m + _CHUNK - 1) // _CHUNK)]
    jobs = []
    if noise.is_scalar:
        for hyp, signal in ((0, signals.s0), (1, signals.s1)):
            for c, (start, stop) in enumerate(chunks):
                jobs.append((_count_h1_scalar, seed, hyp, c, stop - start,
                             signal, noise.sigma, rule.a, rule.eta))
    else:
        chol = np.linalg.cholesky(noise.covariance)
        a = np.asarray(rule.a, dtype=float)
        for hyp, signal in ((0, signals.s0), (1, signals.s1)):
            for c, (start, stop) in enumerate(chunks):
                jobs.append((_count_h1_vector, seed, hyp, c, stop - start,
                             signal, chol, a, rule.eta))

    counts = [0, 0]
    with ThreadPoolExecutor(max_workers=_thread_cap()) as pool:
        futures = [pool.submit(job[0], *job[1:]) for job in jobs]
        for job, fut in zip(jobs, futures):
            counts[job[2]] += fut.result()

    p10_hat = counts[0] / m
    p01_hat = (m - counts[1]) / m
    se10 = math.sqrt(p10_hat * (1.0 - p10_hat) / m)
    se01 = math.sqrt(p01_hat * (1.0 - p01_hat) / m)

    def risk_se(agent: AgentParams) -> float:
        w10 = agent.prior0 * agent.false_alarm_margin * se10
        w01 = agent.prior1 * agent.miss_margin * se01
        return math.hypot(w10, w01)

    return McEstimate(
        p10_hat, p01_hat,
        bayes_risk(tx, p10_hat, p01_hat), bayes_risk(rx, p10_hat, p01_hat),
        se10, se01, risk_se(tx), risk_se(rx),
        2 * m, seed,
    )


def grid_search_transmitter(spec: GameSpec, concept: Concept,
                            grid_size: int) -> tuple[float, float]:
    """Brute-force scan of the transmitter's risk over separation choices.

    The receiver always plays its matched follower rule, including the
    prior-only response to the coincident pair at d = 0.  Returns the first
    minimizing grid point, so ties resolve to the smallest separation.
    """
    if concept is not Concept.STACKELBERG:
        raise SpecError("concept: only the leader-follower search is defined")
    if not spec.noise.is_scalar or not isinstance(spec.power, PeakPower):
        raise SpecError("spec: scalar peak-power game required")
    if grid_size < 2:
        raise SpecError("grid_size: need at least the two endpoints")
    dq = derived_quantities(spec)
    if not dq.tau.is_finite:
        raise SpecError("tau: grid search requires a finite threshold ratio")
    tau = dq.tau.finite_value()
    tx = spec.transmitter

    ds = np.linspace(0.0, dq.d_max, grid_size)
    risks = np.empty(grid_size)
    rule0 = prior_only_rule(tau, dq.zeta)
    p10_0, p01_0 = (1.0, 0.0) if rule0.kind is RuleKind.ALWAYS_H1 else (0.0, 1.0)
    risks[0] = bayes_risk(tx, p10_0, p01_0)

    pos = ds[1:]
    log_tau = math.log(tau)
    p10 = 0.5 * erfc(dq.zeta * (log_tau / pos + pos / 2.0) / _SQRT2)
    p01 = 0.5 * erfc(dq.zeta * (-log_tau / pos + pos / 2.0) / _SQRT2)
    risks[1:] = (
        tx.prior0 * tx.c00 + tx.prior1 * tx.c11
        + tx.prior0 * tx.false_alarm_margin * p10
        + tx.prior1 * tx.miss_margin * p01
    )
    i = int(np.argmin(risks))
    return float(ds[i]), float(risks[i])
