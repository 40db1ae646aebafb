"""Vector-channel extension: multivariate Gaussian noise with covariance.

Distance is measured in the noise metric (Mahalanobis), so everything the
scalar analysis says about the normalized distance d carries over verbatim;
what changes is geometry.  The budget-maximal distance is achieved along the
covariance's minimum eigenvector, which makes that direction canonical for
informative signal pairs, and a one-dimensional covariance [[sigma^2]]
reproduces the scalar solvers exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .detection import (
    GameSpec,
    PeakPower,
    RuleKind,
    SignalDesign,
    SpecError,
    _sign,
    derived_quantities,
    optimal_receiver_rule,
)
from .equilibrium import (
    Concept,
    EquilibriumReport,
    Existence,
    babbling_report,
    degenerate_receiver_report,
    informative_risks,
    separation_levels,
)
from .nash import _mixed_label, _plain_label, _xi_signs, best_response_receiver
from .stackelberg import classify_transmitter_preference
from .team import require_identical_agents

__all__ = [
    "EigenPair",
    "min_eigenpair",
    "mahalanobis_d",
    "best_response_transmitter_vec",
    "solve_team_vec",
    "solve_stackelberg_vec",
    "solve_nash_vec",
]

_SYMMETRY_TOL = 1e-12
_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EigenPair:
    """Smallest eigenvalue with a canonically signed unit eigenvector."""

    value: float
    vector: np.ndarray
    residual: float


def min_eigenpair(matrix) -> EigenPair:
    """Smallest eigenpair of a symmetric positive-definite matrix.

    The eigenvector is normalized and sign-fixed so its first component of
    nonnegligible magnitude is positive.  The residual ||A v - lambda v||
    must come out below 1e-9 * ||A||.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpecError("matrix: must be square")
    if a.shape[0] > 64:
        raise SpecError("matrix: dimension limited to 64")
    if np.max(np.abs(a - a.T)) > _SYMMETRY_TOL:
        raise SpecError("matrix: must be symmetric within 1e-12")
    values, vectors = np.linalg.eigh(a)
    if values[0] <= 0.0:
        raise SpecError("matrix: must be positive definite")
    vec = vectors[:, 0].copy()
    nonzero = np.nonzero(np.abs(vec) > 1e-12)[0]
    if nonzero.size and vec[nonzero[0]] < 0.0:
        vec = -vec
    value = float(values[0])
    residual = float(np.linalg.norm(a @ vec - value * vec))
    if residual > _RESIDUAL_TOL * float(np.linalg.norm(a)):
        raise ArithmeticError("eigenpair residual exceeded tolerance")
    vec.setflags(write=False)
    return EigenPair(value, vec, residual)


def mahalanobis_d(signals: SignalDesign, covariance) -> float:
    """Distance between the two signals in the noise metric.

    Computed through a linear solve; the covariance is never inverted
    explicitly.
    """
    cov = np.asarray(covariance, dtype=float)
    diff = np.asarray(signals.s1, dtype=float) - np.asarray(signals.s0, dtype=float)
    quad = float(diff @ np.linalg.solve(cov, diff))
    if quad < 0.0:
        raise SpecError("covariance: must be positive definite")
    return math.sqrt(quad)


def _require_vector_peak(spec: GameSpec) -> None:
    if spec.noise.is_scalar:
        raise SpecError("noise: scalar games are solved by the scalar solvers")
    if not isinstance(spec.power, PeakPower):
        raise SpecError("power: vector games support peak power only")


def _informative_signals(spec: GameSpec, zeta: int, d_star: float,
                         axis: EigenPair) -> SignalDesign:
    u0, u1 = separation_levels(zeta, spec.power.p0, spec.power.p1, d_star,
                               math.sqrt(axis.value))
    return SignalDesign(u0 * axis.vector, u1 * axis.vector)


def solve_team_vec(spec: GameSpec) -> EquilibriumReport:
    """Team-optimal design over a vector channel."""
    require_identical_agents(spec)
    _require_vector_peak(spec)
    dq = derived_quantities(spec)
    if not dq.tau.is_finite:
        return degenerate_receiver_report(Concept.TEAM, spec, dq)
    tau = dq.tau.finite_value()
    axis = min_eigenpair(spec.noise.covariance)
    signals = _informative_signals(spec, dq.zeta, dq.d_max, axis)
    rule = optimal_receiver_rule(signals, spec.receiver, spec.noise)
    risk_t, risk_r = informative_risks(spec.transmitter, spec.receiver,
                                       dq.d_max, tau, dq.zeta)
    return EquilibriumReport(
        concept=Concept.TEAM,
        case_label="informative",
        informative=True,
        d_star=dq.d_max,
        d_max=dq.d_max,
        signals=signals,
        rule=rule,
        risk_t=risk_t,
        risk_r=risk_r,
        existence=Existence.EXISTS,
    )


def solve_stackelberg_vec(spec: GameSpec) -> EquilibriumReport:
    """Leader-follower solution over a vector channel."""
    _require_vector_peak(spec)
    dq = derived_quantities(spec)
    if not dq.tau.is_finite:
        return degenerate_receiver_report(Concept.STACKELBERG, spec, dq)
    tau = dq.tau.finite_value()
    pref = classify_transmitter_preference(dq.k0, dq.k1, tau, dq.d_max)
    if pref.d_star == 0.0:
        return babbling_report(Concept.STACKELBERG, spec, dq, pref.case_label,
                               Existence.EXISTS)
    axis = min_eigenpair(spec.noise.covariance)
    signals = _informative_signals(spec, dq.zeta, pref.d_star, axis)
    rule = optimal_receiver_rule(signals, spec.receiver, spec.noise)
    risk_t, risk_r = informative_risks(spec.transmitter, spec.receiver,
                                       pref.d_star, tau, dq.zeta)
    return EquilibriumReport(
        concept=Concept.STACKELBERG,
        case_label=pref.case_label,
        informative=True,
        d_star=pref.d_star,
        d_max=dq.d_max,
        signals=signals,
        rule=rule,
        risk_t=risk_t,
        risk_r=risk_r,
        existence=Existence.EXISTS,
    )


def best_response_transmitter_vec(rule, transmitter, power: PeakPower,
                                  dimension: int | None = None) -> SignalDesign:
    """Vector analog of the transmitter best response: full power along the
    rule direction, signs from the transmitter's own cost margins.

    Degenerate rules carry no direction, so their zero-pair response needs
    ``dimension`` passed explicitly.
    """
    if rule.kind is not RuleKind.THRESHOLD:
        if dimension is None:
            raise SpecError("dimension: required for a degenerate rule")
        return SignalDesign(np.zeros(dimension), np.zeros(dimension))
    a = np.asarray(rule.a, dtype=float)
    unit = a / float(np.linalg.norm(a))
    s0 = -_sign(transmitter.false_alarm_margin) * math.sqrt(power.p0) * unit
    s1 = _sign(transmitter.miss_margin) * math.sqrt(power.p1) * unit
    return SignalDesign(s0, s1)


def solve_nash_vec(spec: GameSpec) -> EquilibriumReport:
    """Equilibrium classification over a vector channel.

    The sign analysis is identical to the scalar game; the canonical
    informative pair lies along the minimum-eigenvalue direction, where the
    matched rule direction stays parallel to the signal difference under the
    noise metric.
    """
    _require_vector_peak(spec)
    dq = derived_quantities(spec)
    if not dq.tau.is_finite:
        return degenerate_receiver_report(Concept.NASH, spec, dq)
    tau = dq.tau.finite_value()
    sx0, sx1 = _xi_signs(spec.transmitter, dq.zeta)
    if sx0 == 0 or sx1 == 0:
        return babbling_report(Concept.NASH, spec, dq, _plain_label(sx0, sx1),
                               Existence.EXISTS)
    if sx0 < 0 and sx1 < 0:
        return babbling_report(Concept.NASH, spec, dq, _plain_label(sx0, sx1),
                               Existence.ONLY_DEGENERATE)
    root0 = math.sqrt(spec.power.p0)
    root1 = math.sqrt(spec.power.p1)
    consistency = sx1 * root1 + sx0 * root0
    if sx0 > 0 and sx1 > 0:
        label = _plain_label(sx0, sx1)
    else:
        label = _mixed_label(sx0, sx1, spec.power.p0, spec.power.p1)
        if consistency == 0.0:
            return babbling_report(Concept.NASH, spec, dq, label, Existence.EXISTS)
        if consistency < 0.0:
            return babbling_report(Concept.NASH, spec, dq, label,
                                   Existence.ONLY_DEGENERATE)
    axis = min_eigenpair(spec.noise.covariance)
    sigma_eff = math.sqrt(axis.value)
    s0 = (-dq.zeta * sx0 * root0) * axis.vector
    s1 = (dq.zeta * sx1 * root1) * axis.vector
    signals = SignalDesign(s0, s1)
    rule = best_response_receiver(signals, spec.receiver, spec.noise)
    d_star = consistency / sigma_eff
    risk_t, risk_r = informative_risks(spec.transmitter, spec.receiver,
                                       d_star, tau, dq.zeta)
    return EquilibriumReport(
        concept=Concept.NASH,
        case_label=label,
        informative=True,
        d_star=d_star,
        d_max=dq.d_max,
        signals=signals,
        rule=rule,
        risk_t=risk_t,
        risk_r=risk_r,
        existence=Existence.EXISTS,
    )
