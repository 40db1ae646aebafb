"""Equilibrium report type shared by all solvers, plus common report builders."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .detection import (
    AgentParams,
    DerivedQuantities,
    GameSpec,
    ReceiverCase,
    ReceiverRule,
    SignalDesign,
    SpecError,
    bayes_risk,
    conditional_error_probs,
    prior_only_rule,
    receiver_case,
    risk_pair,
)

__all__ = [
    "Concept",
    "Existence",
    "EquilibriumReport",
    "informative_risks",
    "separation_levels",
]


class Concept(Enum):
    TEAM = "team"
    STACKELBERG = "stackelberg"
    NASH = "nash"


class Existence(Enum):
    EXISTS = "exists"
    ONLY_DEGENERATE = "only-degenerate"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class EquilibriumReport:
    """Outcome of one solve.

    ``d_star`` is the normalized signal distance at equilibrium (0 when
    non-informative), ``d_max`` the largest distance the power budget allows.
    ``risk_t`` and ``risk_r`` are reproducible from ``(signals, rule)`` via
    the detection primitives within 1e-12.
    """

    concept: Concept
    case_label: str
    informative: bool
    d_star: float
    d_max: float
    signals: SignalDesign
    rule: ReceiverRule
    risk_t: float
    risk_r: float
    existence: Existence


def informative_risks(transmitter: AgentParams, receiver: AgentParams,
                      d: float, tau: float, zeta: int) -> tuple[float, float]:
    """Risk pair at normalized distance d under the matched threshold rule."""
    p10, p01 = conditional_error_probs(d, tau, zeta)
    return bayes_risk(transmitter, p10, p01), bayes_risk(receiver, p10, p01)


def separation_levels(zeta: int, p0: float, p1: float, d_star: float,
                      sigma_eff: float) -> tuple[float, float]:
    """Canonical scalar signal levels at normalized separation ``d_star``.

    Levels are oriented so the matched rule direction is positive.  The
    first level starts at its full budget and is shifted only when the other
    budget would otherwise be exceeded.
    """
    root0 = math.sqrt(p0)
    root1 = math.sqrt(p1)
    gap = d_star * sigma_eff
    shift = max(0.0, root0 - root1 - gap)
    u0 = -root0 + shift
    return zeta * u0, zeta * (u0 + gap)


def _zero_signals(spec: GameSpec) -> SignalDesign:
    if spec.noise.is_scalar:
        return SignalDesign(0.0, 0.0)
    return SignalDesign(np.zeros(spec.dimension), np.zeros(spec.dimension))


def degenerate_receiver_report(concept: Concept, spec: GameSpec,
                               dq: DerivedQuantities) -> EquilibriumReport:
    """Report for games whose receiver ignores the observation outright.

    Applies whenever tau is not finite: the rule is fixed by the cost-margin
    case, every signal pair is equivalent, and the zero pair is reported.
    """
    case = receiver_case(spec.receiver)
    rule = {
        ReceiverCase.ALWAYS_H0: ReceiverRule.always_h0(),
        ReceiverCase.ALWAYS_H1: ReceiverRule.always_h1(),
        ReceiverCase.INDIFFERENT: ReceiverRule.indifferent(),
    }.get(case)
    if rule is None:
        raise SpecError("tau: finite threshold games have no degenerate receiver")
    signals = _zero_signals(spec)
    risk_t, risk_r = risk_pair(spec.transmitter, spec.receiver, signals, rule, spec.noise)
    return EquilibriumReport(
        concept=concept,
        case_label="degenerate",
        informative=False,
        d_star=0.0,
        d_max=dq.d_max,
        signals=signals,
        rule=rule,
        risk_t=risk_t,
        risk_r=risk_r,
        existence=Existence.EXISTS,
    )


def babbling_report(concept: Concept, spec: GameSpec, dq: DerivedQuantities,
                    case_label: str, existence: Existence) -> EquilibriumReport:
    """Report for the coincident-signal outcome under a finite tau.

    The receiver plays the prior-only rule with eta = zeta * (tau - 1); the
    zero signal pair is the canonical representative.
    """
    rule = prior_only_rule(dq.tau.finite_value(), dq.zeta)
    signals = _zero_signals(spec)
    risk_t, risk_r = risk_pair(spec.transmitter, spec.receiver, signals, rule, spec.noise)
    return EquilibriumReport(
        concept=concept,
        case_label=case_label,
        informative=False,
        d_star=0.0,
        d_max=dq.d_max,
        signals=signals,
        rule=rule,
        risk_t=risk_t,
        risk_r=risk_r,
        existence=existence,
    )
