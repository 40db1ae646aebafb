"""Leader-follower solution: the transmitter commits, the receiver best-responds.

Because the follower plays the matched threshold rule, the leader's risk is a
function of the normalized signal distance d alone.  Its derivative changes
sign with ``slope = k0 + k1`` (behavior as d grows) and
``bend = ln(tau) * (k0 - k1)`` (behavior near d = 0): the risk is decreasing
at d exactly when slope * d^2 - 2 * bend > 0.  That yields six cases over the
sign grid:

* bend < 0, slope >= 0: risk strictly decreasing, optimum at d_max (case-1);
* bend < 0, slope < 0: decreasing then increasing, optimum at
  min(d_max, sqrt(|2 bend / slope|)) (case-2 at the budget, case-3 interior);
* bend >= 0, slope < 0: risk strictly increasing, optimum at 0 (case-4);
* bend >= 0, slope >= 0: increasing then decreasing, optimum at an endpoint:
  d = 0 when the budget ends inside the increasing stretch (case-5), else the
  closed-form endpoint comparison decides (case-6).

Boundary conventions: bend = 0 and slope = 0 route to the >= branches, and a
transmitter with both cost margins zero (risk constant in d) reports the
non-informative outcome ("flat").
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Sequence

from .detection import (
    AgentParams,
    GameSpec,
    NoiseModel,
    PeakPower,
    SignalDesign,
    SpecError,
    derived_quantities,
    optimal_receiver_rule,
    q_function,
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
from .team import require_identical_agents

__all__ = [
    "EndpointChoice",
    "endpoint_rule",
    "classify_transmitter_preference",
    "solve_stackelberg",
    "Perturbation",
    "ScanEntry",
    "StackelbergScan",
    "robustness_scan_stackelberg",
    "single_cost_perturbations",
    "preset_subjective_priors",
    "preset_biased_cost",
    "preset_deception",
]


class EndpointChoice(Enum):
    MAX_SEPARATION = "informative-at-dmax"
    BABBLING = "non-informative"


def endpoint_rule(k0: float, k1: float, tau: float, d_max: float) -> EndpointChoice:
    """Endpoint comparison for the increasing-then-decreasing risk shape.

    Evaluates the sign of

        (k1 / (k0 tau))^sign(ln tau) * Q(|ln tau|/d_max - d_max/2)
            - Q(|ln tau|/d_max + d_max/2)

    which is positive exactly when full separation beats babbling.  An exact
    zero means both endpoints tie; the informative choice is returned because
    it maximizes the information available to the receiver at no cost to the
    transmitter.
    """
    if not (tau > 0.0 and math.isfinite(tau)):
        raise SpecError("tau: must be finite and strictly positive")
    if not d_max > 0.0:
        raise SpecError("d_max: must be strictly positive")
    log_tau = math.log(tau)
    if log_tau * (k0 - k1) < 0.0 or k0 + k1 < 0.0:
        raise SpecError("endpoint comparison applies only to the increasing-then-decreasing shape")
    if k0 == 0.0 and k1 == 0.0:
        raise SpecError("endpoint comparison undefined when both transmitter margins vanish")
    if log_tau > 0.0:
        coeff = k1 / (k0 * tau)
    elif log_tau < 0.0:
        coeff = (k0 * tau) / k1
    else:
        coeff = 1.0
    expr = coeff * q_function(abs(log_tau) / d_max - d_max / 2.0) - q_function(
        abs(log_tau) / d_max + d_max / 2.0
    )
    return EndpointChoice.MAX_SEPARATION if expr >= 0.0 else EndpointChoice.BABBLING


@dataclass(frozen=True)
class TransmitterPreference:
    case_label: str
    d_star: float


def classify_transmitter_preference(k0: float, k1: float, tau: float,
                                    d_max: float) -> TransmitterPreference:
    """Optimal normalized distance for the leader, by the sign grid above."""
    log_tau = math.log(tau)
    bend = log_tau * (k0 - k1)
    slope = k0 + k1
    if bend < 0.0:
        if slope >= 0.0:
            return TransmitterPreference("case-1", d_max)
        ratio = abs(2.0 * bend / slope)
        if d_max * d_max < ratio:
            return TransmitterPreference("case-2", d_max)
        return TransmitterPreference("case-3", math.sqrt(ratio))
    if slope < 0.0:
        return TransmitterPreference("case-4", 0.0)
    if k0 == 0.0 and k1 == 0.0:
        # risk constant in d; minimal separation is the canonical report
        return TransmitterPreference("flat", 0.0)
    numer = abs(2.0 * bend)
    ratio = 0.0 if numer == 0.0 else (math.inf if slope == 0.0 else numer / slope)
    if d_max * d_max < ratio:
        return TransmitterPreference("case-5", 0.0)
    choice = endpoint_rule(k0, k1, tau, d_max)
    if choice is EndpointChoice.MAX_SEPARATION:
        return TransmitterPreference("case-6", d_max)
    return TransmitterPreference("case-6", 0.0)


def solve_stackelberg(spec: GameSpec) -> EquilibriumReport:
    """Leader-follower solution of a scalar peak-power game."""
    if not spec.noise.is_scalar:
        raise SpecError("noise: vector games are solved by solve_stackelberg_vec")
    if not isinstance(spec.power, PeakPower):
        raise SpecError("power: average-power games are solved by solve_stackelberg_avg")
    dq = derived_quantities(spec)
    if not dq.tau.is_finite:
        return degenerate_receiver_report(Concept.STACKELBERG, spec, dq)
    tau = dq.tau.finite_value()
    pref = classify_transmitter_preference(dq.k0, dq.k1, tau, dq.d_max)
    if pref.d_star == 0.0:
        return babbling_report(Concept.STACKELBERG, spec, dq, pref.case_label,
                               Existence.EXISTS)
    s0, s1 = separation_levels(dq.zeta, spec.power.p0, spec.power.p1,
                               pref.d_star, spec.noise.sigma)
    signals = SignalDesign(s0, s1)
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


# ---------------------------------------------------------------------------
# robustness scans around a shared-parameter base point


@dataclass(frozen=True)
class Perturbation:
    """Additive offsets applied to the receiver's parameters to build a
    perturbed transmitter: priors must renormalize (eps_prior0 = -eps_prior1).
    """

    eps_prior0: float = 0.0
    eps_prior1: float = 0.0
    eps_c00: float = 0.0
    eps_c01: float = 0.0
    eps_c10: float = 0.0
    eps_c11: float = 0.0

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "Perturbation":
        if len(v) != 6:
            raise SpecError("perturbation: expected 6 offsets")
        return cls(*[float(x) for x in v])

    @property
    def renormalizes(self) -> bool:
        return self.eps_prior0 == -self.eps_prior1

    def norm(self) -> float:
        return math.sqrt(
            self.eps_prior0 ** 2 + self.eps_prior1 ** 2 + self.eps_c00 ** 2
            + self.eps_c01 ** 2 + self.eps_c10 ** 2 + self.eps_c11 ** 2
        )

    def applied_to(self, base: AgentParams) -> AgentParams:
        return AgentParams(
            base.prior0 + self.eps_prior0,
            base.prior1 + self.eps_prior1,
            (
                (base.c00 + self.eps_c00, base.c01 + self.eps_c01),
                (base.c10 + self.eps_c10, base.c11 + self.eps_c11),
            ),
        )


def single_cost_perturbations(magnitude: float) -> tuple[Perturbation, ...]:
    """One +/-magnitude offset per cost coordinate (8 entries, priors fixed)."""
    out = []
    for field in ("eps_c00", "eps_c01", "eps_c10", "eps_c11"):
        for sign in (1.0, -1.0):
            out.append(Perturbation(**{field: sign * magnitude}))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class ScanEntry:
    perturbation: Perturbation
    report: EquilibriumReport | None
    error: str | None = None


@dataclass(frozen=True, eq=False)
class StackelbergScan:
    base: EquilibriumReport
    entries: tuple[ScanEntry, ...]
    discontinuous: bool


def _scan_entries(spec: GameSpec, perturbations: Iterable[Perturbation], solver):
    entries = []
    for pert in perturbations:
        if not pert.renormalizes:
            entries.append(ScanEntry(pert, None, "priors must renormalize: eps_prior0 = -eps_prior1"))
            continue
        try:
            transmitter = pert.applied_to(spec.receiver)
        except SpecError as exc:
            entries.append(ScanEntry(pert, None, str(exc)))
            continue
        entries.append(ScanEntry(pert, solver(replace(spec, transmitter=transmitter))))
    return tuple(entries)


def robustness_scan_stackelberg(spec: GameSpec,
                                perturbations: Iterable[Perturbation],
                                neighborhood: float = math.inf) -> StackelbergScan:
    """Solve the game with the transmitter offset from the shared base point.

    The base spec must have identical agents and a finite tau.  The scan is
    flagged discontinuous when two perturbations of norm <= ``neighborhood``
    (the zero perturbation included) disagree on informativeness.
    """
    require_identical_agents(spec)
    base = solve_stackelberg(spec)
    if not derived_quantities(spec).tau.is_finite:
        raise SpecError("tau: robustness scans require a finite threshold ratio")
    entries = _scan_entries(spec, perturbations, solve_stackelberg)
    flags = {base.informative}
    for entry in entries:
        if entry.report is not None and entry.perturbation.norm() <= neighborhood:
            flags.add(entry.report.informative)
    return StackelbergScan(base, entries, len(flags) > 1)


# ---------------------------------------------------------------------------
# presets


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise SpecError(f"{name}: must lie strictly inside (0, 1)")
    return value


def preset_subjective_priors(prior0_t: float, prior0_r: float,
                             costs: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (1.0, 0.0)),
                             sigma: float = 1.0, p0: float = 1.0, p1: float = 1.0) -> GameSpec:
    """Agents share costs but disagree on the prior of H0."""
    prior0_t = _check_unit_interval("prior0_t", prior0_t)
    prior0_r = _check_unit_interval("prior0_r", prior0_r)
    return GameSpec(
        transmitter=AgentParams.from_prior0(prior0_t, costs),
        receiver=AgentParams.from_prior0(prior0_r, costs),
        noise=NoiseModel.scalar(sigma),
        power=PeakPower(p0, p1),
    )


def preset_biased_cost(alpha: float, prior0: float = 0.5, sigma: float = 1.0,
                       p0: float = 1.0, p1: float = 1.0) -> GameSpec:
    """Shared priors; transmitter cost bias alpha against the honest receiver.

    The receiver pays the uniform error cost; the transmitter pays alpha on
    errors and 1 - alpha on correct decisions, so alpha > 1/2 aligns the
    agents and alpha < 1/2 opposes them.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise SpecError("alpha: must lie in [0, 1]")
    prior0 = _check_unit_interval("prior0", prior0)
    tx_costs = ((1.0 - alpha, alpha), (alpha, 1.0 - alpha))
    rx_costs = ((0.0, 1.0), (1.0, 0.0))
    return GameSpec(
        transmitter=AgentParams.from_prior0(prior0, tx_costs),
        receiver=AgentParams.from_prior0(prior0, rx_costs),
        noise=NoiseModel.scalar(sigma),
        power=PeakPower(p0, p1),
    )


def preset_deception(prior0: float = 0.5, sigma: float = 1.0,
                     p0: float = 1.0, p1: float = 1.0) -> GameSpec:
    """Transmitter rewarded for induced errors, receiver honest.

    The transmitter's margins are both negative (it prefers the receiver to
    decide wrongly under either hypothesis) while the receiver pays the
    uniform error cost.
    """
    prior0 = _check_unit_interval("prior0", prior0)
    tx_costs = ((1.0, 0.0), (0.0, 1.0))
    rx_costs = ((0.0, 1.0), (1.0, 0.0))
    return GameSpec(
        transmitter=AgentParams.from_prior0(prior0, tx_costs),
        receiver=AgentParams.from_prior0(prior0, rx_costs),
        noise=NoiseModel.scalar(sigma),
        power=PeakPower(p0, p1),
    )
