"""Binary Bayesian signaling over an additive Gaussian channel.

A transmitter encodes one of two hypotheses H0/H1 as signal levels S0/S1,
the channel adds Gaussian noise, and a receiver maps each observation to a
decision.  Both agents carry their own priors and decision costs, so the
same decision rule is scored against two different Bayes risks.

This module holds the game description types and the detection primitives
shared by every solver:

* the Gaussian tail function ``q_function``,
* the structural classification of the receiver's optimal rule from the
  signs of its cost margins (``receiver_case``),
* the derived scalars that drive the equilibrium analysis
  (``derived_quantities``): the likelihood-ratio threshold ``tau``, the
  orientation sign ``zeta``, the transmitter tail weights ``k0``/``k1``,
  the cost-mismatch ratios ``xi0``/``xi1`` and the maximum normalized
  signal distance ``d_max``,
* conditional error probabilities of the matched threshold rule at a given
  normalized distance (``conditional_error_probs``),
* Bayes-risk evaluation of an arbitrary ``(signals, rule)`` pair
  (``rule_error_probs``, ``bayes_risk``).

Cost convention: ``costs[j][i]`` is the cost of deciding Hj when Hi is
true.  All sign classifications use exact comparisons; no epsilon is
applied to cost margins.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "SpecError",
    "MismatchedAgentsError",
    "AgentParams",
    "NoiseModel",
    "PeakPower",
    "AveragePower",
    "GameSpec",
    "TauKind",
    "Tau",
    "DerivedQuantities",
    "ReceiverCase",
    "RuleKind",
    "ReceiverRule",
    "SignalDesign",
    "q_function",
    "receiver_case",
    "derived_quantities",
    "d_max_of",
    "conditional_error_probs",
    "bayes_risk",
    "optimal_receiver_rule",
    "prior_only_rule",
    "rule_error_probs",
    "risk_pair",
    "signals_equal",
    "rules_equal",
    "check_power",
]

_PRIOR_TOL = 1e-12
_SYMMETRY_TOL = 1e-12
_POWER_TOL = 1e-12
_SQRT2 = math.sqrt(2.0)


class SpecError(ValueError):
    """A game description violates a structural requirement."""


class MismatchedAgentsError(SpecError):
    """Team analysis was requested but transmitter and receiver differ."""


def _sign(x: float) -> int:
    if x > 0.0:
        return 1
    if x < 0.0:
        return -1
    return 0


# ---------------------------------------------------------------------------
# game description


@dataclass(frozen=True)
class AgentParams:
    """Priors and decision costs of one agent.

    Priors must be strictly positive and sum to one within 1e-12; costs must
    be nonnegative.  The two cost margins that drive every result are exposed
    as properties: ``false_alarm_margin`` (C10 - C00, the extra cost of
    deciding H1 under H0) and ``miss_margin`` (C01 - C11, the extra cost of
    deciding H0 under H1).
    """

    prior0: float
    prior1: float
    costs: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prior0", float(self.prior0))
        object.__setattr__(self, "prior1", float(self.prior1))
        rows = tuple(self.costs)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise SpecError("costs: expected a 2x2 matrix indexed [decision][truth]")
        object.__setattr__(
            self,
            "costs",
            (
                (float(rows[0][0]), float(rows[0][1])),
                (float(rows[1][0]), float(rows[1][1])),
            ),
        )
        if not (self.prior0 > 0.0 and self.prior1 > 0.0):
            raise SpecError("prior0: priors must be strictly positive")
        if abs(self.prior0 + self.prior1 - 1.0) > _PRIOR_TOL:
            raise SpecError("prior0: prior0 + prior1 must equal 1 within 1e-12")
        flat = self.costs[0] + self.costs[1]
        if not all(c >= 0.0 for c in flat):
            raise SpecError("costs: entries must be nonnegative")

    @classmethod
    def from_prior0(
        cls, prior0: float, costs: tuple[tuple[float, float], tuple[float, float]]
    ) -> "AgentParams":
        return cls(float(prior0), 1.0 - float(prior0), costs)

    @property
    def c00(self) -> float:
        return self.costs[0][0]

    @property
    def c01(self) -> float:
        return self.costs[0][1]

    @property
    def c10(self) -> float:
        return self.costs[1][0]

    @property
    def c11(self) -> float:
        return self.costs[1][1]

    @property
    def false_alarm_margin(self) -> float:
        """C10 - C00: extra cost of deciding H1 when H0 is true."""
        return self.c10 - self.c00

    @property
    def miss_margin(self) -> float:
        """C01 - C11: extra cost of deciding H0 when H1 is true."""
        return self.c01 - self.c11


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Additive Gaussian noise: scalar N(0, sigma^2) or vector N(0, covariance).

    Exactly one of ``sigma`` / ``covariance`` is set.  A covariance must be
    square, symmetric within 1e-12 elementwise, and positive definite.
    """

    sigma: float | None = None
    covariance: np.ndarray | None = None

    def __post_init__(self) -> None:
        if (self.sigma is None) == (self.covariance is None):
            raise SpecError("noise: provide exactly one of sigma or covariance")
        if self.sigma is not None:
            object.__setattr__(self, "sigma", float(self.sigma))
            if not self.sigma > 0.0:
                raise SpecError("noise.sigma: must be strictly positive")
            return
        cov = np.array(self.covariance, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise SpecError("noise.covariance: must be a square matrix")
        if cov.shape[0] > 64:
            raise SpecError("noise.covariance: dimension limited to 64")
        if np.max(np.abs(cov - cov.T)) > _SYMMETRY_TOL:
            raise SpecError("noise.covariance: must be symmetric within 1e-12")
        if float(np.linalg.eigvalsh(cov)[0]) <= 0.0:
            raise SpecError("noise.covariance: must be positive definite")
        cov.setflags(write=False)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def scalar(cls, sigma: float) -> "NoiseModel":
        return cls(sigma=sigma)

    @classmethod
    def matrix(cls, covariance) -> "NoiseModel":
        return cls(covariance=covariance)

    @property
    def is_scalar(self) -> bool:
        return self.sigma is not None

    @property
    def dimension(self) -> int:
        return 1 if self.is_scalar else int(self.covariance.shape[0])


@dataclass(frozen=True)
class PeakPower:
    """Per-signal magnitude budget: ||S_i||^2 <= p_i."""

    p0: float
    p1: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p0", float(self.p0))
        object.__setattr__(self, "p1", float(self.p1))
        if not (self.p0 > 0.0 and self.p1 > 0.0):
            raise SpecError("power: peak budgets must be strictly positive")


@dataclass(frozen=True)
class AveragePower:
    """Prior-weighted budget: pi0 S0^2 + pi1 S1^2 <= p_avg (transmitter priors)."""

    p_avg: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_avg", float(self.p_avg))
        if not self.p_avg > 0.0:
            raise SpecError("power: p_avg must be strictly positive")


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Full description of one signaling game instance."""

    transmitter: AgentParams
    receiver: AgentParams
    noise: NoiseModel
    power: PeakPower | AveragePower
    dimension: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "dimension", int(self.dimension))
        if self.dimension < 1:
            raise SpecError("dimension: must be a positive integer")
        if self.dimension != self.noise.dimension:
            raise SpecError("dimension: must match the noise model dimension")


# ---------------------------------------------------------------------------
# derived quantities


class TauKind(Enum):
    FINITE = "finite"            # 0 < tau < inf: a likelihood-ratio threshold exists
    NONPOSITIVE = "nonpositive"  # tau <= 0: the rule is one-sided regardless of y
    INFINITE = "infinite"        # zero denominator, nonzero numerator
    INDIFFERENT = "indifferent"  # both receiver margins vanish


@dataclass(frozen=True)
class Tau:
    """Receiver threshold ratio as a tagged extended value.

    ``value`` holds the ratio for FINITE (positive) and NONPOSITIVE tags and
    is None for INFINITE / INDIFFERENT.
    """

    kind: TauKind
    value: float | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind is TauKind.FINITE

    def finite_value(self) -> float:
        if self.kind is not TauKind.FINITE:
            raise SpecError("tau: no finite threshold ratio in this configuration")
        return self.value


@dataclass(frozen=True)
class DerivedQuantities:
    """Scalars the equilibrium analysis runs on.

    ``k0``/``k1`` weight the transmitter's two error-probability tails in its
    risk (NaN unless tau is finite).  ``xi0``/``xi1`` are the ratios of
    transmitter to receiver cost margins with the convention 0/0 -> 0.
    ``d_max`` is the largest normalized signal distance the power budget
    allows.
    """

    tau: Tau
    zeta: int
    k0: float
    k1: float
    xi0: float
    xi1: float
    d_max: float


class ReceiverCase(Enum):
    LRT = "lrt"
    ALWAYS_H0 = "always-h0"
    ALWAYS_H1 = "always-h1"
    INDIFFERENT = "indifferent"


def receiver_case(receiver: AgentParams) -> ReceiverCase:
    """Structure of the optimal rule from the receiver's cost-margin signs.

    Only when both margins share a strict sign does the observation matter
    (LRT).  A single nonnegative/nonpositive combination pins the decision
    outright; two vanishing margins leave the receiver indifferent.
    """
    miss = _sign(receiver.miss_margin)
    fa = _sign(receiver.false_alarm_margin)
    if miss > 0:
        return ReceiverCase.LRT if fa > 0 else ReceiverCase.ALWAYS_H1
    if miss == 0:
        if fa > 0:
            return ReceiverCase.ALWAYS_H0
        if fa < 0:
            return ReceiverCase.ALWAYS_H1
        return ReceiverCase.INDIFFERENT
    return ReceiverCase.LRT if fa < 0 else ReceiverCase.ALWAYS_H0


def _margin_ratio(num: float, den: float) -> float:
    if den != 0.0:
        return num / den
    if num == 0.0:
        return 0.0
    return math.copysign(math.inf, num)


def d_max_of(spec: GameSpec) -> float:
    """Largest normalized signal distance reachable under the power budget."""
    if isinstance(spec.power, PeakPower):
        reach = math.sqrt(spec.power.p0) + math.sqrt(spec.power.p1)
        if spec.noise.is_scalar:
            return reach / spec.noise.sigma
        lam = float(np.linalg.eigvalsh(spec.noise.covariance)[0])
        return reach / math.sqrt(lam)
    if not spec.noise.is_scalar:
        raise SpecError("power: the average-power budget is defined for scalar channels only")
    tx = spec.transmitter
    scale = (tx.prior0 + tx.prior1) / (tx.prior0 * tx.prior1)
    return math.sqrt(scale * spec.power.p_avg) / spec.noise.sigma


def derived_quantities(spec: GameSpec) -> DerivedQuantities:
    rx = spec.receiver
    tx = spec.transmitter
    num = rx.prior0 * rx.false_alarm_margin
    den = rx.prior1 * rx.miss_margin
    if den != 0.0:
        ratio = num / den
        if ratio > 0.0:
            tau = Tau(TauKind.FINITE, ratio)
        else:
            tau = Tau(TauKind.NONPOSITIVE, ratio)
    elif num != 0.0:
        tau = Tau(TauKind.INFINITE)
    else:
        tau = Tau(TauKind.INDIFFERENT)
    zeta = _sign(rx.miss_margin)
    if tau.is_finite:
        k0 = tx.prior0 * zeta * tx.false_alarm_margin * tau.value ** -0.5
        k1 = tx.prior1 * zeta * tx.miss_margin * tau.value ** 0.5
    else:
        k0 = math.nan
        k1 = math.nan
    xi0 = _margin_ratio(tx.false_alarm_margin, rx.false_alarm_margin)
    xi1 = _margin_ratio(tx.miss_margin, rx.miss_margin)
    return DerivedQuantities(tau, zeta, k0, k1, xi0, xi1, d_max_of(spec))


# ---------------------------------------------------------------------------
# decision rules and signal pairs


class RuleKind(Enum):
    THRESHOLD = "threshold"
    ALWAYS_H0 = "always-h0"
    ALWAYS_H1 = "always-h1"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True, eq=False)
class ReceiverRule:
    """Decision rule.  THRESHOLD decides H1 iff a . y > eta with a nonzero.

    Degenerate kinds ignore the observation; ``eta`` then records the
    prior-rule margin zeta * (tau - 1) when one is defined, else 0.
    """

    kind: RuleKind
    a: float | np.ndarray = 0.0
    eta: float = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.a, np.ndarray):
            arr = np.array(self.a, dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, "a", arr)
        else:
            object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "eta", float(self.eta))
        if self.kind is RuleKind.THRESHOLD:
            if self._direction_norm() == 0.0:
                raise SpecError("rule: a threshold rule needs a nonzero direction")
        elif isinstance(self.a, np.ndarray) or self.a != 0.0:
            raise SpecError("rule: degenerate rules carry a = 0")

    def _direction_norm(self) -> float:
        if isinstance(self.a, np.ndarray):
            return float(np.linalg.norm(self.a))
        return abs(self.a)

    @classmethod
    def threshold(cls, a, eta: float) -> "ReceiverRule":
        if isinstance(a, (list, tuple, np.ndarray)):
            a = np.asarray(a, dtype=float)
        return cls(RuleKind.THRESHOLD, a, eta)

    @classmethod
    def always_h0(cls, eta: float = 0.0) -> "ReceiverRule":
        return cls(RuleKind.ALWAYS_H0, 0.0, eta)

    @classmethod
    def always_h1(cls, eta: float = 0.0) -> "ReceiverRule":
        return cls(RuleKind.ALWAYS_H1, 0.0, eta)

    @classmethod
    def indifferent(cls, eta: float = 0.0) -> "ReceiverRule":
        return cls(RuleKind.INDIFFERENT, 0.0, eta)

    def normalized(self) -> "ReceiverRule":
        """Equivalent rule scaled so the direction has unit magnitude."""
        if self.kind is not RuleKind.THRESHOLD:
            return self
        norm = self._direction_norm()
        return ReceiverRule(RuleKind.THRESHOLD, self.a / norm, self.eta / norm)


@dataclass(frozen=True, eq=False)
class SignalDesign:
    """A transmitter signal pair; floats for scalar channels, arrays otherwise."""

    s0: float | np.ndarray
    s1: float | np.ndarray

    def __post_init__(self) -> None:
        for name in ("s0", "s1"):
            v = getattr(self, name)
            if isinstance(v, (list, tuple, np.ndarray)):
                arr = np.array(v, dtype=float)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)
            else:
                object.__setattr__(self, name, float(v))

    @property
    def coincident(self) -> bool:
        if isinstance(self.s0, np.ndarray):
            return bool(np.array_equal(self.s0, self.s1))
        return self.s0 == self.s1


def _num_close(x, y, tol: float) -> bool:
    xa = isinstance(x, np.ndarray)
    ya = isinstance(y, np.ndarray)
    if xa or ya:
        if not (xa and ya) or x.shape != y.shape:
            return False
        return bool(np.all(np.abs(x - y) <= tol))
    return abs(x - y) <= tol


def signals_equal(lhs: SignalDesign, rhs: SignalDesign, tol: float = 0.0) -> bool:
    return _num_close(lhs.s0, rhs.s0, tol) and _num_close(lhs.s1, rhs.s1, tol)


def rules_equal(lhs: ReceiverRule, rhs: ReceiverRule, tol: float = 0.0) -> bool:
    if lhs.kind is not rhs.kind:
        return False
    return _num_close(lhs.a, rhs.a, tol) and _num_close(lhs.eta, rhs.eta, tol)


def check_power(signals: SignalDesign, power: PeakPower | AveragePower,
                transmitter: AgentParams) -> None:
    """Raise unless the pair satisfies the budget within 1e-12."""
    if isinstance(signals.s0, np.ndarray):
        e0 = float(signals.s0 @ signals.s0)
        e1 = float(signals.s1 @ signals.s1)
    else:
        e0 = signals.s0 * signals.s0
        e1 = signals.s1 * signals.s1
    if isinstance(power, PeakPower):
        if e0 > power.p0 + _POWER_TOL or e1 > power.p1 + _POWER_TOL:
            raise SpecError("signals: peak power budget exceeded")
        return
    avg = transmitter.prior0 * e0 + transmitter.prior1 * e1
    if avg > power.p_avg + _POWER_TOL:
        raise SpecError("signals: average power budget exceeded")


# ---------------------------------------------------------------------------
# detection primitives


def q_function(x: float) -> float:
    """Upper tail of the standard normal distribution."""
    return 0.5 * math.erfc(x / _SQRT2)


def conditional_error_probs(d: float, tau: float, zeta: int) -> tuple[float, float]:
    """(P10, P01) of the threshold rule matched to normalized distance d.

    P10 = Pr(decide H1 | H0 true), P01 = Pr(decide H0 | H1 true).  Requires
    d > 0 and a finite positive tau; coincident signals never reach this
    formula (they are handled by the prior-only rule).
    """
    if not d > 0.0:
        raise SpecError("d: normalized distance must be strictly positive")
    if not (tau > 0.0 and math.isfinite(tau)):
        raise SpecError("tau: must be finite and strictly positive")
    if zeta not in (-1, 1):
        raise SpecError("zeta: must be +1 or -1")
    log_tau = math.log(tau)
    p10 = q_function(zeta * (log_tau / d + d / 2.0))
    p01 = q_function(zeta * (-log_tau / d + d / 2.0))
    return p10, p01


def bayes_risk(agent: AgentParams, p10: float, p01: float) -> float:
    """Expected cost of an agent given the rule's error probabilities."""
    return (
        agent.prior0 * agent.c00
        + agent.prior1 * agent.c11
        + agent.prior0 * agent.false_alarm_margin * p10
        + agent.prior1 * agent.miss_margin * p01
    )


def prior_only_rule(tau: float, zeta: int) -> ReceiverRule:
    """Optimal rule when the observation is uninformative (coincident signals).

    Compares zeta against zeta * tau: the decision is fixed by the sign of
    zeta * (1 - tau), and tau = 1 leaves the receiver indifferent.
    """
    eta = zeta * (tau - 1.0)
    margin = zeta * (1.0 - tau)
    if margin > 0.0:
        return ReceiverRule.always_h1(eta)
    if margin < 0.0:
        return ReceiverRule.always_h0(eta)
    return ReceiverRule.indifferent(eta)


def optimal_receiver_rule(signals: SignalDesign, receiver: AgentParams,
                          noise: NoiseModel) -> ReceiverRule:
    """Best response of the receiver to a known signal pair."""
    case = receiver_case(receiver)
    if case is ReceiverCase.ALWAYS_H0:
        return ReceiverRule.always_h0()
    if case is ReceiverCase.ALWAYS_H1:
        return ReceiverRule.always_h1()
    if case is ReceiverCase.INDIFFERENT:
        return ReceiverRule.indifferent()
    tau = (receiver.prior0 * receiver.false_alarm_margin) / (
        receiver.prior1 * receiver.miss_margin
    )
    zeta = _sign(receiver.miss_margin)
    if signals.coincident:
        return prior_only_rule(tau, zeta)
    if noise.is_scalar:
        a = zeta * (signals.s1 - signals.s0)
        eta = zeta * (
            noise.sigma * noise.sigma * math.log(tau)
            + (signals.s1 * signals.s1 - signals.s0 * signals.s0) / 2.0
        )
        return ReceiverRule.threshold(a, eta)
    diff = signals.s1 - signals.s0
    w = np.linalg.solve(noise.covariance, diff)
    eta = zeta * (math.log(tau) + 0.5 * float(w @ (signals.s1 + signals.s0)))
    return ReceiverRule.threshold(zeta * w, eta)


def rule_error_probs(signals: SignalDesign, rule: ReceiverRule,
                     noise: NoiseModel) -> tuple[float, float]:
    """(P10, P01) of an arbitrary rule applied to a signal pair.

    Degenerate rules ignore the observation; INDIFFERENT is scored as
    ALWAYS_H0 (the canonical choice for risk accounting).
    """
    if rule.kind is RuleKind.ALWAYS_H1:
        return 1.0, 0.0
    if rule.kind is not RuleKind.THRESHOLD:
        return 0.0, 1.0
    if noise.is_scalar:
        if isinstance(signals.s0, np.ndarray):
            raise SpecError("signals: vector signals need a covariance noise model")
        spread = abs(rule.a) * noise.sigma
        m0 = rule.a * signals.s0
        m1 = rule.a * signals.s1
    else:
        a = np.asarray(rule.a, dtype=float)
        spread = math.sqrt(float(a @ noise.covariance @ a))
        m0 = float(a @ signals.s0)
        m1 = float(a @ signals.s1)
    p10 = q_function((rule.eta - m0) / spread)
    p01 = q_function(-(rule.eta - m1) / spread)
    return p10, p01


def risk_pair(transmitter: AgentParams, receiver: AgentParams,
              signals: SignalDesign, rule: ReceiverRule,
              noise: NoiseModel) -> tuple[float, float]:
    """(transmitter risk, receiver risk) of a signal pair under a rule."""
    p10, p01 = rule_error_probs(signals, rule, noise)
    return bayes_risk(transmitter, p10, p01), bayes_risk(receiver, p10, p01)
