"""Noise models as Kraus channels, applied exactly to density matrices or
stochastically to pure-state trajectories, plus fiber attenuation loss.

Channel constructors
--------------------
amplitude_damping(p)   E0 = diag(1, sqrt(1-p)),  E1 = [[0, sqrt(p)], [0, 0]]
dephasing(p)           E0 = sqrt(1-p) I,         E1 = sqrt(p) Z
bit_flip(p)            E0 = sqrt(1-p) I,         E1 = sqrt(p) X
bit_phase_flip(p)      E0 = sqrt(1-p) I,         E1 = sqrt(p) Y
collective_rotation(t) single operator R(t)

Probability weights are folded into the operators (sqrt(1-p), sqrt(p)) so
that every channel satisfies Kraus completeness sum(E^dag E) = I to 1e-12,
i.e. is a valid CPTP map.

Attenuation is modeled as photon erasure, not as a map on surviving
photons: a photon crossing a fiber segment of ``length`` km survives with
probability 10^(-alpha*length/10).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .qcore import (
    ALGEBRA_TOL,
    IDENTITY,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ComplexMat2,
    DensityMatrix,
    PureState,
    rotation,
)
from .streams import DrawStream

TWO_PI = 2.0 * math.pi


class InvalidChannelError(ValueError):
    """A Kraus operator set violating completeness."""


class NumericalDegeneracyError(RuntimeError):
    """All trajectory branch probabilities vanished."""


@dataclass(frozen=True)
class KrausChannel:
    """A labeled, ordered set of Kraus operators forming a CPTP map."""

    label: str
    ops: tuple[ComplexMat2, ...]

    def __post_init__(self) -> None:
        if not self.ops:
            raise InvalidChannelError(f"channel {self.label!r} has no operators")
        defect = self.completeness_defect()
        if defect > ALGEBRA_TOL:
            raise InvalidChannelError(
                f"channel {self.label!r} violates completeness by {defect:.3e}")

    def completeness_defect(self) -> float:
        """max-entry magnitude of sum(E^dag E) - I."""
        acc = ComplexMat2(0, 0, 0, 0)
        for op in self.ops:
            acc = acc + (op.dagger() @ op)
        return (acc - IDENTITY).max_abs()


def _check_probability(p: float, name: str) -> None:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"{name} out of [0,1]: {p!r}")


def amplitude_damping(p: float) -> KrausChannel:
    """Energy-loss channel driving |1> toward |0> with decoherence rate p."""
    _check_probability(p, "p")
    e0 = ComplexMat2(1.0, 0.0, 0.0, math.sqrt(1.0 - p))
    e1 = ComplexMat2(0.0, math.sqrt(p), 0.0, 0.0)
    return KrausChannel("amplitude_damping", (e0, e1))


def dephasing(p: float) -> KrausChannel:
    """Phase-randomizing channel: rho -> (1-p) rho + p Z rho Z."""
    _check_probability(p, "p")
    return KrausChannel("dephasing", (
        IDENTITY.scaled(math.sqrt(1.0 - p)),
        PAULI_Z.scaled(math.sqrt(p)),
    ))


def bit_flip(p: float) -> KrausChannel:
    """State-flipping channel: Pauli X applied with probability p."""
    _check_probability(p, "p")
    return KrausChannel("bit_flip", (
        IDENTITY.scaled(math.sqrt(1.0 - p)),
        PAULI_X.scaled(math.sqrt(p)),
    ))


def bit_phase_flip(p: float) -> KrausChannel:
    """Combined flip and phase channel: Pauli Y applied with probability p."""
    _check_probability(p, "p")
    return KrausChannel("bit_phase_flip", (
        IDENTITY.scaled(math.sqrt(1.0 - p)),
        PAULI_Y.scaled(math.sqrt(p)),
    ))


def collective_rotation(theta: float) -> KrausChannel:
    """Unitary rotation noise by a common angle; completeness is automatic."""
    return KrausChannel("collective_rotation", (rotation(theta).mat,))


def apply_channel(rho: DensityMatrix, channel: KrausChannel) -> DensityMatrix:
    """Exact channel action rho' = sum_i E_i rho E_i^dag."""
    acc = ComplexMat2(0, 0, 0, 0)
    for op in channel.ops:
        acc = acc + (op @ rho.mat @ op.dagger())
    return DensityMatrix(acc)


def sample_trajectory(state: PureState, channel: KrausChannel,
                      rng: DrawStream) -> PureState:
    """One stochastic unraveling step of the channel.

    Selects Kraus index i with probability |E_i psi|^2 and returns the
    renormalized branch state. Consumes exactly one uniform draw, so the
    empirical Z statistics over many trajectories reproduce
    :func:`apply_channel` exactly in expectation.
    """
    branches: list[tuple[complex, complex, float]] = []
    total = 0.0
    for op in channel.ops:
        a = op.a11 * state.alpha + op.a12 * state.beta
        b = op.a21 * state.alpha + op.a22 * state.beta
        w = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
        total += w
        branches.append((a, b, total))
    if total < 1e-15:
        raise NumericalDegeneracyError(
            f"all branch probabilities vanished for channel {channel.label!r}")
    threshold = rng.uniform() * total
    for a, b, cumulative in branches:
        if threshold < cumulative:
            w = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
            inv = 1.0 / math.sqrt(w)
            return PureState(a * inv, b * inv)
    a, b, _ = branches[-1]  # unreachable unless threshold == total by rounding
    w = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
    inv = 1.0 / math.sqrt(w)
    return PureState(a * inv, b * inv)


def attenuation_survival(alpha_db_per_km: float, length_km: float) -> float:
    """Survival probability 10^(-alpha*L/10) over a fiber of length L km."""
    if alpha_db_per_km < 0.0:
        raise ValueError(f"alpha must be non-negative, got {alpha_db_per_km!r}")
    if length_km < 0.0:
        raise ValueError(f"length must be non-negative, got {length_km!r}")
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


def photon_survives(alpha_db_per_km: float, length_km: float,
                    rng: DrawStream) -> bool:
    """True with the attenuation survival probability; one draw consumed."""
    return rng.uniform() < attenuation_survival(alpha_db_per_km, length_km)


@dataclass(frozen=True)
class LossyOutcome:
    """Either a surviving pure state or a lost photon."""

    state: PureState | None

    @property
    def lost(self) -> bool:
        return self.state is None


def attenuate(state: PureState, alpha_db_per_km: float, length_km: float,
              rng: DrawStream) -> LossyOutcome:
    """Pass a photon through a lossy fiber segment; loss is a value, not an error."""
    if photon_survives(alpha_db_per_km, length_km, rng):
        return LossyOutcome(state)
    return LossyOutcome(None)


@dataclass(frozen=True)
class CollectiveRotationSpec:
    """Angle policy for the collective-rotation noise model.

    modes:
      off               no collective rotation
      fixed             R(theta) for the whole run
      per_trial         one angle per trial, uniform in [0, theta_max]
      per_application   fresh angle per application, uniform in [0, theta_max]

    per_trial is the default elsewhere because the error-probability law
    sin^2(3 theta) assumes the same angle on all three passes.
    """

    mode: str = "off"
    theta: float = 0.0
    theta_max: float = TWO_PI

    MODES = ("off", "fixed", "per_trial", "per_application")

    def __post_init__(self) -> None:
        if self.mode not in self.MODES:
            raise ValueError(f"collective_rotation.mode must be one of {self.MODES}, "
                             f"got {self.mode!r}")
        if not math.isfinite(self.theta):
            raise ValueError("collective_rotation.theta must be finite")
        if not (0.0 <= self.theta_max <= TWO_PI):
            raise ValueError(f"collective_rotation.theta_max out of [0, 2pi]: "
                             f"{self.theta_max!r}")

    @staticmethod
    def off() -> "CollectiveRotationSpec":
        return CollectiveRotationSpec("off")

    @staticmethod
    def fixed(theta: float) -> "CollectiveRotationSpec":
        return CollectiveRotationSpec("fixed", theta=theta)

    @staticmethod
    def per_trial(theta_max: float = TWO_PI) -> "CollectiveRotationSpec":
        return CollectiveRotationSpec("per_trial", theta_max=theta_max)

    @staticmethod
    def per_application(theta_max: float = TWO_PI) -> "CollectiveRotationSpec":
        return CollectiveRotationSpec("per_application", theta_max=theta_max)


@dataclass(frozen=True)
class NoiseConfig:
    """Which noise models act, how strongly, and where along the route.

    Placement flags (any combination; each adds noise-stack events):
      apply_on_links          one event per link traversal, every pass
      apply_at_nodes          one event per intermediate-node visit, every pass
      apply_once_per_photon   one event per photon journey, at the start of
                              the first pass (topology-independent)

    ``alpha_db_per_km`` switches on attenuation loss over every link.
    """

    p_ad: float = 0.0
    p_dephase: float = 0.0
    p_bitflip: float = 0.0
    p_bitphase: float = 0.0
    cr: CollectiveRotationSpec = field(default_factory=CollectiveRotationSpec.off)
    alpha_db_per_km: float = 0.0
    apply_on_links: bool = True
    apply_at_nodes: bool = True
    apply_once_per_photon: bool = False

    def __post_init__(self) -> None:
        for name in ("p_ad", "p_dephase", "p_bitflip", "p_bitphase"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} out of [0,1]: {value!r}")
        if self.alpha_db_per_km < 0.0:
            raise ValueError(f"alpha_db_per_km must be non-negative: "
                             f"{self.alpha_db_per_km!r}")


# Fixed application order of the models within one noise event.
STACK_ORDER = ("collective_rotation", "amplitude_damping", "dephasing",
               "bit_flip", "bit_phase_flip")


def noise_stack(cfg: NoiseConfig, cr_angle: float | None) -> list[KrausChannel]:
    """The channels of one noise event, in STACK_ORDER.

    Models with p = 0 (or collective rotation switched off) are omitted.
    ``cr_angle`` is the concrete rotation angle for this event; pass None
    when the collective-rotation model is off.
    """
    stack: list[KrausChannel] = []
    if cfg.cr.mode != "off":
        if cr_angle is None:
            raise ValueError("cr_angle required when collective rotation is active")
        stack.append(collective_rotation(cr_angle))
    if cfg.p_ad > 0.0:
        stack.append(amplitude_damping(cfg.p_ad))
    if cfg.p_dephase > 0.0:
        stack.append(dephasing(cfg.p_dephase))
    if cfg.p_bitflip > 0.0:
        stack.append(bit_flip(cfg.p_bitflip))
    if cfg.p_bitphase > 0.0:
        stack.append(bit_phase_flip(cfg.p_bitphase))
    return stack
