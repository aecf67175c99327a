"""The three-stage protocol executed photon by photon along a network path,
multi-photon burst encoding, and majority-rule decoding.

One photon's journey (Z-basis encoding, bit 0 -> |0>, bit 1 -> |1>):

    R(theta_a)  -> pass 1, Alice to Bob
    R(theta_b)  -> pass 2, Bob to Alice
    R(-theta_a) -> pass 3, Alice to Bob
    R(-theta_b) -> Z measurement at Bob

Noise-stack events fire during each pass according to the placement flags
in :class:`~threestage.channels.NoiseConfig`; attenuation can erase the
photon on any link traversal. Loss is a value (``PhotonOutcome`` with no
bit), never an error.

Draw order per photon (fixed, the determinism contract): when angles are
drawn rather than given, two uniforms for (theta_a, theta_b) come first;
then, per pass: the once-per-photon event (first pass only, if enabled),
and per link in traversal order an attenuation draw (when attenuation is
active for that pass), the link noise event, and the node noise event on
arriving at an intermediate node. Each channel of an event costs one draw
(two for per-application collective rotation: angle, then branch). The
final Z measurement consumes the last draw.

A burst of m photons is evaluated as one vectorized sweep over a
``(m, draws_per_photon)`` uniform block; photon k consumes row k exactly
as the scalar :func:`three_stage_photon` would, so both paths produce
identical outcomes from identical streams.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .channels import (
    CollectiveRotationSpec,
    KrausChannel,
    NoiseConfig,
    attenuation_survival,
    collective_rotation,
    noise_stack,
    sample_trajectory,
)
from .network import Path
from .qcore import PureState, apply_unitary, measure_z, rotation
from .streams import DrawStream

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class StageAngles:
    """Alice's and Bob's secret rotation angles for one photon."""

    theta_a: float
    theta_b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta_a) and math.isfinite(self.theta_b)):
            raise ValueError("stage angles must be finite")


@dataclass(frozen=True)
class PhotonOutcome:
    """Received(bit) or Lost; ``bit`` is None when the photon was erased."""

    bit: int | None

    def __post_init__(self) -> None:
        if self.bit not in (0, 1, None):
            raise ValueError(f"outcome bit must be 0, 1 or None, got {self.bit!r}")

    @property
    def lost(self) -> bool:
        return self.bit is None


LOST = PhotonOutcome(None)


class DecodeFailure(enum.Enum):
    TIE = "tie"
    ERASURE = "erasure"


@dataclass(frozen=True)
class TransmissionRecord:
    """One burst: the sent bit, per-photon outcomes, and the decoded result."""

    sent: int
    outcomes: tuple[PhotonOutcome, ...]
    decoded: "int | DecodeFailure"
    success_fraction: float

    @property
    def received_count(self) -> int:
        return sum(1 for o in self.outcomes if not o.lost)

    @property
    def decode_status(self) -> str:
        return "ok" if isinstance(self.decoded, int) else self.decoded.value


def encode_bit(bit: int) -> PureState:
    """Z-basis preparation: 0 -> |0>, 1 -> |1>."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    return PureState.one() if bit else PureState.zero()


def majority_decode(outcomes: Sequence[PhotonOutcome]) -> "int | DecodeFailure":
    """Strict majority over received outcomes.

    Equal counts decode to DecodeFailure.TIE; a burst with no received
    photons decodes to DecodeFailure.ERASURE. Both count as incorrect in
    the statistics, keeping loss visible instead of silently resolved.
    """
    ones = sum(1 for o in outcomes if o.bit == 1)
    zeros = sum(1 for o in outcomes if o.bit == 0)
    if ones == 0 and zeros == 0:
        return DecodeFailure.ERASURE
    if ones == zeros:
        return DecodeFailure.TIE
    return 1 if ones > zeros else 0


# ---------------------------------------------------------------------------
# Flight plans: the per-photon event sequence compiled from (path, config).
# Step encodings:
#   ("rot", i)                    i indexes (R(a), R(b), R(-a), R(-b)); no draw
#   ("atten", survival)           one draw; photon lost when draw >= survival
#   ("chan", KrausChannel)        one draw; stochastic Kraus branch
#   ("cr_draw", theta_max)        two draws; fresh rotation angle, then branch
# The final Z measurement is not a step; it always consumes one more draw.
# ---------------------------------------------------------------------------

Step = tuple


@dataclass(frozen=True)
class FlightPlan:
    steps: tuple[Step, ...]
    draw_count: int  # includes the measurement draw, excludes angle draws


def _event_steps(cfg: NoiseConfig, cr_angle: float | None) -> list[Step]:
    if cfg.cr.mode == "per_application":
        steps: list[Step] = [("cr_draw", cfg.cr.theta_max)]
        no_cr = replace(cfg, cr=CollectiveRotationSpec.off())
        steps.extend(("chan", ch) for ch in noise_stack(no_cr, None))
        return steps
    return [("chan", ch) for ch in noise_stack(cfg, cr_angle)]


def compile_flight_plan(path: Path, cfg: NoiseConfig, cr_angle: float | None,
                        single_pass_attenuation: bool = False) -> FlightPlan:
    """Expand (path, noise config) into the ordered per-photon step list.

    ``cr_angle`` is the concrete collective-rotation angle for fixed and
    per-trial modes; it is ignored for off/per-application modes. With
    ``single_pass_attenuation`` the link distance is counted once (first
    pass only) instead of on all three traversals.
    """
    if cfg.cr.mode in ("fixed", "per_trial") and cr_angle is None:
        raise ValueError(f"cr_angle required for collective rotation mode "
                         f"{cfg.cr.mode!r}")
    event = _event_steps(cfg, cr_angle)

    hops = path.hops
    link_km = path.effective_km / hops if hops else 0.0
    survival = attenuation_survival(cfg.alpha_db_per_km, link_km)
    forward = list(path.nodes)
    interior = set(path.nodes[1:-1])

    steps: list[Step] = []
    for pass_idx, nodes in enumerate((forward, forward[::-1], forward)):
        steps.append(("rot", pass_idx))
        if pass_idx == 0 and cfg.apply_once_per_photon:
            steps.extend(event)
        attenuating = cfg.alpha_db_per_km > 0.0 and (
            pass_idx == 0 or not single_pass_attenuation)
        for arrival in nodes[1:]:
            if attenuating:
                steps.append(("atten", survival))
            if cfg.apply_on_links:
                steps.extend(event)
            if cfg.apply_at_nodes and arrival in interior:
                steps.extend(event)
    steps.append(("rot", 3))

    draw_cost = {"rot": 0, "atten": 1, "chan": 1, "cr_draw": 2}
    draws = 1 + sum(draw_cost[s[0]] for s in steps)
    return FlightPlan(tuple(steps), draws)


def _execute_scalar(plan: FlightPlan, bit: int, angles: StageAngles,
                    rng: DrawStream) -> PhotonOutcome:
    rotations = (rotation(angles.theta_a), rotation(angles.theta_b),
                 rotation(-angles.theta_a), rotation(-angles.theta_b))
    state = encode_bit(bit)
    for step in plan.steps:
        kind = step[0]
        if kind == "rot":
            state = apply_unitary(state, rotations[step[1]])
        elif kind == "chan":
            state = sample_trajectory(state, step[1], rng)
        elif kind == "atten":
            if not (rng.uniform() < step[1]):
                return LOST
        else:  # cr_draw
            theta = step[1] * rng.uniform()
            state = sample_trajectory(state, collective_rotation(theta), rng)
    return PhotonOutcome(measure_z(state, rng))


def three_stage_photon(bit: int, angles: StageAngles, path: Path,
                       cfg: NoiseConfig, cr_angle: float | None,
                       rng: DrawStream,
                       single_pass_attenuation: bool = False) -> PhotonOutcome:
    """Send one photon through the full three-stage journey.

    Returns Lost as soon as any attenuation draw fails; otherwise the
    photon reaches Bob and the outcome carries his measured bit. Draws are
    consumed in the module-level documented order, which makes seeded runs
    bit-reproducible.
    """
    plan = compile_flight_plan(path, cfg, cr_angle, single_pass_attenuation)
    return _execute_scalar(plan, bit, angles, rng)


def three_stage_trajectory(bit: int, theta_a: float, theta_b: float,
                           stage_channels: Sequence[Sequence[KrausChannel]],
                           rng: DrawStream) -> int:
    """One stochastic transmission with explicit per-stage channel lists.

    The trajectory mirror of :func:`threestage.theory.three_stage_exact`:
    same composition order, but each channel is sampled instead of applied
    exactly. No attenuation; always returns Bob's measured bit.
    """
    if len(stage_channels) != 3:
        raise ValueError("stage_channels must hold exactly 3 channel lists")
    rotations = (rotation(theta_a), rotation(theta_b), rotation(-theta_a))
    state = encode_bit(bit)
    for stage in range(3):
        state = apply_unitary(state, rotations[stage])
        for channel in stage_channels[stage]:
            state = sample_trajectory(state, channel, rng)
    state = apply_unitary(state, rotation(-theta_b))
    return measure_z(state, rng)


# ---------------------------------------------------------------------------
# Vectorized burst execution.
# ---------------------------------------------------------------------------

def burst_draw_count(path: Path, cfg: NoiseConfig,
                     single_pass_attenuation: bool = False,
                     angles_drawn: bool = True) -> int:
    """Uniform draws one photon consumes, including angle draws when drawn."""
    dummy_cr = 0.0 if cfg.cr.mode in ("fixed", "per_trial") else None
    plan = compile_flight_plan(path, cfg, dummy_cr, single_pass_attenuation)
    return plan.draw_count + (2 if angles_drawn else 0)


def _renormalized(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
    inv = 1.0 / np.sqrt(w)
    return a * inv, b * inv


def _apply_channel_vectorized(channel: KrausChannel, alpha: np.ndarray,
                              beta: np.ndarray, u: np.ndarray,
                              ) -> tuple[np.ndarray, np.ndarray]:
    ops = channel.ops
    if len(ops) == 1:
        # mirror sample_trajectory exactly, including its renormalization
        op = ops[0]
        return _renormalized(op.a11 * alpha + op.a12 * beta,
                             op.a21 * alpha + op.a22 * beta)
    branches = []
    total = np.zeros(len(alpha))
    for op in ops:
        a = op.a11 * alpha + op.a12 * beta
        b = op.a21 * alpha + op.a22 * beta
        w = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
        total = total + w
        branches.append((a, b, total.copy()))
    threshold = u * total
    new_a = np.empty_like(alpha)
    new_b = np.empty_like(beta)
    remaining = np.ones(len(alpha), dtype=bool)
    for a, b, cumulative in branches:
        take = remaining & (threshold < cumulative)
        new_a[take] = a[take]
        new_b[take] = b[take]
        remaining &= ~take
    if remaining.any():  # only reachable through rounding at the last edge
        a, b, _ = branches[-1]
        new_a[remaining] = a[remaining]
        new_b[remaining] = b[remaining]
    return _renormalized(new_a, new_b)


def _execute_vectorized(plan: FlightPlan, bit: int, m: int, draws: np.ndarray,
                        angles: StageAngles | None,
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Run the plan for all m photons at once; returns (alive, measured)."""
    col = 0
    if angles is None:
        theta_a = TWO_PI * draws[:, 0]
        theta_b = TWO_PI * draws[:, 1]
        col = 2
        ca, sa = np.cos(theta_a), np.sin(theta_a)
        cb, sb = np.cos(theta_b), np.sin(theta_b)
    else:
        ca, sa = math.cos(angles.theta_a), math.sin(angles.theta_a)
        cb, sb = math.cos(angles.theta_b), math.sin(angles.theta_b)
    rot_cs = ((ca, sa), (cb, sb), (ca, -sa), (cb, -sb))

    alpha = np.full(m, 0.0 if bit else 1.0, dtype=np.complex128)
    beta = np.full(m, 1.0 if bit else 0.0, dtype=np.complex128)
    alive = np.ones(m, dtype=bool)

    for step in plan.steps:
        kind = step[0]
        if kind == "rot":
            c, s = rot_cs[step[1]]
            alpha, beta = c * alpha - s * beta, s * alpha + c * beta
        elif kind == "chan":
            u = draws[:, col]
            col += 1
            alpha, beta = _apply_channel_vectorized(step[1], alpha, beta, u)
        elif kind == "atten":
            u = draws[:, col]
            col += 1
            alive &= u < step[1]
        else:  # cr_draw
            theta = step[1] * draws[:, col]
            col += 2  # angle draw plus the branch draw of the 1-op channel
            c, s = np.cos(theta), np.sin(theta)
            alpha, beta = _renormalized(c * alpha - s * beta,
                                        s * alpha + c * beta)

    u = draws[:, col]
    p_one = beta.real * beta.real + beta.imag * beta.imag
    measured = (u < p_one).astype(np.int64)
    return alive, measured


def transmit_burst(bit: int, m: int, path: Path, cfg: NoiseConfig,
                   cr_angle: float | None, rng: np.random.Generator,
                   angles: StageAngles | None = None,
                   single_pass_attenuation: bool = False) -> TransmissionRecord:
    """Send m photons encoding ``bit`` and majority-decode the outcomes.

    ``rng`` supplies the burst's uniform block in one call; photon k owns
    row k, so the record is independent of any photon evaluation order.
    With ``angles=None`` (the default policy) each photon draws fresh
    (theta_a, theta_b) uniform in [0, 2pi) from its own row; a concrete
    :class:`StageAngles` pins the angles for the whole burst.
    """
    if m < 1:
        raise ValueError(f"burst size must be >= 1, got {m}")
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    plan = compile_flight_plan(path, cfg, cr_angle, single_pass_attenuation)
    width = plan.draw_count + (2 if angles is None else 0)
    draws = rng.random((m, width))
    alive, measured = _execute_vectorized(plan, bit, m, draws, angles)

    outcomes = tuple(
        PhotonOutcome(int(measured[k])) if alive[k] else LOST for k in range(m))
    correct = int(np.count_nonzero(alive & (measured == bit)))
    return TransmissionRecord(
        sent=bit,
        outcomes=outcomes,
        decoded=majority_decode(outcomes),
        success_fraction=correct / m,
    )
