"""Closed-form oracles used to validate the Monte Carlo engine.

Three families:

* commutators of the amplitude-damping Kraus operators with the protocol
  rotation, which vanish only in the trivial cases p = 0 or sin(theta) = 0;
* the collective-rotation error law sin^2(3 theta) for a photon that picks
  up the same rotation on each of its three passes;
* the exact density-matrix evolution of one three-stage transmission with
  arbitrary per-stage channel lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channels import KrausChannel, amplitude_damping, apply_channel
from .qcore import (
    ALGEBRA_TOL,
    ComplexMat2,
    DensityMatrix,
    PureState,
    apply_unitary,
    commutator,
    density_from_pure,
    rotation,
)


@dataclass(frozen=True)
class CommutatorReport:
    """A commutator matrix together with its vanishing verdict at 1e-12."""

    matrix: ComplexMat2
    max_abs_entry: float
    is_zero_at_tolerance: bool

    @staticmethod
    def from_matrix(matrix: ComplexMat2) -> "CommutatorReport":
        worst = matrix.max_abs()
        return CommutatorReport(matrix, worst, worst < ALGEBRA_TOL)


def ad_commutator_e0(p: float, theta: float) -> CommutatorReport:
    """[E0(p), R(theta)] for the no-jump amplitude-damping operator.

    Direct multiplication gives off-diagonal entries of magnitude
    (1 - sqrt(1-p)) |sin theta| and zero diagonal, so the commutator
    vanishes iff p = 0 or sin(theta) = 0.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p out of [0,1]: {p!r}")
    e0 = amplitude_damping(p).ops[0]
    return CommutatorReport.from_matrix(commutator(e0, rotation(theta).mat))


def ad_commutator_e1(p: float, theta: float) -> CommutatorReport:
    """[E1(p), R(theta)] for the jump operator: sqrt(p) sin(theta) diag(1, -1).

    Vanishes iff p = 0 or sin(theta) = 0, the same triviality condition as
    the no-jump operator.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p out of [0,1]: {p!r}")
    e1 = amplitude_damping(p).ops[1]
    return CommutatorReport.from_matrix(commutator(e1, rotation(theta).mat))


def cr_error_probability(theta: float) -> float:
    """Error probability when all three passes pick up the same rotation.

    Computed by actually composing the three rotation matrices onto |0>,
    which yields (cos 3t, sin 3t) and hence an error probability of
    sin^2(3 theta). See :func:`cr_error_sign_variant` for the algebraic
    variant this replaces.
    """
    r = rotation(theta)
    state = PureState.zero()
    for _ in range(3):
        state = apply_unitary(state, r)
    return state.prob_one


def cr_error_sign_variant(theta: float) -> float:
    """Square of sin(t) (sin^2 t + 3 cos^2 t), kept for comparison only.

    This is the sign-flipped cousin of the triple-angle identity
    sin(3t) = sin(t) (3 cos^2 t - sin^2 t). It exceeds 1 for some angles
    (1.5625 at theta = pi/6), so it cannot be a probability and is not used
    anywhere in the simulator; :func:`cr_error_probability` is the law the
    engine is validated against.
    """
    s, c = math.sin(theta), math.cos(theta)
    return (s * (s * s + 3.0 * c * c)) ** 2


def three_stage_exact(bit: int, theta_a: float, theta_b: float,
                      per_stage_channels: Sequence[Sequence[KrausChannel]],
                      ) -> DensityMatrix:
    """Exact density matrix after one noisy three-stage transmission.

    Composes, in order: R(theta_a), stage-1 channels, R(theta_b), stage-2
    channels, R(-theta_a), stage-3 channels, R(-theta_b). Each channel list
    is applied sequentially as an exact density-matrix map. With all three
    lists empty the commuting rotations cancel and the input projector is
    returned unchanged.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    if len(per_stage_channels) != 3:
        raise ValueError("per_stage_channels must hold exactly 3 channel lists")
    rho = density_from_pure(PureState.one() if bit else PureState.zero())
    unitaries = (rotation(theta_a), rotation(theta_b),
                 rotation(-theta_a), rotation(-theta_b))
    for stage in range(3):
        u = unitaries[stage].mat
        rho = DensityMatrix(u @ rho.mat @ u.dagger())
        for channel in per_stage_channels[stage]:
            rho = apply_channel(rho, channel)
    u = unitaries[3].mat
    return DensityMatrix(u @ rho.mat @ u.dagger())
