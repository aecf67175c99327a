"""Exact single-qubit engine: 2x2 complex matrices, pure states, density
matrices, planar rotations, and Z-basis measurement.

All values are immutable after construction and all operations are pure,
with the single exception of :func:`measure_z`, which consumes one uniform
draw from a caller-owned random stream. Global phase is ignored throughout:
states are compared via probabilities or density matrices, never amplitudes.

Tolerances: state invariants (norm, trace, hermiticity, unitarity) are
enforced to ``INVARIANT_TOL`` = 1e-10; algebraic identities (commutators,
Kraus completeness) are asserted to ``ALGEBRA_TOL`` = 1e-12. A 2x2 product
chain loses at most a few ulps, so these bounds catch real defects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .streams import DrawStream

INVARIANT_TOL = 1e-10
ALGEBRA_TOL = 1e-12


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class ComplexMat2:
    """A 2x2 complex matrix, row-major (a11 a12 / a21 a22).

    The common currency for unitaries, Kraus operators and density matrices.
    Entries must be finite; equality checks go through :meth:`approx_eq`
    with an explicit absolute tolerance.
    """

    a11: complex
    a12: complex
    a21: complex
    a22: complex

    def __post_init__(self) -> None:
        for z in (self.a11, self.a12, self.a21, self.a22):
            if not _finite(complex(z)):
                raise ValueError("matrix entries must be finite")

    def __matmul__(self, other: "ComplexMat2") -> "ComplexMat2":
        return ComplexMat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __add__(self, other: "ComplexMat2") -> "ComplexMat2":
        return ComplexMat2(self.a11 + other.a11, self.a12 + other.a12,
                           self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other: "ComplexMat2") -> "ComplexMat2":
        return ComplexMat2(self.a11 - other.a11, self.a12 - other.a12,
                           self.a21 - other.a21, self.a22 - other.a22)

    def scaled(self, factor: complex) -> "ComplexMat2":
        return ComplexMat2(factor * self.a11, factor * self.a12,
                           factor * self.a21, factor * self.a22)

    def dagger(self) -> "ComplexMat2":
        """Conjugate transpose."""
        return ComplexMat2(
            self.a11.conjugate(), self.a21.conjugate(),
            self.a12.conjugate(), self.a22.conjugate(),
        )

    def trace(self) -> complex:
        return self.a11 + self.a22

    def max_abs(self) -> float:
        """Largest entry magnitude; the norm used by tolerance checks."""
        return max(abs(self.a11), abs(self.a12), abs(self.a21), abs(self.a22))

    def approx_eq(self, other: "ComplexMat2", tol: float) -> bool:
        return (self - other).max_abs() <= tol

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.a11, self.a12, self.a21, self.a22)


IDENTITY = ComplexMat2(1, 0, 0, 1)
ZERO = ComplexMat2(0, 0, 0, 0)
PAULI_X = ComplexMat2(0, 1, 1, 0)
PAULI_Y = ComplexMat2(0, -1j, 1j, 0)
PAULI_Z = ComplexMat2(1, 0, 0, -1)


@dataclass(frozen=True)
class PureState:
    """Single-qubit pure state alpha|0> + beta|1>, normalized to 1e-10."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        if not (_finite(complex(self.alpha)) and _finite(complex(self.beta))):
            raise ValueError("amplitudes must be finite")
        if abs(self.norm_squared() - 1.0) > INVARIANT_TOL:
            raise ValueError(
                f"state not normalized: |alpha|^2+|beta|^2 = {self.norm_squared()!r}")

    def norm_squared(self) -> float:
        a, b = self.alpha, self.beta
        return a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag

    @property
    def prob_one(self) -> float:
        b = self.beta
        p = b.real * b.real + b.imag * b.imag
        return min(max(p, 0.0), 1.0)

    @staticmethod
    def zero() -> "PureState":
        return PureState(1.0, 0.0)

    @staticmethod
    def one() -> "PureState":
        return PureState(0.0, 1.0)

    @staticmethod
    def plus() -> "PureState":
        r = 1.0 / math.sqrt(2.0)
        return PureState(r, r)

    @staticmethod
    def normalized(alpha: complex, beta: complex) -> "PureState":
        """Build a state from unnormalized amplitudes (used after jumps)."""
        n = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if n < 1e-15:
            raise ValueError("cannot normalize a zero vector")
        return PureState(alpha / n, beta / n)


@dataclass(frozen=True)
class Unitary:
    """2x2 unitary; U.U^dag = I is enforced to 1e-10 at construction."""

    mat: ComplexMat2

    def __post_init__(self) -> None:
        if not (self.mat @ self.mat.dagger()).approx_eq(IDENTITY, INVARIANT_TOL):
            raise ValueError("matrix is not unitary within tolerance")

    def dagger(self) -> "Unitary":
        return Unitary(self.mat.dagger())


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 density matrix: Hermitian, unit trace, positive semidefinite.

    All three invariants are checked at construction (tolerance 1e-10 on
    hermiticity/trace, eigenvalues allowed down to -1e-10).
    """

    mat: ComplexMat2

    def __post_init__(self) -> None:
        m = self.mat
        if abs(m.a12 - m.a21.conjugate()) > INVARIANT_TOL \
                or abs(m.a11.imag) > INVARIANT_TOL or abs(m.a22.imag) > INVARIANT_TOL:
            raise ValueError("density matrix not Hermitian within tolerance")
        if abs(m.trace() - 1.0) > INVARIANT_TOL:
            raise ValueError(f"density matrix trace {m.trace()!r} != 1")
        if min(self.eigenvalues()) < -INVARIANT_TOL:
            raise ValueError("density matrix not positive semidefinite")

    def eigenvalues(self) -> tuple[float, float]:
        """Closed-form eigenvalues of the 2x2 Hermitian matrix, ascending."""
        a = self.mat.a11.real
        d = self.mat.a22.real
        mean = 0.5 * (a + d)
        radius = math.sqrt(max(0.25 * (a - d) ** 2 + abs(self.mat.a12) ** 2, 0.0))
        return (mean - radius, mean + radius)

    def purity(self) -> float:
        """tr(rho^2); exactly 1 for pure states."""
        return (self.mat @ self.mat).trace().real

    @property
    def prob_one(self) -> float:
        return min(max(self.mat.a22.real, 0.0), 1.0)


def rotation(theta: float) -> Unitary:
    """Planar rotation by ``theta``: [[cos, -sin], [sin, cos]].

    The protocol's encoding unitary. All rotations about this axis commute,
    which is what lets each party strip its own transformation.
    """
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return Unitary(ComplexMat2(c, -s, s, c))


def commutator(a: ComplexMat2, b: ComplexMat2) -> ComplexMat2:
    """a.b - b.a"""
    return (a @ b) - (b @ a)


def apply_unitary(state: PureState, u: Unitary) -> PureState:
    """u |state>; preserves the norm to 1e-10."""
    m = u.mat
    return PureState(
        m.a11 * state.alpha + m.a12 * state.beta,
        m.a21 * state.alpha + m.a22 * state.beta,
    )


def density_from_pure(state: PureState) -> DensityMatrix:
    """|psi><psi| as a density matrix."""
    a, b = state.alpha, state.beta
    return DensityMatrix(ComplexMat2(
        (a * a.conjugate()).real,
        a * b.conjugate(),
        b * a.conjugate(),
        (b * b.conjugate()).real,
    ))


def prob_one(state: PureState | DensityMatrix) -> float:
    """Probability of reading 1 in a Z-basis measurement."""
    return state.prob_one


def measure_z(state: PureState, rng: DrawStream) -> int:
    """Projective Z-basis measurement; consumes exactly one uniform draw."""
    return 1 if rng.uniform() < state.prob_one else 0
