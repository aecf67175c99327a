"""The oracle-equivalence suite behind the ``validate`` command.

Four independent cross-checks of the Monte Carlo engine against closed
forms: Kraus completeness on a probability grid, trajectory sampling
against exact channel action, BFS hop counts against closed-form path
lengths, and noiseless protocol exactness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..channels import (
    NoiseConfig,
    amplitude_damping,
    apply_channel,
    bit_flip,
    bit_phase_flip,
    collective_rotation,
    dephasing,
    sample_trajectory,
)
from ..network import TopologySpec, bfs_shortest_path, build_topology, route
from ..protocol import StageAngles, three_stage_photon
from ..qcore import ALGEBRA_TOL, PureState, density_from_pure, measure_z, prob_one
from ..streams import DrawStream, generator


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_completeness() -> CheckResult:
    worst = 0.0
    grid = [i / 10.0 for i in range(11)]
    for p in grid:
        for factory in (amplitude_damping, dephasing, bit_flip, bit_phase_flip):
            worst = max(worst, factory(p).completeness_defect())
    for theta in [i * math.pi / 7.0 for i in range(15)]:
        worst = max(worst, collective_rotation(theta).completeness_defect())
    return CheckResult(
        "kraus_completeness",
        worst <= ALGEBRA_TOL,
        f"max defect {worst:.3e} over p grid and rotation angles (tol 1e-12)",
    )


def _check_trajectory_agreement(samples: int, seed: int) -> CheckResult:
    channels = [
        amplitude_damping(0.3),
        dephasing(0.2),
        bit_flip(0.3),
        bit_phase_flip(0.15),
        collective_rotation(0.7),
    ]
    states = [PureState.zero(), PureState.one(), PureState.plus()]
    worst_z = 0.0
    worst_case = ""
    for ci, channel in enumerate(channels):
        for si, state in enumerate(states):
            exact = prob_one(apply_channel(density_from_pure(state), channel))
            stream = DrawStream(gen=generator(seed, 90, ci, si))
            ones = 0
            for _ in range(samples):
                ones += measure_z(sample_trajectory(state, channel, stream), stream)
            observed = ones / samples
            sigma = math.sqrt(max(exact * (1.0 - exact), 0.0) / samples)
            if sigma == 0.0:
                if observed != exact:
                    return CheckResult(
                        "trajectory_exact_agreement", False,
                        f"{channel.label} on state {si}: observed {observed} "
                        f"but exact law is deterministic at {exact}")
                continue
            z = abs(observed - exact) / sigma
            if z > worst_z:
                worst_z = z
                worst_case = f"{channel.label}/state{si}"
    return CheckResult(
        "trajectory_exact_agreement",
        worst_z <= 3.0,
        f"worst |z| = {worst_z:.2f} ({worst_case}) over "
        f"{len(channels) * len(states)} channel-state pairs, {samples} samples",
    )


def _check_bfs_closed_form() -> CheckResult:
    failures: list[str] = []

    for rows, cols in ((4, 4), (5, 7)):
        spec = TopologySpec.torus(rows, cols, 1.0)
        graph = build_topology(spec)
        for r in range(rows):
            for c in range(cols):
                want = min(r, rows - r) + min(c, cols - c)
                got = bfs_shortest_path(graph, (0, 0), (r, c)).hops
                if got != want:
                    failures.append(f"torus({rows}x{cols}) (0,0)->({r},{c}): "
                                    f"{got} != {want}")

    grid = build_topology(TopologySpec.grid(4, 4, 1.0))
    torus = build_topology(TopologySpec.torus(4, 4, 1.0))
    for r in range(4):
        for c in range(4):
            manhattan = bfs_shortest_path(grid, (0, 0), (r, c)).hops
            if manhattan != r + c:
                failures.append(f"grid(4x4) (0,0)->({r},{c}): {manhattan} != {r + c}")
            wrapped = bfs_shortest_path(torus, (0, 0), (r, c)).hops
            if wrapped > manhattan:
                failures.append(f"torus hops exceed grid hops at ({r},{c})")

    for n in range(4, 13):
        ring = build_topology(TopologySpec.ring(n, 1.0))
        for k in range(n):
            want = min(k, n - k)
            got = bfs_shortest_path(ring, 0, k).hops
            if got != want:
                failures.append(f"ring({n}) 0->{k}: {got} != {want}")

    return CheckResult(
        "bfs_closed_form",
        not failures,
        failures[0] if failures else
        "torus/grid/ring hop counts match closed forms exhaustively",
    )


def _check_noiseless_protocol(seed: int) -> CheckResult:
    rng = generator(seed, 91)
    specs = [TopologySpec.direct(20.0), TopologySpec.ring(8, 20.0),
             TopologySpec.grid(4, 4, 20.0), TopologySpec.torus(4, 4, 20.0)]
    quiet = NoiseConfig()
    for i in range(200):
        spec = specs[i % len(specs)]
        path = route(spec)
        bit = int(rng.integers(0, 2))
        angles = StageAngles(float(rng.uniform(0, 2 * math.pi)),
                             float(rng.uniform(0, 2 * math.pi)))
        stream = DrawStream(gen=generator(seed, 92, i))
        out = three_stage_photon(bit, angles, path, quiet, None, stream)
        if out.lost or out.bit != bit:
            return CheckResult(
                "noiseless_protocol_exactness", False,
                f"case {i} on {spec.label}: sent {bit}, got {out}")
    return CheckResult(
        "noiseless_protocol_exactness", True,
        "200 random (bit, angles, topology) photons all decoded exactly",
    )


def validation_suite(trajectory_samples: int = 20000,
                     seed: int = 20240) -> list[CheckResult]:
    """Run all oracle cross-checks; every result should come back passed."""
    return [
        _check_completeness(),
        _check_trajectory_agreement(trajectory_samples, seed),
        _check_bfs_closed_form(),
        _check_noiseless_protocol(seed),
    ]
