"""Unit tests for the three-stage photon engine and burst handling."""

import math

import numpy as np
import pytest

from threestage.channels import (
    CollectiveRotationSpec,
    NoiseConfig,
    attenuation_survival,
    bit_flip,
    noise_stack,
)
from threestage.network import TopologySpec, route
from threestage.protocol import (
    LOST,
    DecodeFailure,
    PhotonOutcome,
    StageAngles,
    burst_draw_count,
    compile_flight_plan,
    encode_bit,
    majority_decode,
    three_stage_photon,
    three_stage_trajectory,
    transmit_burst,
)
from threestage.qcore import prob_one
from threestage.streams import DrawStream, generator
from threestage.theory import three_stage_exact

QUIET = NoiseConfig()
DIRECT = TopologySpec.direct(20.0)


class TestEncodeAndDecode:
    def test_encode_zero(self):
        state = encode_bit(0)
        assert (state.alpha, state.beta) == (1.0, 0.0)

    def test_encode_one(self):
        state = encode_bit(1)
        assert (state.alpha, state.beta) == (0.0, 1.0)

    def test_encode_prob_one_matches_bit(self):
        for bit in (0, 1):
            assert prob_one(encode_bit(bit)) == bit

    def test_encode_rejects_other_values(self):
        with pytest.raises(ValueError):
            encode_bit(2)

    def test_majority_simple(self):
        outcomes = [PhotonOutcome(1), PhotonOutcome(1), PhotonOutcome(0)]
        assert majority_decode(outcomes) == 1

    def test_majority_tie(self):
        outcomes = [PhotonOutcome(1), PhotonOutcome(0)]
        assert majority_decode(outcomes) is DecodeFailure.TIE

    def test_majority_all_lost(self):
        assert majority_decode([LOST, LOST]) is DecodeFailure.ERASURE

    def test_majority_ignores_lost(self):
        outcomes = [LOST, PhotonOutcome(0), LOST, PhotonOutcome(0), PhotonOutcome(1)]
        assert majority_decode(outcomes) == 0


class TestNoiselessProtocol:
    def test_always_recovers_bit(self):
        rng = np.random.default_rng(41)
        specs = [DIRECT, TopologySpec.ring(8, 20.0),
                 TopologySpec.grid(4, 4, 20.0), TopologySpec.torus(4, 4, 20.0)]
        for i in range(200):
            spec = specs[i % len(specs)]
            path = route(spec)
            bit = int(rng.integers(0, 2))
            angles = StageAngles(float(rng.uniform(0, 2 * math.pi)),
                                 float(rng.uniform(0, 2 * math.pi)))
            out = three_stage_photon(bit, angles, path, QUIET, None,
                                     DrawStream(gen=generator(42, i)))
            assert out == PhotonOutcome(bit)

    def test_angle_independence_under_same_seed(self):
        # with noise off, only attenuation draws matter; identical streams
        # must give identical outcome sequences whatever the angles are
        cfg = NoiseConfig(alpha_db_per_km=0.15)
        path = route(DIRECT)
        records = []
        for angles in (StageAngles(0.3, 5.1), StageAngles(2.9, 1.2)):
            rec = transmit_burst(1, 64, path, cfg, None, generator(7, 70),
                                 angles=angles)
            records.append(rec.outcomes)
        assert records[0] == records[1]

    def test_burst_noiseless(self):
        path = route(TopologySpec.torus(4, 4, 20.0))
        rec = transmit_burst(0, 100, path, QUIET, None, generator(7, 71))
        assert rec.success_fraction == 1.0
        assert rec.decoded == 0
        assert rec.received_count == 100

    def test_single_photon_burst(self):
        rec = transmit_burst(1, 1, route(DIRECT), QUIET, None, generator(7, 72))
        assert rec.decoded == 1
        assert rec.success_fraction == 1.0


class TestAttenuationInProtocol:
    def test_three_pass_loss_fraction(self):
        cfg = NoiseConfig(alpha_db_per_km=0.15)
        path = route(DIRECT)
        n = 10_000
        rec = transmit_burst(0, n, path, cfg, None, generator(8, 80))
        survive_all = attenuation_survival(0.15, 20.0) ** 3
        lost = 1.0 - rec.received_count / n
        sigma = math.sqrt(survive_all * (1 - survive_all) / n)
        assert abs(lost - (1.0 - survive_all)) <= 3 * sigma

    def test_single_pass_mode_counts_distance_once(self):
        cfg = NoiseConfig(alpha_db_per_km=0.15)
        path = route(DIRECT)
        n = 10_000
        rec = transmit_burst(0, n, path, cfg, None, generator(8, 81),
                             single_pass_attenuation=True)
        survive = attenuation_survival(0.15, 20.0)
        sigma = math.sqrt(survive * (1 - survive) / n)
        assert abs(rec.received_count / n - survive) <= 3 * sigma

    def test_loss_accounting(self):
        cfg = NoiseConfig(alpha_db_per_km=0.3)
        rec = transmit_burst(1, 500, route(DIRECT), cfg, None, generator(8, 82))
        lost = sum(1 for o in rec.outcomes if o.lost)
        assert lost + rec.received_count == 500
        assert 0.0 <= rec.success_fraction <= 1.0

    def test_received_bits_unaffected_by_loss(self):
        cfg = NoiseConfig(alpha_db_per_km=0.3)
        rec = transmit_burst(1, 500, route(DIRECT), cfg, None, generator(8, 83))
        assert all(o.bit == 1 for o in rec.outcomes if not o.lost)


class TestTrajectoryOracleAgreement:
    def test_single_stage_bit_flip(self):
        channel_lists = [[], [bit_flip(0.3)], []]
        exact = prob_one(three_stage_exact(0, 0.0, 0.0, channel_lists))
        stream = DrawStream(gen=generator(9, 90))
        n = 10_000
        ones = sum(three_stage_trajectory(0, 0.0, 0.0, channel_lists, stream)
                   for _ in range(n))
        sigma = math.sqrt(exact * (1 - exact) / n)
        assert abs(ones / n - exact) <= 3 * sigma
        assert exact == pytest.approx(0.3, abs=1e-12)

    @pytest.mark.parametrize("bit", [0, 1])
    def test_full_stack_single_hop_agreement(self, bit):
        cfg = NoiseConfig(p_ad=0.3, p_dephase=0.2, p_bitphase=0.15,
                          cr=CollectiveRotationSpec.fixed(0.5))
        angles = StageAngles(0.7, 1.9)
        stack = noise_stack(cfg, 0.5)
        exact = prob_one(three_stage_exact(bit, angles.theta_a, angles.theta_b,
                                           [stack, stack, stack]))
        n = 20_000
        rec = transmit_burst(bit, n, route(DIRECT), cfg, 0.5,
                             generator(9, 91, bit), angles=angles)
        ones = sum(1 for o in rec.outcomes if o.bit == 1)
        sigma = math.sqrt(exact * (1 - exact) / n)
        assert abs(ones / n - exact) <= 3 * sigma

    def test_once_per_photon_single_event_agreement(self):
        cfg = NoiseConfig(p_ad=0.2, apply_on_links=False, apply_at_nodes=False,
                          apply_once_per_photon=True)
        angles = StageAngles(1.3, 0.4)
        stack = noise_stack(cfg, None)
        # the journey's one event happens in stage 1, topology independent
        exact = prob_one(three_stage_exact(1, angles.theta_a, angles.theta_b,
                                           [stack, [], []]))
        n = 20_000
        rec = transmit_burst(1, n, route(TopologySpec.grid(4, 4, 20.0)), cfg,
                             None, generator(9, 92), angles=angles)
        ones = sum(1 for o in rec.outcomes if o.bit == 1)
        sigma = math.sqrt(exact * (1 - exact) / n)
        assert abs(ones / n - exact) <= 3 * sigma

    def test_agreement_conditioned_on_survival(self):
        cfg = NoiseConfig(p_bitflip=0.3, alpha_db_per_km=0.15)
        angles = StageAngles(0.0, 0.0)
        stack = noise_stack(cfg, None)
        exact = prob_one(three_stage_exact(0, 0.0, 0.0, [stack, stack, stack]))
        n = 20_000
        rec = transmit_burst(0, n, route(DIRECT), cfg, None,
                             generator(9, 93), angles=angles)
        received = [o for o in rec.outcomes if not o.lost]
        ones = sum(o.bit for o in received)
        sigma = math.sqrt(exact * (1 - exact) / len(received))
        assert abs(ones / len(received) - exact) <= 3 * sigma

    def test_agreement_for_random_configs(self):
        # randomized sweep of the central property: on a single-hop path any
        # fixed-angle config must match the exact three-stage evolution
        rng = np.random.default_rng(94)
        path = route(DIRECT)
        n = 8_000
        for case in range(6):
            cfg = NoiseConfig(
                p_ad=float(rng.uniform(0, 0.5)),
                p_dephase=float(rng.uniform(0, 0.5)),
                p_bitflip=float(rng.uniform(0, 0.5)),
                p_bitphase=float(rng.uniform(0, 0.5)),
                cr=CollectiveRotationSpec.fixed(float(rng.uniform(0, 2 * math.pi))),
            )
            bit = int(rng.integers(0, 2))
            angles = StageAngles(float(rng.uniform(0, 2 * math.pi)),
                                 float(rng.uniform(0, 2 * math.pi)))
            stack = noise_stack(cfg, cfg.cr.theta)
            exact = prob_one(three_stage_exact(
                bit, angles.theta_a, angles.theta_b, [stack, stack, stack]))
            rec = transmit_burst(bit, n, path, cfg, cfg.cr.theta,
                                 generator(9, 95, case), angles=angles)
            ones = sum(1 for o in rec.outcomes if o.bit == 1)
            sigma = math.sqrt(exact * (1 - exact) / n)
            assert abs(ones / n - exact) <= 3.5 * sigma, (case, ones / n, exact)


class TestScalarVectorEquivalence:
    CONFIGS = [
        NoiseConfig(p_ad=0.3, p_dephase=0.2, p_bitphase=0.15,
                    cr=CollectiveRotationSpec.per_trial()),
        NoiseConfig(p_bitflip=0.3),
        NoiseConfig(p_ad=0.2, apply_on_links=False, apply_at_nodes=False,
                    apply_once_per_photon=True),
        NoiseConfig(alpha_db_per_km=0.15, p_dephase=0.1),
        NoiseConfig(cr=CollectiveRotationSpec.per_application(1.0), p_ad=0.05),
    ]
    SPECS = [TopologySpec.direct(20.0), TopologySpec.ring(8, 5.0),
             TopologySpec.grid(4, 4, 10.0), TopologySpec.torus(4, 4, 10.0)]

    def test_burst_equals_per_photon_scalar_runs(self):
        # transmit_burst must be observationally identical to m independent
        # scalar photon runs over the same per-photon draw rows
        for ci, cfg in enumerate(self.CONFIGS):
            for ti, spec in enumerate(self.SPECS):
                path = route(spec)
                cr_angle = 0.7 if cfg.cr.mode in ("fixed", "per_trial") else None
                for single_pass in (False, True):
                    key = (99, ci, ti, int(single_pass))
                    rec = transmit_burst(1, 23, path, cfg, cr_angle,
                                         generator(*key),
                                         single_pass_attenuation=single_pass)
                    width = burst_draw_count(path, cfg, single_pass)
                    block = generator(*key).random((23, width))
                    for k in range(23):
                        angles = StageAngles(2 * math.pi * block[k, 0],
                                             2 * math.pi * block[k, 1])
                        out = three_stage_photon(
                            1, angles, path, cfg, cr_angle,
                            DrawStream.from_buffer(block[k, 2:]),
                            single_pass_attenuation=single_pass)
                        assert out == rec.outcomes[k], (ci, ti, single_pass, k)

    def test_scalar_draw_count_matches_plan(self):
        cfg = self.CONFIGS[0]
        path = route(self.SPECS[2])
        plan = compile_flight_plan(path, cfg, 0.7)
        stream = DrawStream(gen=generator(98, 0))
        out = three_stage_photon(1, StageAngles(0.1, 0.2), path, cfg, 0.7, stream)
        assert not out.lost  # no attenuation in this config
        assert stream.draws == plan.draw_count


class TestMajorityStatistics:
    def test_decode_matches_binomial_tail(self):
        # one bit-flip event per photon at p = 0.42 with zero angles gives a
        # per-photon correct probability of exactly 0.58
        cfg = NoiseConfig(p_bitflip=0.42, apply_on_links=False,
                          apply_at_nodes=False, apply_once_per_photon=True)
        path = route(DIRECT)
        angles = StageAngles(0.0, 0.0)
        m, q = 101, 0.58
        tail = sum(math.comb(m, k) * q ** k * (1 - q) ** (m - k)
                   for k in range((m + 1) // 2, m + 1))
        n_bursts = 1500
        good = 0
        for i in range(n_bursts):
            rec = transmit_burst(0, m, path, cfg, None, generator(10, 100, i),
                                 angles=angles)
            good += 1 if rec.decoded == 0 else 0
        sigma = math.sqrt(tail * (1 - tail) / n_bursts)
        assert abs(good / n_bursts - tail) <= 3 * sigma

    def test_majority_benefit_grows_with_burst_size(self):
        # per-photon correct probability 0.7 (> 1/2): decode accuracy must be
        # non-decreasing in burst size, up to 2 sigma statistical slack
        cfg = NoiseConfig(p_bitflip=0.3, apply_on_links=False,
                          apply_at_nodes=False, apply_once_per_photon=True)
        path = route(DIRECT)
        angles = StageAngles(0.0, 0.0)
        n_bursts = 400
        rates = []
        for mi, m in enumerate((1, 5, 25, 101)):
            good = 0
            for i in range(n_bursts):
                rec = transmit_burst(1, m, path, cfg, None,
                                     generator(11, mi, i), angles=angles)
                good += 1 if rec.decoded == 1 else 0
            rates.append(good / n_bursts)
        slack = 2 * math.sqrt(0.25 / n_bursts)
        for lo, hi in zip(rates, rates[1:]):
            assert hi >= lo - slack, rates

    def test_even_burst_can_tie(self):
        cfg = NoiseConfig(p_bitflip=0.5, apply_on_links=False,
                          apply_at_nodes=False, apply_once_per_photon=True)
        path = route(DIRECT)
        statuses = set()
        for i in range(200):
            rec = transmit_burst(0, 2, path, cfg, None, generator(12, i),
                                 angles=StageAngles(0.0, 0.0))
            statuses.add(rec.decode_status)
        assert "tie" in statuses

    def test_full_erasure_burst(self):
        cfg = NoiseConfig(alpha_db_per_km=1000.0)
        rec = transmit_burst(0, 4, route(DIRECT), cfg, None, generator(13, 0))
        assert rec.decoded is DecodeFailure.ERASURE
        assert rec.decode_status == "erasure"
        assert rec.received_count == 0


class TestArgumentValidation:
    def test_burst_size_positive(self):
        with pytest.raises(ValueError):
            transmit_burst(0, 0, route(DIRECT), QUIET, None, generator(1))

    def test_bit_binary(self):
        with pytest.raises(ValueError):
            transmit_burst(2, 5, route(DIRECT), QUIET, None, generator(1))

    def test_cr_angle_required_for_per_trial(self):
        cfg = NoiseConfig(cr=CollectiveRotationSpec.per_trial())
        with pytest.raises(ValueError):
            transmit_burst(0, 5, route(DIRECT), cfg, None, generator(1))

    def test_outcome_validation(self):
        with pytest.raises(ValueError):
            PhotonOutcome(3)

    def test_angles_must_be_finite(self):
        with pytest.raises(ValueError):
            StageAngles(float("nan"), 0.0)
