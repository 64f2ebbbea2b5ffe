import math
from fractions import Fraction

import numpy as np
import pytest

from qsymlab.compiler import (
    amplify_majority3,
    compile_and_run_once,
    compiled_distribution,
    estimate_success,
    exact_success,
    majority3_prob,
    r_from_q,
    wilson_interval,
    with_gadget_ancilla,
)
from qsymlab.core import IndexFunction, InputString, compose_input, image
from qsymlab.oracles import composed_oracle, standard_oracle
from qsymlab.statevector import (
    OutputRule,
    QueryAlgorithm,
    RegisterLayout,
    Unitary,
    query_count,
    run,
)
from qsymlab.zoo import deutsch_jozsa, fourier_matrix, grover_unique_or


def base_two_thirds_alg():
    """Zero-query algorithm accepting with probability exactly 2/3."""
    return QueryAlgorithm(
        layout=RegisterLayout((3,)),
        steps=(Unitary(fourier_matrix(3), (0,)),),
        output_rule=OutputRule((0,), frozenset({(0,), (1,)})),
    )


class TestMajority3:
    def test_two_thirds_rational(self):
        assert majority3_prob(Fraction(2, 3)) == Fraction(20, 27)

    def test_endpoints(self):
        assert majority3_prob(0.0) == 0.0
        assert majority3_prob(1.0) == 1.0

    def test_half_is_fixed_point(self):
        assert majority3_prob(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_point_nine(self):
        assert majority3_prob(0.9) == pytest.approx(0.972, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            majority3_prob(1.5)


class TestAmplify:
    def test_query_count_triples(self):
        alg = deutsch_jozsa(4).algorithm
        assert query_count(amplify_majority3(alg)) == 3 * query_count(alg)

    def test_harness_level_twenty_twenty_sevenths(self):
        amplified = amplify_majority3(base_two_thirds_alg())
        assert run(amplified)[1] == pytest.approx(20 / 27, abs=1e-9)

    def test_certain_stays_certain(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (1, 1, 1, 1))
        dist = run(amplify_majority3(entry.algorithm), standard_oracle(x))
        assert dist[0] == pytest.approx(1.0, abs=1e-9)

    def test_amplified_matches_cubic_of_base(self):
        entry = grover_unique_or(8, 1)
        x = InputString(8, 2, (0, 0, 0, 0, 1, 0, 0, 0))
        base_p = run(entry.algorithm, standard_oracle(x))[1]
        amp_p = run(amplify_majority3(entry.algorithm), standard_oracle(x))[1]
        assert amp_p == pytest.approx(majority3_prob(base_p), abs=1e-9)

    def test_double_amplification_rejected(self):
        alg = amplify_majority3(deutsch_jozsa(4).algorithm)
        with pytest.raises(ValueError, match="already"):
            amplify_majority3(alg)


class TestRFromQ:
    def test_unit_case(self):
        assert r_from_q(1, 6) == 1

    def test_q_two(self):
        assert r_from_q(2, 6) == 8

    def test_monotone_in_q(self):
        values = [r_from_q(q, 2.5) for q in range(1, 12)]
        assert values == sorted(values)

    def test_budget_inequality_holds(self):
        for q in range(1, 8):
            for lam in (0.5, 1.0, 3.7, 6.0):
                r = r_from_q(q, lam)
                assert (6 * q) ** 3 <= lam**3 * r * (1 + 1e-12)

    def test_rejects_bad_lambda(self):
        with pytest.raises(ValueError, match="positive"):
            r_from_q(2, 0)

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            r_from_q(0, 6)


class TestCompiledDistribution:
    def test_bit_identical_to_direct_simulation(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 1, 0))
        for c_values in ((2, 2, 0, 1), (0, 0, 0, 0), (0, 1, 2, 3), (3, 1, 3, 1)):
            fixed = IndexFunction(4, c_values)
            dist, used = compiled_distribution(entry.algorithm, x, fixed)
            direct = run(
                amplify_majority3(entry.algorithm),
                standard_oracle(compose_input(x, fixed)),
            )
            assert dist == direct
            assert used == len(image(fixed))

    def test_lookup_counter_is_image_size(self):
        entry = deutsch_jozsa(8)
        x = InputString(8, 2, (0, 1, 0, 1, 0, 1, 0, 1))
        fixed = IndexFunction(8, (5, 5, 5, 2, 2, 0, 0, 0))
        _, used = compiled_distribution(entry.algorithm, x, fixed)
        assert used == 3

    def test_injective_maps_behave_like_permutations(self):
        # conditioned on an injective map the compiled run is the amplified
        # algorithm on a permuted promise input, so success stays >= 20/27
        import itertools

        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 0, 1))
        for values in itertools.permutations(range(4)):
            pi = IndexFunction(4, values)
            dist, _ = compiled_distribution(entry.algorithm, x, pi)
            direct = run(
                amplify_majority3(entry.algorithm),
                standard_oracle(compose_input(x, pi)),
            )
            assert dist == direct
            assert dist[1] >= 20 / 27


class TestCompileAndRunOnce:
    def test_r_range_enforced(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 0, 1, 1))
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError, match="outside"):
            compile_and_run_once(entry.algorithm, x, 5, rng)

    def test_queries_bounded_by_r(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 0, 1, 1))
        rng = np.random.default_rng(1)
        for _ in range(100):
            result = compile_and_run_once(entry.algorithm, x, 2, rng)
            assert result.classical_queries_used <= 2
            assert result.classical_queries_used == len(image(result.sampled_C))

    def test_seed_replays_exactly(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 0, 1))
        rng = np.random.default_rng(2)
        first = compile_and_run_once(entry.algorithm, x, 3, rng)
        replay = compile_and_run_once(entry.algorithm, x, 3, seed=first.seed)
        assert replay == first

    def test_constant_input_always_succeeds(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 0, 0, 0))
        rng = np.random.default_rng(3)
        for _ in range(50):
            assert compile_and_run_once(entry.algorithm, x, 2, rng).output_bit == 0


class TestEstimateSuccess:
    def test_constant_input_estimate_is_one(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (1, 1, 1, 1))
        rng = np.random.default_rng(4)
        est = estimate_success(entry.algorithm, x, 0, 2, 500, rng)
        assert est.estimate == 1.0
        assert est.ci_low > 0.99

    def test_same_seed_reproduces(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 1, 0))
        a = estimate_success(entry.algorithm, x, 1, 4, 200, np.random.default_rng(7))
        b = estimate_success(entry.algorithm, x, 1, 4, 200, np.random.default_rng(7))
        assert a == b

    def test_parallel_jobs_match_serial(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 1, 0))
        serial = estimate_success(entry.algorithm, x, 1, 4, 60, np.random.default_rng(8))
        parallel = estimate_success(
            entry.algorithm, x, 1, 4, 60, np.random.default_rng(8), jobs=2
        )
        assert serial == parallel

    def test_monte_carlo_matches_exact_dj(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 0, 1, 1))
        exact = exact_success(entry.algorithm, x, 1, 4)
        assert exact == pytest.approx(51 / 64, abs=1e-9)
        rng = np.random.default_rng(9)
        est = estimate_success(entry.algorithm, x, 1, 4, 2000, rng)
        sigma = math.sqrt(exact * (1 - exact) / 2000)
        assert abs(est.estimate - exact) <= 4 * sigma


class TestExactSuccess:
    def test_dj_constant_any_r(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (1, 1, 1, 1))
        for r in (1, 2, 4):
            assert exact_success(entry.algorithm, x, 0, r) == pytest.approx(1.0, abs=1e-9)

    def test_grover_small_instance_target(self):
        # fixes the expected value exactly before any larger-scale smoke run
        entry = grover_unique_or(4, 1)
        x = InputString(4, 2, (0, 0, 1, 0))
        value = exact_success(entry.algorithm, x, 1, 4)
        assert value == pytest.approx(17 / 32, abs=1e-9)
        assert value >= 0.5

    def test_grover_larger_instance_against_closed_form(self):
        # w marked cells of x.C follow Bin(n, 1/n) at r = n; per-w success is
        # the standard amplitude geometry, majority-combined
        n, k = 8, 2
        entry = grover_unique_or(n, k)
        x = InputString(n, 2, tuple(1 if i == 3 else 0 for i in range(n)))
        expected = 0.0
        for w in range(n + 1):
            weight = math.comb(n, w) * (1 / n) ** w * (1 - 1 / n) ** (n - w)
            p_w = math.sin((2 * k + 1) * math.asin(math.sqrt(w / n))) ** 2 if w else 0.0
            expected += weight * majority3_prob(p_w)
        rng = np.random.default_rng(10)
        est = estimate_success(entry.algorithm, x, 1, n, 2000, rng)
        sigma = math.sqrt(expected * (1 - expected) / 2000)
        assert abs(est.estimate - expected) <= 4 * sigma


class TestGadgetRewrite:
    def test_rewritten_run_equals_direct(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 1, 0))
        g = IndexFunction(4, (1, 0, 3, 3))
        rewritten, anc = with_gadget_ancilla(entry.algorithm, 4)
        assert anc == 2
        comp = composed_oracle(standard_oracle(x), standard_oracle(g), anc)
        via_gadget = run(rewritten, comp)
        direct = run(entry.algorithm, standard_oracle(compose_input(x, g)))
        assert via_gadget[1] == pytest.approx(direct[1], abs=1e-12)

    def test_amplified_rewrite_counts_six_q(self):
        entry = deutsch_jozsa(4)
        x = InputString(4, 2, (0, 1, 1, 0))
        g = IndexFunction(4, (2, 2, 1, 0))
        rewritten, anc = with_gadget_ancilla(amplify_majority3(entry.algorithm), 4)
        comp = composed_oracle(standard_oracle(x), standard_oracle(g), anc)
        run(rewritten, comp)
        assert comp.query_counts == {"x_queries": 3, "g_queries": 6}


class TestWilson:
    def test_contains_point_estimate(self):
        low, high = wilson_interval(80, 100)
        assert low < 0.8 < high

    def test_degenerate_all_successes(self):
        low, high = wilson_interval(50, 50)
        assert high == 1.0
        assert low > 0.9

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            wilson_interval(0, 0)
