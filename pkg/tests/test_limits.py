"""Tests for limit-law reports: plumbing, each law at desk scale, degeneracy."""

import math

import pytest

import hypstat as hs

# [DERIVED] scipy-ndtr Kolmogorov oracle values from tests/oracles.py
KS_AEXP_N4 = 0.10185185185185186
KS_AEXP_N8 = 0.06923315393185508
# [DERIVED] Legendre-transform oracle (scipy bounded minimization)
LDT_RATE_04 = 0.08608334308874455
LLT_TARGET = 0.23032943298089034  # 1 / sqrt(6 pi), exact to double precision


class TestReportPlumbing:
    def test_reverify_round_trip(self, free2, aexp, aexp_stats):
        report = hs.averaging_table(free2, aexp, aexp_stats, [5, 10, 15, 20])
        assert report.passed
        assert hs.reverify(report)
        doc = hs.report_to_json(report)
        again = hs.report_from_json(doc)
        assert hs.reverify(again)
        assert again.law == report.law
        assert list(again.checks) == list(report.checks)

    def test_tampered_check_detected(self, free2, aexp, aexp_stats):
        report = hs.averaging_table(free2, aexp, aexp_stats, [5, 10, 15, 20])
        doc = hs.report_to_json(report)
        doc["checks"][0]["lhs"] = doc["checks"][0]["rhs"] + 1.0
        tampered = hs.report_from_json(doc)
        assert not hs.reverify(tampered)

    def test_rows_carry_standard_keys(self, free2, aexp, aexp_stats):
        report = hs.clt_distance(
            free2, hs.decompose_components(free2), aexp, aexp_stats, [16, 36]
        )
        for row in report.rows:
            assert {"n", "observed", "predicted", "residual"} <= set(row)

    def test_checks_record_operator(self, free2, aexp, aexp_stats):
        report = hs.averaging_table(free2, aexp, aexp_stats, [5, 10, 15, 20])
        for check in report.checks:
            assert check["op"] in ("<=", "<", ">=", ">", "==")
            assert isinstance(check["passed"], bool)


class TestAveraging:
    def test_homomorphism_mean_exactly_zero(self, free2, aexp, aexp_stats):
        report = hs.averaging_table(free2, aexp, aexp_stats, [10, 20, 30, 40])
        assert report.passed
        assert [row["observed"] for row in report.rows] == [0.0, 0.0, 0.0, 0.0]
        assert [row["residual"] for row in report.rows] == [0.0, 0.0, 0.0, 0.0]

    def test_indicator_residuals_stay_bounded(self, free2, aind, aind_stats):
        grid = list(range(25, 101, 5))
        report = hs.averaging_table(free2, aind, aind_stats, grid)
        assert report.passed
        assert report.law == "averaging"
        # n |Lambda_n - Lambda| = |mean_n - n / 4| stays of order one
        residuals = [row["residual"] for row in report.rows]
        assert max(residuals) < 1.0

    def test_empty_grid_rejected(self, free2, aexp, aexp_stats):
        with pytest.raises(hs.InvalidArgumentError):
            hs.averaging_table(free2, aexp, aexp_stats, [])


class TestKolmogorovDistance:
    @pytest.mark.parametrize("n, expected", [(4, KS_AEXP_N4), (8, KS_AEXP_N8)])
    def test_matches_ndtr_oracle(self, free2, aexp, n, expected):
        dist = hs.distribution(free2, aexp, n)
        assert hs.kolmogorov_distance(dist, 0.0, 1.0) == pytest.approx(
            expected, abs=1e-12
        )

    def test_shrinks_with_n(self, free2, aexp):
        d4 = hs.kolmogorov_distance(hs.distribution(free2, aexp, 4), 0.0, 1.0)
        d16 = hs.kolmogorov_distance(hs.distribution(free2, aexp, 16), 0.0, 1.0)
        assert d16 < d4


class TestClt:
    def test_small_grid_report(self, free2, free2_decomp, aexp, aexp_stats):
        report = hs.clt_distance(free2, free2_decomp, aexp, aexp_stats, [16, 36])
        assert report.law == "clt"
        assert report.passed
        # rows must agree with the direct distance computation
        for row in report.rows:
            dist = hs.distribution(free2, aexp, row["n"])
            direct = hs.kolmogorov_distance(dist, 0.0, aexp_stats.sigma2**0.5)
            assert row["observed"] == pytest.approx(direct, abs=1e-12)

    def test_degenerate_weights_refused(self, free2, free2_decomp, wordlen, wordlen_stats):
        with pytest.raises(hs.PreconditionError, match="degenera"):
            hs.clt_distance(free2, free2_decomp, wordlen, wordlen_stats, [16, 36])

    def test_vector_weights_refused(self, free2, free2_decomp, abel, abel_stats):
        with pytest.raises(hs.InvalidArgumentError):
            hs.clt_distance(free2, free2_decomp, abel, abel_stats, [16, 36])


class TestBerryEsseen:
    def test_bound_dominates_distance(self, free2, free2_decomp, aexp, aexp_stats):
        bound = hs.berry_esseen_bound(free2, free2_decomp, aexp, aexp_stats, 16, 2.0)
        dist = hs.distribution_overcounted(free2, free2_decomp, aexp, 16)
        observed = hs.kolmogorov_distance(dist, 0.0, 1.0)
        assert bound >= observed

    def test_report_structure(self, free2, free2_decomp, aexp, aexp_stats):
        report = hs.berry_esseen_report(
            free2, free2_decomp, aexp, aexp_stats, 16, 2.0
        )
        assert report.law == "berry-esseen-bound"
        assert report.passed
        names = [c["name"] for c in report.checks]
        assert "bound-dominates-distance" in names

    def test_overcounted_mirror_sound(self, mirror, mirror_decomp, mirror_hom, mirror_stats):
        report = hs.berry_esseen_report(
            mirror, mirror_decomp, mirror_hom, mirror_stats, 8, 1.5
        )
        assert report.passed


class TestLdt:
    def test_rate_matches_legendre_oracle(
        self, free2, free2_decomp, aexp, aexp_stats
    ):
        t_grid = [k * 0.01 for k in range(0, 201)]
        report = hs.ldt_rate(
            free2, free2_decomp, aexp, aexp_stats, 0.4,
            list(range(10, 101, 10)), t_grid,
        )
        assert report.passed
        # grid optimization at step 0.01 lands within O(step^2) of the
        # continuous Legendre transform
        assert report.theory["chernoff_rate_bound"] == pytest.approx(
            LDT_RATE_04, abs=1e-4
        )
        assert report.theory["rate_plus"] == pytest.approx(
            report.theory["rate_minus"], abs=1e-12
        )

    def test_pointwise_bound_is_exact_inequality(
        self, free2, free2_decomp, aexp, aexp_stats
    ):
        report = hs.ldt_rate(
            free2, free2_decomp, aexp, aexp_stats, 0.4,
            [10, 20, 30], [k * 0.01 for k in range(0, 201)],
        )
        names = {c["name"]: c for c in report.checks}
        assert names["chernoff-pointwise-exact"]["passed"]
        assert names["chernoff-pointwise-fitted"]["passed"]

    def test_word_length_tails_are_empty(
        self, free2, free2_decomp, wordlen, wordlen_stats
    ):
        report = hs.ldt_rate(
            free2, free2_decomp, wordlen, wordlen_stats, 0.4,
            [10, 20], [k * 0.01 for k in range(0, 101)],
        )
        assert report.passed
        assert report.theory["degenerate_tail"] is True
        # empty tails: the exact probability is zero and no rate exists
        assert all(row["p"] == 0.0 for row in report.rows)
        assert all(row["observed"] is None for row in report.rows)

    def test_nonpositive_epsilon_rejected(
        self, free2, free2_decomp, aexp, aexp_stats
    ):
        with pytest.raises(hs.InvalidArgumentError):
            hs.ldt_rate(
                free2, free2_decomp, aexp, aexp_stats, 0.0, [10], [0.0, 0.1]
            )


class TestMclt:
    def test_identity_covariance_small_grid(
        self, free2, free2_decomp, abel, abel_stats
    ):
        report = hs.mclt_check(free2, free2_decomp, abel, abel_stats, [25, 50])
        assert report.passed
        names = {c["name"]: c for c in report.checks}
        assert names["sigma-positive-definite"]["passed"]
        assert names["covariance-agreement"]["lhs"] <= 0.05
        # the default cell is the lower quadrant; by symmetry its mass is
        # exactly centered, so the continuity-corrected proportion is 1/4
        assert names["cell-agreement-0"]["lhs"] <= 1e-9

    def test_rank_one_fails_positive_definite(
        self, free2, free2_decomp, rank1, rank1_stats
    ):
        report = hs.mclt_check(free2, free2_decomp, rank1, rank1_stats, [16])
        assert not report.passed
        names = {c["name"]: c for c in report.checks}
        assert not names["sigma-positive-definite"]["passed"]
        assert report.theory["degenerate_direction"] is not None

    def test_scalar_weights_refused(self, free2, free2_decomp, aexp, aexp_stats):
        with pytest.raises(hs.PreconditionError):
            hs.mclt_check(free2, free2_decomp, aexp, aexp_stats, [16])

    def test_explicit_cell(self, free2, free2_decomp, abel, abel_stats):
        cell = ((-3.0, 3.0), (-3.0, 3.0))
        report = hs.mclt_check(
            free2, free2_decomp, abel, abel_stats, [36], cell_grid=[cell]
        )
        names = {c["name"]: c for c in report.checks}
        assert "cell-agreement-0" in names
        assert names["cell-agreement-0"]["passed"]


class TestLlt:
    def test_row_matches_manual_binned_mass(
        self, free2, free2_decomp, proj, proj_stats
    ):
        report = hs.llt_check(
            free2, free2_decomp, proj, proj_stats, -0.5, 0.5, [100]
        )
        (row,) = report.rows
        width = report.params["bin_width"]
        assert width == pytest.approx(0.01)  # (b - a) / 100
        dist = hs.distribution(free2, proj, 100, bin_width=width)
        fuzz = 1e-12
        mass = sum(
            c
            for center, c in zip(dist.support, dist.counts)
            if -0.5 - fuzz <= center <= 0.5 + fuzz
        )
        assert row["observed"] == pytest.approx(
            10.0 * mass / dist.total, rel=1e-12
        )
        assert row["predicted"] == pytest.approx(LLT_TARGET, abs=1e-7)

    def test_gate_refuses_lattice_weights(
        self, free2, free2_decomp, aexp, aexp_stats
    ):
        with pytest.raises(hs.PreconditionError, match="lattice"):
            hs.llt_check(free2, free2_decomp, aexp, aexp_stats, -0.5, 0.5, [50])

    def test_gate_records_minimum(self, free2, free2_decomp, proj, proj_stats):
        report = hs.llt_check(
            free2, free2_decomp, proj, proj_stats, -0.5, 0.5, [60],
            gate_t_grid=[0.5, 1.0, 1.5],
        )
        gate = report.params["gate"]
        assert gate["min_gap"] > 0.0
        assert gate["argmin_t"] in (0.5, 1.0, 1.5)

    def test_zero_length_interval(self, free2, free2_decomp, proj, proj_stats):
        report = hs.llt_check(
            free2, free2_decomp, proj, proj_stats, 0.3, 0.3, [60]
        )
        assert report.passed
        assert [c["name"] for c in report.checks] == ["llt-zero-target"]

    def test_reversed_interval_rejected(
        self, free2, free2_decomp, proj, proj_stats
    ):
        with pytest.raises(hs.InvalidArgumentError):
            hs.llt_check(free2, free2_decomp, proj, proj_stats, 0.5, -0.5, [60])

    def test_oversized_bin_rejected(self, free2, free2_decomp, proj, proj_stats):
        with pytest.raises(hs.InvalidArgumentError):
            hs.llt_check(
                free2, free2_decomp, proj, proj_stats, -0.5, 0.5, [60],
                bin_width=0.5,
            )


class TestDegeneracy:
    def test_word_length_degenerate(
        self, free2, free2_decomp, wordlen, wordlen_stats
    ):
        report = hs.degeneracy_check(
            free2, free2_decomp, wordlen, wordlen_stats, 16
        )
        assert report.passed
        assert report.theory["degenerate"] is True
        assert all(row["observed"] == 0.0 for row in report.rows)

    def test_a_exponent_nondegenerate(
        self, free2, free2_decomp, aexp, aexp_stats
    ):
        report = hs.degeneracy_check(free2, free2_decomp, aexp, aexp_stats, 16)
        assert report.passed
        assert report.theory["degenerate"] is False

    def test_real_nonlattice_nondegenerate(
        self, free2, free2_decomp, proj, proj_stats
    ):
        report = hs.degeneracy_check(free2, free2_decomp, proj, proj_stats, 8)
        assert report.passed
        assert report.theory["degenerate"] is False

    def test_constant_real_weights_degenerate(self, free2, free2_decomp):
        table = {
            (e.source, e.target): math.sqrt(2)
            for e in free2.nonaugmentation_edges
        }
        weights = hs.weights_from_edge_table(free2, table)
        stats = hs.limit_statistics(free2, free2_decomp, weights)
        report = hs.degeneracy_check(free2, free2_decomp, weights, stats, 16)
        assert report.passed
        assert report.theory["degenerate"] is True

    def test_disagreeing_verdicts_raise(self, free2, free2_decomp):
        # variance 1e-10 clamps to zero spectrally, yet the sphere range
        # genuinely grows: the two verdicts disagree and must say so loudly
        weights = hs.weights_from_homomorphism(free2, {"a": 1e-5, "b": 0})
        stats = hs.limit_statistics(free2, free2_decomp, weights)
        assert stats.degenerate
        with pytest.raises(hs.InconsistencyError, match="disagree"):
            hs.degeneracy_check(free2, free2_decomp, weights, stats, 16)
