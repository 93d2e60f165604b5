#include "doctest.h"

#include <cmath>

#include "horolab/classifier.hpp"
#include "horolab/errors.hpp"
#include "horolab/sieve.hpp"
#include "horolab/util.hpp"

using namespace horolab;

TEST_CASE("fit_centralizer_drift") {
    SUBCASE("a point against itself has zero drift") {
        SurfacePoint u = generic_point(4);
        DriftRecord rec = fit_centralizer_drift(u, u, 1000.0);
        CHECK(rec.a == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(rec.c) < 1e-9);
        CHECK(rec.max_distance < 1e-6);
        CHECK(rec.ok);
    }
    SUBCASE("lower-triangular perturbation tracks for a long time") {
        SurfacePoint u = generic_point(4);
        GroupElement z = LowerTriangularElement{1 + 1e-6, 1e-12}.matrix();
        SurfacePoint x = reduce(z * u.rep);
        DriftRecord rec = fit_centralizer_drift(x, u, 100000.0, 1e-3);
        CHECK(rec.ok);
        CHECK(rec.max_distance <= 1e-3);
    }
    SUBCASE("stable-direction perturbation shears away at ~tol / (2 eps)") {
        SurfacePoint u = generic_point(4);
        SurfacePoint x = reduce(flow_v(1e-6) * u.rep);
        DriftRecord rec = fit_centralizer_drift(x, u, 1000000.0, 0.1);
        CHECK(!rec.ok);
        // d ~ 2 eps t, so failure near 0.1 / (2e-6) = 5e4 on a log grid
        CHECK(rec.failure_time >= 5e3);
        CHECK(rec.failure_time <= 1e6);
    }
    SUBCASE("far-apart points are rejected") {
        SurfacePoint u = generic_point(4);
        SurfacePoint x = generic_point(5);
        CHECK_THROWS_AS(fit_centralizer_drift(x, u, 100.0), std::invalid_argument);
    }
}

TEST_CASE("closed_horocycle_approximant") {
    SUBCASE("a point on a closed horocycle reproduces its own orbit") {
        SurfacePoint x = make_periodic(50, 0.3);
        auto ap = closed_horocycle_approximant(x, 200.0, 0.05, 10.0);
        REQUIRE(ap.has_value());
        CHECK(ap->period == doctest::Approx(50.0).epsilon(1e-6));
        CHECK(ap->max_distance <= 1e-6);
        CHECK(ap->exceptional_measure == 0.0);
    }
    SUBCASE("a v-perturbed point off a period-1 horocycle") {
        double T = 100.0;
        SurfacePoint w = make_periodic(1, 0.0);
        // well below critical size: the recovered period is sharp
        SurfacePoint x = reduce(flow_v(std::pow(T, -2.0)) * w.rep);
        auto ap = closed_horocycle_approximant(x, T, 0.05, 5.0);
        REQUIRE(ap.has_value());
        CHECK(ap->period == doctest::Approx(1.0).epsilon(0.05));
        CHECK(ap->max_distance <= 0.05);
        // at the spec's T^{-1.1} scale the v-offset is only borderline small
        // (its renormalized size is T^{-0.1}); the approximant still tracks
        SurfacePoint x2 = reduce(flow_v(std::pow(T, -1.1)) * w.rep);
        auto ap2 = closed_horocycle_approximant(x2, T, 0.06, 5.0);
        REQUIRE(ap2.has_value());
        CHECK(ap2->period >= 0.5);
        CHECK(ap2->period <= 3.0);
        CHECK(ap2->max_distance <= 0.06);
    }
    SUBCASE("compact geodesic past yields none") {
        bool found_compact_seed = false;
        for (uint64_t s = 1; s <= 60; ++s) {
            SurfacePoint x = generic_point(s);
            SurfacePoint yT = geodesic_point(x, -std::log(500.0));
            if (cusp_excursion(yT) <= 0.05) {
                found_compact_seed = true;
                CHECK(!closed_horocycle_approximant(x, 500.0, 0.05, 5.0).has_value());
                break;
            }
        }
        CHECK(found_compact_seed);
    }
}

TEST_CASE("shadowing_decomposition") {
    ClassifierParams params;
    SUBCASE("identity decomposition is exact") {
        SurfacePoint w = make_periodic(7, 0.2);
        ShadowingDecomposition dec = shadowing_decomposition(w, w, 7.0, 10000.0, params);
        CHECK(dec.a == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(dec.b) < 1e-9);
        CHECK(std::abs(dec.c) < 1e-9);
        CHECK(dec.K_lo > dec.K_hi);  // empty
        for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
            CHECK(dec.blocks[i].max_checked_distance < 1e-6);
            double t = 0.5 * (dec.blocks[i].t_lo + dec.blocks[i].t_hi);
            CHECK(dec.reparam_time(i, t) == doctest::Approx(t).epsilon(1e-9));
        }
        CHECK(dec.fraction_within_bound() == 1.0);
    }
    SUBCASE("v-perturbed pair stays within 1/log T") {
        double T = 10000.0;
        SurfacePoint w = make_periodic(7, 0.0);
        SurfacePoint x = reduce(flow_v(std::pow(T, -1.5)) * w.rep);
        ShadowingDecomposition dec = shadowing_decomposition(x, w, 7.0, T, params);
        CHECK(dec.fraction_within_bound() >= 0.99);
        // eq:peq0-style entry bounds
        double budget = 2 * std::pow(T, -1 + 2 * params.A4 * params.delta);
        CHECK(std::abs(dec.a - 1) <= budget);
        CHECK(std::abs(dec.d - 1) <= budget);
        CHECK(std::abs(dec.b) <= budget);
        CHECK(std::abs(dec.c) <= budget);
        // shifted periods are A(t_i)^2 per(w)
        for (const auto& bl : dec.blocks) {
            double Ati = dec.a + dec.c * bl.t_i;
            CHECK(bl.period == doctest::Approx(Ati * Ati * 7.0).epsilon(1e-12));
        }
    }
    SUBCASE("negative c produces a nonempty K within its budget") {
        double T = 10000.0;
        SurfacePoint w = make_periodic(7, 0.0);
        SurfacePoint x = reduce(flow_v(-2.0 / T) * w.rep);
        ShadowingDecomposition dec = shadowing_decomposition(x, w, 7.0, T, params);
        REQUIRE(dec.K_lo <= dec.K_hi);
        CHECK(dec.K_hi - dec.K_lo <= dec.K_bound + 1e-6);
        CHECK(dec.fraction_within_bound() >= 0.99);
    }
    SUBCASE("hypothesis violations are signaled") {
        SurfacePoint w = make_periodic(7, 0.0);
        SurfacePoint far = generic_point(8);
        CHECK_THROWS_AS(shadowing_decomposition(far, w, 7.0, 10000.0, params),
                        HypothesisViolation);
        SurfacePoint near = reduce(flow_v(1e-7) * w.rep);
        CHECK_THROWS_AS(shadowing_decomposition(near, w, 1e9, 10000.0, params),
                        HypothesisViolation);
    }
}

TEST_CASE("circle_pushforward") {
    SUBCASE("constant function is pure zero mode") {
        SurfacePoint w = make_periodic(10, 0.0);
        CirclePushforward cp = circle_pushforward(w, 10.0, TestFunction::constant(1), 16);
        CHECK(cp.coeff(0).real() == doctest::Approx(1.0).epsilon(1e-12));
        for (int n = 1; n <= 16; ++n) {
            CHECK(std::abs(cp.coeff(n)) < 1e-9);
            CHECK(std::abs(cp.coeff(-n)) < 1e-9);
        }
    }
    SUBCASE("long orbits nearly kill the zero mode of mean-zero functions") {
        SurfacePoint w = make_periodic(1000, 0.0);
        TestFunction f = test_battery(5, 1)[0];
        CirclePushforward cp = circle_pushforward(w, 1000.0, f, 8);
        CHECK(std::abs(cp.coeff(0)) <= 0.05);
    }
    SUBCASE("Parseval on a short orbit with enough modes") {
        SurfacePoint w = make_periodic(8, 0.0);
        TestFunction f = test_battery(5, 1)[0];
        CirclePushforward cp = circle_pushforward(w, 8.0, f, 300);
        CHECK(cp.parseval_gap <= 1e-3);
        CHECK(cp.tail_constant >= 0.0);
    }
}

TEST_CASE("periodic_spnt_experiment") {
    ClassifierParams params;
    double T = 5000.0;
    SUBCASE("constant function is reproduced exactly by the pipeline") {
        SurfacePoint w = make_periodic(7, 0.0);
        SurfacePoint x = reduce(flow_v(std::pow(T, -1.6)) * w.rep);
        PeriodicExperimentReport rep =
            periodic_spnt_experiment(x, w, 7.0, T, TestFunction::constant(1), params);
        CHECK(rep.direct_total == doctest::Approx(static_cast<double>(rep.pi2_T)).epsilon(1e-9));
        CHECK(rep.discrepancy == doctest::Approx(0.0).epsilon(1e-9));
        double covered = 0;
        for (const auto& row : rep.rows) covered += row.block_pi2;
        CHECK(rep.pipeline_total == doctest::Approx(covered).epsilon(1e-6));
        for (const auto& row : rep.rows)
            CHECK(row.direct_sum == doctest::Approx(row.block_pi2).epsilon(1e-9));
    }
    SUBCASE("block estimates track the direct block sums") {
        SurfacePoint w = make_periodic(11, 0.4);
        SurfacePoint x = reduce(flow_v(std::pow(T, -1.6)) * w.rep);
        TestFunction f = test_battery(6, 1)[0];
        PeriodicExperimentReport rep = periodic_spnt_experiment(x, w, 11.0, T, f, params);
        REQUIRE(!rep.rows.empty());
        double total_gap = 0, total_pi2 = 0;
        for (const auto& row : rep.rows) {
            total_gap += std::abs(row.direct_sum - row.pipeline_estimate);
            total_pi2 += row.block_pi2;
        }
        CHECK(total_gap <= 0.2 * total_pi2 + 5.0);
        CHECK(rep.short_period_flag >= 0.0);
    }
    SUBCASE("short orbits flag non-equidistribution via the zero mode") {
        SurfacePoint w3 = make_periodic(3, 0.0);
        SurfacePoint x3 = reduce(flow_v(std::pow(T, -1.6)) * w3.rep);
        SurfacePoint mid = flow_point(w3, 0.4);
        TestFunction f = TestFunction::bump(mid.z.real(), mid.z.imag(), mid.theta, 0.2, 0.22,
                                            0.9, false);
        PeriodicExperimentReport rep3 = periodic_spnt_experiment(x3, w3, 3.0, T, f, params);
        // same function on a longer orbit for comparison
        SurfacePoint w23 = make_periodic(23, 0.0);
        SurfacePoint x23 = reduce(flow_v(std::pow(40000.0, -1.3)) * w23.rep);
        PeriodicExperimentReport rep23 =
            periodic_spnt_experiment(x23, w23, 23.0, 40000.0, f, params);
        CHECK(rep3.short_period_flag >= 0.02);
        CHECK(rep3.short_period_flag >= 5 * rep23.short_period_flag);
        // the short-orbit discrepancy is carried by the zero mode
        CHECK(rep3.discrepancy >= 0.5 * rep3.short_period_flag -
                                      rep3.haar_target / static_cast<double>(rep3.pi2_T));
    }

    SUBCASE("hypothesis violations propagate") {
        SurfacePoint w = make_periodic(7, 0.0);
        SurfacePoint far = generic_point(9);
        CHECK_THROWS_AS(
            periodic_spnt_experiment(far, w, 7.0, T, TestFunction::constant(1), params),
            HypothesisViolation);
    }
}

TEST_CASE("flow_vs_discrete_gap") {
    SUBCASE("constants see no gap") {
        SurfacePoint x = generic_point(2), y = generic_point(3);
        double gap = flow_vs_discrete_gap(x, y, TestFunction::constant(1),
                                          TestFunction::constant(1), 500.0);
        CHECK(gap == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("generic pair has a small gap") {
        SurfacePoint x = generic_point(2), y = generic_point(3);
        auto battery = test_battery(11, 2);
        double gap = flow_vs_discrete_gap(x, y, battery[0], battery[1], 20000.0);
        CHECK(gap <= 0.05);
    }
    SUBCASE("a bump visited only at non-integer times on a short periodic pair") {
        SurfacePoint x = make_periodic(2, 0.0);
        SurfacePoint mid = flow_point(x, 0.5);
        TestFunction f = TestFunction::bump(mid.z.real(), mid.z.imag(), mid.theta, 0.15, 0.15,
                                            0.9, false);
        REQUIRE(f(x) == 0.0);
        REQUIRE(f(flow_point(x, 1.0)) == 0.0);
        double gap = flow_vs_discrete_gap(x, x, f, TestFunction::constant(1), 400.0, 0.01);
        CHECK(gap >= 0.005);  // continuous average sees the bump, discrete never does
    }
}

TEST_CASE("classify_pair") {
    ClassifierParams params;
    SUBCASE("generic point at moderate T reads E1") {
        SurfacePoint x = generic_point(1);
        TrichotomyReport rep = classify_pair(x, 11, 13, 100000.0, params);
        CHECK(rep.discrepancy <= rep.e1_threshold);
        CHECK(rep.verdict == TrichotomyReport::Verdict::E1);
    }
    SUBCASE("periodic points yield an E2 witness at graph distance ~0") {
        SurfacePoint x = make_periodic(20, 0.0);
        TrichotomyReport rep = classify_pair(x, 2, 3, 2000.0, params);
        REQUIRE(rep.e2_witness.has_value());
        CHECK(rep.e2_witness->distance <= rep.e2_threshold);
        CHECK(rep.verdict == TrichotomyReport::Verdict::E2Candidate);
        CHECK(rep.e2_witness->index >= 2);
        // reproducible by an independent graph-distance evaluation
        SurfacePoint xp = geodesic_point(x, -std::log(2.0));
        SurfacePoint yq = geodesic_point(x, -std::log(3.0));
        CommElement E{rep.e2_witness->A};
        double again = graph_distance(xp, yq, E, 2000.0, 10, 777);
        CHECK(again <= 2 * rep.e2_witness->distance + 0.01);
    }
    SUBCASE("deep-cusp pairs trip E2 or E3, never E1") {
        SurfacePoint x = make_periodic(0.15, 0.0);
        TrichotomyReport rep = classify_pair(x, 11, 13, 2000.0, params);
        CHECK(rep.discrepancy > rep.e1_threshold);
        bool e2 = rep.e2_witness && rep.e2_witness->distance <= rep.e2_threshold;
        CHECK((e2 || rep.e3_all_below));
        CHECK(rep.verdict != TrichotomyReport::Verdict::E1);
    }
    SUBCASE("deterministic and E1-monotone in T") {
        SurfacePoint x = generic_point(1);
        TrichotomyReport a = classify_pair(x, 11, 13, 10000.0, params);
        TrichotomyReport b = classify_pair(x, 11, 13, 10000.0, params);
        CHECK(a.discrepancy == b.discrepancy);
        CHECK(a.inj_min == b.inj_min);
        TrichotomyReport c = classify_pair(x, 11, 13, 100000.0, params);
        TrichotomyReport d = classify_pair(x, 11, 13, 400000.0, params);
        CHECK(c.discrepancy <= a.discrepancy + 0.02);
        CHECK(d.discrepancy <= c.discrepancy + 0.02);
    }
}
