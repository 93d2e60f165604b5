#include "doctest.h"

#include <cmath>
#include <complex>

#include "horolab/errors.hpp"
#include "horolab/sieve.hpp"
#include "horolab/spnt.hpp"
#include "horolab/surface.hpp"
#include "horolab/util.hpp"

using namespace horolab;

TEST_CASE("SmoothWindow profile") {
    SmoothWindow W(0.2);
    CHECK(W(-0.1) == 0.0);
    CHECK(W(0.0) == 0.0);
    CHECK(W(1.0) == 0.0);
    CHECK(W(1.3) == 0.0);
    for (double x = 0.21; x < 0.79; x += 0.01) CHECK(W(x) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x = 0.001; x < 1.0; x += 0.001) {
        CHECK(W(x) >= 0.0);
        CHECK(W(x) <= 1.0);
    }
    CHECK_THROWS_AS(SmoothWindow(0.6), std::invalid_argument);
}

TEST_CASE("DyadicPartition sums to one on [1, 1e6]") {
    DyadicPartition K;
    for (double x = 0.9; x < 4.5; x += 0.01) {
        if (x <= 1 || x >= 4) CHECK(K(x) == 0.0);
        CHECK(K(x) >= 0.0);
        CHECK(K(x) <= 1.0);
    }
    for (uint64_t n = 1; n <= 1000000; ++n) {
        double s = K.partition_sum(static_cast<double>(n));
        if (std::abs(s - 1.0) > 1e-9) {
            CAPTURE(n);
            CHECK(std::abs(s - 1.0) <= 1e-9);
            break;
        }
    }
    CHECK(K.partition_sum(1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eligible_primes window") {
    SUBCASE("log N = 16, eps = 1/4 gives [e^2, e^8]") {
        uint64_t N = static_cast<uint64_t>(std::llround(std::exp(16.0)));
        PrimeWindow w = eligible_primes(0.25, N);
        CHECK(w.lo == doctest::Approx(std::exp(2.0)).epsilon(1e-3));
        CHECK(w.hi == doctest::Approx(std::exp(8.0)).epsilon(1e-3));
        CHECK(w.primes.front() == 11);
        CHECK(w.primes.back() == 2971);
        // endpoint arithmetic + sieve oracle
        auto ps = primes_upto(3000);
        uint64_t direct = 0;
        for (uint64_t p : ps)
            if (p >= w.lo && p <= w.hi) ++direct;
        CHECK(w.primes.size() == direct);
        // the dropped side condition is reported
        CHECK(w.log10_side_lhs == doctest::Approx(2.0 / std::numbers::ln10).epsilon(1e-6));
        CHECK(w.log10_side_rhs == doctest::Approx(1000.0 * std::log10(16.0)).epsilon(1e-6));
    }
    SUBCASE("degenerate window is signaled") {
        uint64_t N = static_cast<uint64_t>(std::llround(std::exp(16.0)));
        CHECK_THROWS_AS(eligible_primes(0.5, N), std::invalid_argument);
        CHECK_THROWS_AS(eligible_primes(0.499, N), EmptyWindow);
    }
}

TEST_CASE("bilinear_sum") {
    SUBCASE("diagonal with constant sequence") {
        BoundedSequence one = BoundedSequence::constant_one(1000000);
        cplx s = bilinear_sum(one, 7, 7, 1000);
        CHECK(s.real() == doctest::Approx(1000.0).epsilon(1e-12));
        CHECK(s.imag() == doctest::Approx(0.0));
    }
    SUBCASE("diagonal is a nonnegative real square sum") {
        double alpha = 0.7548;
        BoundedSequence seq(1000000, [&](uint64_t n) { return e_of(alpha * n) * 0.8; });
        cplx s = bilinear_sum(seq, 5, 5, 2000);
        CHECK(s.imag() == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(s.real() >= 0.0);
    }
    SUBCASE("geometric closed form for rotation sequences") {
        double alpha = std::sqrt(2.0) - 1;
        BoundedSequence seq(10000000, [&](uint64_t n) { return e_of(alpha * n); });
        for (auto [q1, q2] : {std::pair<uint64_t, uint64_t>{3, 5}, {11, 13}, {2, 9}}) {
            uint64_t N = 20000;
            cplx s = bilinear_sum(seq, q1, q2, N);
            // sum_{n<=N} e(n (q1-q2) alpha), geometric
            double d = (static_cast<double>(q1) - static_cast<double>(q2)) * alpha;
            cplx ratio = e_of(d);
            cplx direct = ratio * (std::pow(ratio, static_cast<double>(N)) - 1.0) / (ratio - 1.0);
            CHECK(std::abs(s - direct) < 1e-7 * N);
            CHECK(std::abs(s) <= 1.0 / std::abs(std::sin(std::numbers::pi * d)) + 1e-9);
        }
    }
    SUBCASE("domain overflow is signaled") {
        BoundedSequence one = BoundedSequence::constant_one(1000);
        CHECK_THROWS_AS(bilinear_sum(one, 3, 5, 500), std::invalid_argument);
    }
    SUBCASE("boundedness is enforced") {
        BoundedSequence bad(100, [](uint64_t n) { return cplx{n == 7 ? 1.5 : 0.5, 0}; });
        CHECK_THROWS_AS(bilinear_sum(bad, 1, 7, 10), std::domain_error);
    }
    SUBCASE("sums are invariant under re-partition") {
        BoundedSequence seq(1000000, [](uint64_t n) { return e_of(0.3141 * n); });
        cplx whole = bilinear_sum(seq, 2, 3, 10000);
        cplx left = pairwise_sum_fn<cplx>(1, 4097, [&](uint64_t n) {
            return seq(2 * n) * std::conj(seq(3 * n));
        });
        cplx right = pairwise_sum_fn<cplx>(4097, 10001, [&](uint64_t n) {
            return seq(2 * n) * std::conj(seq(3 * n));
        });
        CHECK(std::abs(whole - (left + right)) < 1e-10 * 10000);
    }
}

TEST_CASE("dynamics_sequence random access agrees with fresh flows") {
    SurfacePoint x = generic_point(12);
    TestFunction f = test_battery(3, 1)[0];
    BoundedSequence seq = dynamics_sequence(x, f, 100000);
    Rng rng(5);
    for (int k = 0; k < 40; ++k) {
        uint64_t n = 1 + rng.below(5000);
        cplx via_seq = seq(n);
        double direct = f(flow_point(x, static_cast<double>(n)));
        CHECK(std::abs(via_seq.real() - direct) < 1e-8);
    }
    // interleaved progressions (the bilinear access pattern)
    for (uint64_t n = 1; n <= 50; ++n) {
        CHECK(std::abs(seq(11 * n).real() - f(flow_point(x, 11.0 * n))) < 1e-8);
        CHECK(std::abs(seq(13 * n).real() - f(flow_point(x, 13.0 * n))) < 1e-8);
    }
}

TEST_CASE("smoothed_semiprime_sum") {
    SmoothWindow W(0.15);
    DyadicPartition K;
    const uint64_t N = 30000;
    SUBCASE("plateau bracketing for the constant sequence") {
        BoundedSequence one = BoundedSequence::constant_one(N + 1);
        SmoothedSumReport rep = smoothed_semiprime_sum(one, N, W, K);
        double plateau = static_cast<double>(
            pi2_interval(static_cast<uint64_t>(0.15 * N) + 1, static_cast<uint64_t>(0.85 * N)));
        CHECK(rep.total.real() >= plateau - 1e-6);
        CHECK(rep.total.real() <= static_cast<double>(pi2(N)) + 1e-6);
        CHECK(rep.unsmoothed.real() == doctest::Approx(static_cast<double>(pi2(N))));
    }
    SUBCASE("fringe accounting is exact") {
        SurfacePoint x = generic_point(4);
        TestFunction f = test_battery(9, 1)[0];
        BoundedSequence seq = dynamics_sequence(x, f, N + 1);
        SmoothedSumReport rep = smoothed_semiprime_sum(seq, N, W, K);
        CHECK(std::abs(rep.unsmoothed - rep.total) <= static_cast<double>(rep.fringe_pairs) + 1e-9);
        // independent fringe recount
        uint64_t fringe = 0;
        for_each_semiprime_pair(0, N, [&](uint64_t, uint64_t, uint64_t pq) {
            double u = static_cast<double>(pq) / N;
            if (!(u > 0.15 && u < 0.85)) ++fringe;
        });
        CHECK(rep.fringe_pairs == fringe);
    }
    SUBCASE("blocks recombine to the total and satisfy the triangle inequality") {
        BoundedSequence seq(N + 1, [](uint64_t n) { return e_of(0.1234 * n); });
        SmoothedSumReport rep = smoothed_semiprime_sum(seq, N, W, K);
        CHECK(rep.block_recombination_gap < 1e-8 * static_cast<double>(pi2(N)));
        CHECK(rep.block_magnitude_sum() >= std::abs(rep.total) - 1e-9);
    }
}

TEST_CASE("mellin_decay_check") {
    SmoothWindow W(0.2);
    MellinReport rep = mellin_decay_check(W, {0.0, 1.0, 5.0, 10.0, 30.0, 100.0});
    CHECK(rep.c_w > 0);
    CHECK(rep.rows[0].magnitude > 0);  // W~(0) = int W / x > 0
    for (const auto& row : rep.rows) CHECK(row.ok);
    CHECK(rep.all_ok);
    // envelope decay across decades
    CHECK(rep.rows[5].magnitude < rep.rows[2].magnitude);
    CHECK(rep.rows[4].magnitude < rep.rows[1].magnitude + 1e-12);
    // |W~(100 i)| within the C_W / 1e4 budget
    CHECK(rep.rows[5].magnitude <= rep.c_w / 10000.0 * (1 + 1e-9));
}

TEST_CASE("criterion_report") {
    const uint64_t N = 20000;
    SUBCASE("parity obstruction flags hypothesis failure") {
        BoundedSequence seq(10000000, [](uint64_t n) { return cplx{n % 2 ? -1.0 : 1.0, 0}; });
        CriterionReport rep = criterion_report(seq, 0.3, N, 16, 7);
        // odd q1, q2: a_{n q1} conj(a_{n q2}) = (-1)^{n(q1+q2)} = 1
        CHECK(rep.max_bilinear_over_N == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(!rep.hypothesis_holds);
        CHECK(rep.implication_ok);  // vacuous
    }
    SUBCASE("badly approximable rotation keeps both sides small") {
        double alpha = (std::sqrt(5.0) - 1) / 2;
        BoundedSequence seq(10000000, [&](uint64_t n) { return e_of(alpha * n); });
        CriterionReport rep = criterion_report(seq, 0.3, N, 16, 7);
        CHECK(rep.max_bilinear_over_N <= 0.05);
        CHECK(rep.semiprime_average <= 0.05);
        CHECK(rep.rows.size() >= 4);
    }
    SUBCASE("deterministic for a fixed seed") {
        BoundedSequence seq(10000000, [](uint64_t n) { return e_of(0.37 * n); });
        CriterionReport a = criterion_report(seq, 0.3, N, 8, 3);
        CriterionReport b = criterion_report(seq, 0.3, N, 8, 3);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].q1 == b.rows[i].q1);
            CHECK(a.rows[i].bilinear_over_N == b.rows[i].bilinear_over_N);
        }
    }
}

TEST_CASE("twisted_sum") {
    const uint64_t N = 1000000;
    SUBCASE("trivial twist") {
        BoundedSequence one = BoundedSequence::constant_one(N);
        TwistedReport rep = twisted_sum(one, [](uint64_t) { return cplx{1, 0}; }, N);
        CHECK(rep.sum.real() == doctest::Approx(static_cast<double>(N)));
    }
    SUBCASE("Mertens via the Mobius twist") {
        auto mu = mobius_upto(N);
        BoundedSequence one = BoundedSequence::constant_one(N);
        TwistedReport rep = twisted_sum(
            one, [&](uint64_t n) { return cplx{static_cast<double>(mu[n]), 0}; }, N);
        CHECK(std::abs(rep.sum.real()) == doctest::Approx(212.0).epsilon(1e-9));
        CHECK(rep.window_lo >= 3.0);
        CHECK(rep.window_hi <= std::pow(static_cast<double>(N), 1.0 / 3.0) + 1e-9);
    }
    SUBCASE("quadratic character twist cancels periodically") {
        auto cs = characters_mod(5);
        const DirichletCharacter* quad = nullptr;
        for (const auto& chi : cs)
            if (chi.is_quadratic()) quad = &chi;
        REQUIRE(quad);
        BoundedSequence one = BoundedSequence::constant_one(N);
        TwistedReport rep = twisted_sum(one, [&](uint64_t n) { return (*quad)(n); }, N);
        CHECK(std::abs(rep.sum) <= 4.0);
    }
    SUBCASE("non-multiplicative twists are rejected") {
        BoundedSequence one = BoundedSequence::constant_one(N);
        CHECK_THROWS_AS(
            twisted_sum(one, [](uint64_t n) { return cplx{1.0 / (1.0 + n), 0}; }, N),
            std::invalid_argument);
    }
}
