#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "horolab/surface.hpp"
#include "horolab/util.hpp"

namespace horolab {

// A sequence n -> a_n with |a_n| <= 1 on a finite index range.  Values are
// rechecked on every evaluation; a violation throws std::domain_error.
class BoundedSequence {
public:
    BoundedSequence(uint64_t limit, std::function<cplx(uint64_t)> eval);

    cplx operator()(uint64_t n) const;
    uint64_t limit() const { return limit_; }

    static BoundedSequence constant_one(uint64_t limit);

private:
    uint64_t limit_;
    std::function<cplx(uint64_t)> eval_;
};

// a_n = f(h_n x) with an internal multi-track orbit cache, so ascending and
// arithmetic-progression access patterns cost O(1) flow steps per term.
BoundedSequence dynamics_sequence(const SurfacePoint& x, const TestFunction& f, uint64_t limit);

// C-infinity plateau window: supported in (0, 1), identically 1 on
// (eta, 1 - eta), values in [0, 1].
class SmoothWindow {
public:
    explicit SmoothWindow(double eta);
    double operator()(double x) const;
    double eta() const { return eta_; }
    // ||W''||_1 by second differences; the Mellin constant C_W.
    double second_derivative_l1() const;

private:
    double eta_;
};

// Dyadic partition of unity: K supported in (1, 4) subset of (1/2, 5) with
// sum over all integer powers P = 2^j of K(x / P) equal to 1 for every x > 0.
class DyadicPartition {
public:
    double operator()(double x) const;
    // sum_{j} K(n / 2^j); equals 1 within 1e-9 for integers n >= 1.
    double partition_sum(double n) const;
    // indices j with K(n / 2^j) != 0.
    std::pair<int, int> block_range(double n) const;
};

// Primes in [exp(log^eps N), exp(log^{1-eps} N)].  The paper's side condition
// exp(log^eps N) > (log N)^1000 is vacuous at desk scale and only reported
// (both sides as log10).  Throws EmptyWindow when no prime lies inside.
struct PrimeWindow {
    double lo, hi;
    double log10_side_lhs;  // log10 exp(log^eps N)
    double log10_side_rhs;  // log10 (log N)^1000
    std::vector<uint64_t> primes;
};
PrimeWindow eligible_primes(double epsilon, uint64_t N);

// sum_{n <= N} a_{n q1} conj(a_{n q2}), pairwise summation.  Requires
// N * max(q1, q2) <= seq.limit().
cplx bilinear_sum(const BoundedSequence& seq, uint64_t q1, uint64_t q2, uint64_t N);

// Smoothed double sum over ordered prime pairs with its dyadic block
// decomposition and the fringe comparison against the sharp-cutoff sum.
struct SmoothedBlock {
    double P, Q;
    cplx sum;
};
struct SmoothedSumReport {
    cplx total;                  // sum a_{pq} W(pq / N)
    cplx unsmoothed;             // sum over pq <= N of a_{pq}
    uint64_t fringe_pairs;       // ordered pairs with pq/N outside (eta, 1-eta)
    std::vector<SmoothedBlock> blocks;
    double block_recombination_gap;  // |sum of blocks - total|

    double block_magnitude_sum() const;
};
SmoothedSumReport smoothed_semiprime_sum(const BoundedSequence& seq, uint64_t N,
                                         const SmoothWindow& W, const DyadicPartition& K);

// |W~(it)| against the C_W / (1 + t^2) budget.
struct MellinRow {
    double t;
    double magnitude;
    double bound;
    bool ok;
};
struct MellinReport {
    double c_w;
    std::vector<MellinRow> rows;
    bool all_ok;
};
MellinReport mellin_decay_check(const SmoothWindow& W, const std::vector<double>& t_grid);

// The bilinear-criterion experiment: sampled eligible pairs, the hypothesis
// side max/mean |bilinear|/N, and the conclusion side |sum a_pq| / pi_2(N).
struct CriterionPairRow {
    uint64_t q1, q2;
    double bilinear_over_N;
};
struct CriterionReport {
    double window_lo, window_hi;
    std::vector<CriterionPairRow> rows;
    double max_bilinear_over_N = 0;
    double mean_bilinear_over_N = 0;
    double semiprime_average;  // |sum_{pq<=N} a_pq| / pi_2(N)
    double hypothesis_threshold;
    double conclusion_threshold;
    bool hypothesis_holds;
    bool conclusion_holds;
    bool implication_ok;  // hypothesis_holds => conclusion_holds

    void to_csv(std::ostream& os) const;
};
CriterionReport criterion_report(const BoundedSequence& seq, double epsilon, uint64_t N,
                                 uint64_t sample_pairs, uint64_t seed = 1);

// sum_{n <= N} nu(n) a_n for multiplicative |nu| <= 1 (multiplicativity is
// spot-checked on coprime pairs), plus bilinear sums in the secondary window
// [e^{(logloglog N)^3}, e^{(loglog N)^10}] clamped to [3, N^{1/3}].
struct TwistedRow {
    uint64_t q1, q2;
    uint64_t M;
    double bilinear_over_M;
};
struct TwistedReport {
    cplx sum;
    double window_lo, window_hi;
    std::vector<TwistedRow> secondary;
};
TwistedReport twisted_sum(const BoundedSequence& seq,
                          const std::function<cplx(uint64_t)>& nu, uint64_t N,
                          uint64_t seed = 1);

} // namespace horolab
