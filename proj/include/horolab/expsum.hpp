#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "horolab/spnt.hpp"
#include "horolab/util.hpp"

namespace horolab {

// Reparametrization data for the phase m_{mu,nu}(t) = mu t / (mu + nu t)
// pushed to the circle with frequency beta = 1/period.  [lo, hi] is the
// summation interval; t0 the time shift.  The pushforward scale
// (mu + nu (lo - t0))^2 plays the role of the (a + cM)^2 factor.
struct PhaseModel {
    double mu = 1;
    double nu = 0;
    double beta = 0;
    double t0 = 0;
    double lo = 0;
    double hi = 0;

    double length() const { return hi - lo; }
    double scale() const {
        double s = mu + nu * (lo - t0);
        return s * s;
    }
};

// Threshold bookkeeping shared by the arc classifier and the phase sums.
struct ExpsumParams {
    double T = 1e6;
    double delta = 0.01;
    double A5 = 1;

    double pole_threshold() const { return std::pow(T, -20 * A5 * delta); }
};

// m_{mu,nu}(t); throws std::domain_error at the pole.
double phase(const PhaseModel& model, double t);

// k-th derivative of m_{mu,nu}: (-1)^{k+1} k! mu^2 nu^{k-1} / (mu+nu t)^{k+1}.
double phase_derivative(const PhaseModel& model, int k, double t);

// Best rational approximation with denominator <= Q via continued fractions;
// gcd(b, r) = 1, r <= Q and |beta - b/r| <= 1/(r Q).
struct RationalApprox {
    int64_t b;
    uint64_t r;
    double error;
};
RationalApprox rational_approx(double beta, uint64_t Q);

struct ArcClassification {
    enum class Kind { Major, Minor } kind;
    int64_t b;
    uint64_t r;
    double quality;        // |scale * beta - b / r|
    double nu_threshold;   // T^{100 A5 delta} |I|^{-2}
    double r_lo, r_hi;     // minor denominator window [T^{1000 A5 d}, |I| T^{-1000 A5 d}]
    double quality_budget; // T^{1000 A5 delta} / (r |I|)
    bool minor_by_nu;
    bool minor_by_denominator;
};

// Minor iff |nu| exceeds its threshold or the Dirichlet approximant of the
// scaled frequency has denominator in the stated window at the stated
// quality.  All thresholds are carried in the result.
ArcClassification classify_arc(const PhaseModel& model, const ExpsumParams& params);

// sum over ordered prime pairs of e(n * scale * m(pq - t0) * beta) for
// pq in [lo, hi].  Points with |mu + nu (pq - t0)| below the pole threshold
// are excluded and counted.
struct PhaseSumReport {
    cplx sum;
    uint64_t terms;     // ordered pairs summed
    uint64_t excluded;  // pairs discarded near the pole
    bool pole_in_interval;
};
PhaseSumReport semiprime_phase_sum(const PhaseModel& model, int64_t n_twist,
                                   const ExpsumParams& params = {});

// Same phase, summed over every integer in [lo, hi] (the sums the van der
// Corput evaluators budget directly).
PhaseSumReport integer_phase_sum(const PhaseModel& model, int64_t n_twist,
                                 const ExpsumParams& params = {});

// Bound evaluators.  C(alpha) is a configured constant, default 10; it is
// always reported next to any use.
double vdc2_bound(double len, double lambda2, double alpha, double C = 10.0);
double vdc3_bound(double len, double lambda3, double alpha, double C = 10.0);

// (sqrt(q x) + x / sqrt(q) + x^{4/5}) log^2 x.
double vinogradov_bound(double x, uint64_t q);

// Exact sum_{p <= x} e(alpha p).
cplx prime_phase_sum(double alpha, uint64_t x);

// Range of |d^k/dt^k of the full phase| over the model interval (sampled at
// endpoints and a grid; used to feed the bound evaluators).
struct DerivativeRange {
    double min_abs;
    double max_abs;
};
DerivativeRange phase_derivative_range(const PhaseModel& model, int n_twist, int k,
                                       const ExpsumParams& params = {});

// Type-I / type-II split harness.
enum class CoeffMode { Ones, Random, Parity };

struct TypeBlockRow {
    uint64_t A, B;
    char kind;  // 'I' or 'T' (type-II)
    double magnitude_over_T;
    double short_cut_max;  // max over short pieces of |piece| / piece length
};
struct TypeSplitReport {
    std::vector<TypeBlockRow> rows;
    void to_csv(std::ostream& os) const;
};

TypeSplitReport type_split_harness(const BoundedSequence& seq, uint64_t lo, uint64_t hi,
                                   const std::vector<uint64_t>& A_list,
                                   const ExpsumParams& params = {}, uint64_t seed = 1,
                                   CoeffMode mode = CoeffMode::Random);

} // namespace horolab
