#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "horolab/sl2.hpp"
#include "horolab/util.hpp"

namespace horolab {

// A point of X = SL(2,R)/SL(2,Z), i.e. a right coset g*Gamma acted on by the
// flows from the left.  The stored representative is canonical: its
// half-plane coordinate z = rep^{-1}(i) lies in the standard fundamental
// domain, ties on the boundary prefer Re z >= 0, and the overall sign of the
// matrix is fixed lexicographically.  theta is the frame angle, doubled from
// the PSL(2) fiber so it is continuous across the -id identification and
// fills [0, 2*pi).
struct SurfacePoint {
    GroupElement rep;
    std::complex<double> z{0.0, 1.0};
    double theta = 0.0;

    double cusp_height() const { return z.imag(); }
};

// Canonical representative of g*Gamma via the Gauss translation/inversion
// algorithm on z = g^{-1}(i).  Idempotent; reduce(g * gamma) == reduce(g) for
// every integer gamma.
SurfacePoint reduce(const GroupElement& g);

// z and theta of an arbitrary (not necessarily reduced) representative.
std::complex<double> halfplane_coord(const GroupElement& g);
double frame_angle(const GroupElement& g);

// Quotient distance: min over enumerated gamma in SL(2,Z) of
// dist_group(x.rep, y.rep * gamma).  The enumeration is a box around the
// rounded cocycle y.rep^{-1} x.rep whose radius is derived from the best
// candidate found; entries are capped at B = 8 (||x|| + ||y||)^2, and a pair
// too deep in the cusp for the cap throws EnumerationExhausted.  Values
// above ~0.5 may be upper bounds only (the metric is local).
double dist_surface(const SurfacePoint& x, const SurfacePoint& y);

// Same, also returning the minimizing integer matrix gamma (ties resolved by
// smaller Frobenius norm of x.rep * gamma^{-1} * y.rep^{-1}, then
// lexicographically).
struct SurfaceDistance {
    double dist;
    GroupElement gamma;
};
SurfaceDistance dist_surface_witness(const SurfacePoint& x, const SurfacePoint& y);

// max(0, log(Im z / 2)); zero on the compact part (ceiling y0 = 2).
double cusp_excursion(const SurfacePoint& x);

// Half the minimal displacement dist_group(x.rep, x.rep * gamma) over
// nontrivial gamma (+-id excluded), found by a pruned exact enumeration in
// the cusp normal form.
double injectivity_radius(const SurfacePoint& x);

// reduce(h_t * x), splitting |t| > 1024 into re-reduced steps.
SurfacePoint flow_point(const SurfacePoint& x, double t);

// reduce(a_s * x).
SurfacePoint geodesic_point(const SurfacePoint& x, double s);

// reduce(a_{log R} h_s), an h-periodic point of period exactly R.
SurfacePoint make_periodic(double R, double s);

// Smooth compactly supported product bump in (Re z, Im z, theta), the test
// function family used throughout the experiments.  When mean_zero is set the
// theta factor is antisymmetrized by a half-turn so the Haar integral
// vanishes identically.
class TestFunction {
public:
    static TestFunction constant(double c);
    static TestFunction bump(double cx, double cy, double ctheta,
                             double rx, double ry, double rtheta,
                             bool mean_zero);

    double operator()(const SurfacePoint& x) const;
    bool is_constant() const { return kind_ == Kind::Constant; }
    bool is_mean_zero() const { return kind_ == Kind::Bump && mean_zero_; }

    // Deterministic quadrature of f against the normalized Haar measure
    // (3/pi) dx dy / y^2 * dtheta / (2 pi).  resolution scales the panel
    // count (used by the refined-quadrature oracle).
    double haar_integral(int resolution = 1) const;

    // Product-measure mass of the bump (same quadrature without the
    // mean-zero cancellation); used for calibration tests.
    double bump_mass(int resolution = 1) const;

    // Max |finite-difference partial| up to order k per axis: the C^k proxy
    // reported next to discrepancies (no Sobolev normalization is claimed).
    double ck_norm_proxy(int k) const;

    double cx() const { return cx_; }
    double cy() const { return cy_; }
    double ctheta() const { return ctheta_; }

private:
    enum class Kind { Constant, Bump };
    Kind kind_ = Kind::Constant;
    double const_value_ = 0.0;
    double cx_ = 0, cy_ = 0, ctheta_ = 0;
    double rx_ = 0, ry_ = 0, rtheta_ = 0;
    bool mean_zero_ = false;
};

// Seeded battery of mean-zero bumps with supports inside the fundamental
// domain.
std::vector<TestFunction> test_battery(uint64_t seed, int count);

// Orbit sampling times for Birkhoff averages.
struct TimeSampler {
    enum class Kind { Continuous, Integers, Primes, Semiprimes } kind;
    double T = 0;       // Continuous
    double step = 0.1;  // Continuous
    uint64_t N = 0;     // Integers / Primes / Semiprimes

    static TimeSampler continuous(double T, double step) {
        return {Kind::Continuous, T, step, 0};
    }
    static TimeSampler integers(uint64_t N) { return {Kind::Integers, 0, 0, N}; }
    static TimeSampler primes(uint64_t N) { return {Kind::Primes, 0, 0, N}; }
    static TimeSampler semiprimes(uint64_t N) { return {Kind::Semiprimes, 0, 0, N}; }
};

// Mean of f along the sampled orbit of x.  Semiprime times are ordered prime
// pairs (p, q), pq <= N, so the mean matches the double sum over p, q divided
// by pi_2(N).  Throws std::invalid_argument on an empty sampler.
double birkhoff_average(const SurfacePoint& x, const TestFunction& f, const TimeSampler& times);

// Averages a whole battery in one orbit walk (same samples for every f).
std::vector<double> birkhoff_average_battery(const SurfacePoint& x,
                                             const std::vector<TestFunction>& fs,
                                             const TimeSampler& times);

struct DecayRow {
    double T;
    double discrepancy;
    double cusp_excursion;
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double fitted_exponent = 0.0;  // slope of -log(disc) vs log(T)
    double ck_proxy = 0.0;

    void to_csv(std::ostream& os) const;
};

// Continuous-average discrepancy |avg_[0,T] f| for each T in an increasing
// grid, the cusp excursion of the geodesically renormalized point
// a_{-log T} x (the compression that turns the length-T orbit piece into a
// unit one), and a least-squares decay exponent.
DecayReport decay_experiment(const SurfacePoint& x, const TestFunction& f,
                             const std::vector<double>& T_grid);

// Seeded Haar-generic point: reduce(a_{s1} v_{s2} h_{s3}) with a pre-check
// that its continuous-orbit discrepancy decays (near-periodic seeds are
// skipped deterministically).
SurfacePoint generic_point(uint64_t seed);

} // namespace horolab
