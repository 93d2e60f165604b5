#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "horolab/expsum.hpp"
#include "horolab/quat.hpp"
#include "horolab/surface.hpp"

namespace horolab {

// Theorem-1.2-style constants; the paper only asserts existence, so these are
// configuration, and every verdict prints the thresholds it used.
struct ClassifierParams {
    double A1 = 2;
    double A2 = 4;
    double kappa = 0.1;
    double delta = 0.05;
    double A3 = 2;
    double A4 = 3;
    double A5 = 14;  // > 4 A4
    double A6 = 4;
    double R = 0;          // 0 means T^delta
    double e1_threshold = 0.1;
    int e2_entry_cap = 12;      // candidate integer matrices, |entries| <= cap
    int e2_det_cap = 144;       // and det <= cap
    uint64_t e2_index_cap = 200;
    uint64_t seed = 1;

    double effective_R(double T) const { return R > 0 ? R : std::pow(T, delta); }
};

struct E2Witness {
    Mat2q A;               // primitive commensurator matrix
    uint64_t index;
    double distance;       // orbit-to-graph distance achieved
    double trace_gap;      // |tr(beta) - (p+q)/sqrt(pq)|
};

struct TrichotomyReport {
    enum class Verdict { E1, E2Candidate, E3, Inconclusive } verdict;
    // E1 side: sup over a positive-mass product battery of
    // |time average - product Haar| / product Haar (relative, so cusp escape
    // reads as discrepancy 1, not 0)
    double discrepancy;
    double e1_threshold;
    double inj_min;           // E3 side: min inj radius margin observed
    bool e3_all_below;        // inj <= R^{A1} e^{-t} at every sampled (r, t)
    std::optional<E2Witness> e2_witness;
    double e2_threshold;
    double T, R, delta, A1, A2;

    std::string summary() const;
    std::string detail() const;
};

// Runs the three detectors on (x', y') = (a_{-log p} x, a_{-log q} x).
TrichotomyReport classify_pair(const SurfacePoint& x, uint64_t p, uint64_t q, double T,
                               const ClassifierParams& params = {});

// max over sampled orbit times of the distance from (h_r u, h_r v) to the
// graph \{(xi, xi Delta_i beta)\} of the commensurator element; the quantity
// the E2 witness reports.
double graph_distance(const SurfacePoint& u, const SurfacePoint& v, const CommElement& E,
                      double T, int samples = 10, uint64_t seed = 1,
                      uint64_t index_cap = 200);

// Fits the lower-triangular cocycle (a, c) from x.rep * u.rep^{-1}, predicts
// the centralizer drift K(t), and verifies
// dist(h_t x, h_{t + K(t)} u) <= tolerance on a grid up to T.
struct DriftRecord {
    double a, c;
    double max_distance;
    double failure_time;  // first grid time exceeding the tolerance; inf if none
    bool ok;
};
DriftRecord fit_centralizer_drift(const SurfacePoint& x, const SurfacePoint& u, double T,
                                  double tolerance = 1e-2);

// Closed-horocycle approximant of the orbit piece h_{[s0, s0+K]} x, built
// from the cusp data of the renormalized point a_{-log T} x.
struct HorocycleApproximant {
    SurfacePoint xi;    // exactly periodic point
    double period;
    double s0;
    double max_distance;      // outside the exceptional set
    double exceptional_measure;
    double excursion;         // d_Gamma(a_{-log T} x)
    double period_constant;   // C with period = C T exp(-excursion)
};
std::optional<HorocycleApproximant> closed_horocycle_approximant(const SurfacePoint& x, double T,
                                                                 double eta, double K);

// Lemma-style shadowing decomposition of [-T, T] into blocks on which h_t x
// tracks reparametrized shifts of a periodic orbit.
struct ShadowBlock {
    double t_lo, t_hi;
    double t_i;
    SurfacePoint w_i;          // shifted periodic approximant for this block
    double period;
    double scale;              // A(t_i)^2
    double max_checked_distance;
    uint64_t checked;
    uint64_t ok;               // samples within 1 / log T
};
struct ShadowingDecomposition {
    double a, b, c, d;
    double K_lo = 0, K_hi = -1;    // empty when K_lo > K_hi
    double K_bound;                // 2 T^{-delta} / |c|
    std::vector<ShadowBlock> blocks;
    double reparam_time(std::size_t block, double t) const;  // A(t_i)^2 a t / (a + c t)
    double fraction_within_bound() const;
};
ShadowingDecomposition shadowing_decomposition(const SurfacePoint& x, const SurfacePoint& w,
                                               double period_w, double T,
                                               const ClassifierParams& params = {});

// Fourier coefficients of t -> f(h_t w) on a period-R orbit, |n| <= modes,
// with the O(R^2 / n^2) tail constant fitted empirically.
struct CirclePushforward {
    double R;
    int modes;
    std::vector<cplx> coeffs;  // index n + modes
    double parseval_gap;
    double tail_constant;      // max_{modes/2 < |n|} |a_n| n^2 / R^2

    cplx coeff(int n) const { return coeffs[static_cast<std::size_t>(n + modes)]; }
};
CirclePushforward circle_pushforward(const SurfacePoint& w, double R, const TestFunction& f,
                                     int modes);

// The full periodic-orbit pipeline: shadowing decomposition, per-block arc
// classification, major-arc residue path, minor-arc Fourier path, and the
// direct orbit average as the oracle column.
struct PeriodicBlockRow {
    std::size_t block;
    char arc;                  // 'M' or 'm'
    double block_pi2;
    double direct_sum;         // sum over pq in the block of f(h_{A(pq - t0)} w_i)
    double pipeline_estimate;  // major: residue sums; minor: Fourier x phase sums
    double bound;              // budget for the estimate
    double distance_max;       // worst shadowing distance checked in the block
};
struct PeriodicExperimentReport {
    double T;
    double direct_total;       // sum over pq <= T of f(h_pq x)
    double pipeline_total;     // assembled from the blocks
    uint64_t pi2_T;
    double haar_target;        // pi2(T) * integral of f
    double discrepancy;        // |direct_total - haar_target| / pi2(T)
    double short_period_flag;  // K(1/per w): 1/per(w) term dominating short orbits
    std::vector<PeriodicBlockRow> rows;

    void to_csv(std::ostream& os) const;
};
PeriodicExperimentReport periodic_spnt_experiment(const SurfacePoint& x, const SurfacePoint& w,
                                                  double period_w, double T, const TestFunction& f,
                                                  const ClassifierParams& params = {});

// |(1/T) int_0^T f2(h_r x, h_r y) dr - (1/T) sum_{n <= T} f2(h_n x, h_n y)|
// for a product test function f2 = f (x) g.
double flow_vs_discrete_gap(const SurfacePoint& x, const SurfacePoint& y, const TestFunction& fx,
                            const TestFunction& fy, double T, double step = 0.25);

} // namespace horolab
