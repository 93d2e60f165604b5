#include "horolab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "horolab/errors.hpp"
#include "horolab/sieve.hpp"

namespace horolab {

namespace {

// Product-function continuous average along the diagonal flow of a pair.
double pair_continuous_average(const SurfacePoint& x, const SurfacePoint& y,
                               const TestFunction& fx, const TestFunction& fy, double T,
                               double step) {
    uint64_t n = static_cast<uint64_t>(std::floor(T / step));
    SurfacePoint px = flow_point(x, 0.5 * step);
    SurfacePoint py = flow_point(y, 0.5 * step);
    std::vector<double> vals;
    vals.reserve(n);
    vals.push_back(fx(px) * fy(py));
    for (uint64_t k = 1; k < n; ++k) {
        px = flow_point(px, step);
        py = flow_point(py, step);
        vals.push_back(fx(px) * fy(py));
    }
    return pairwise_sum<double>(vals) / static_cast<double>(n);
}

} // namespace

double graph_distance(const SurfacePoint& u, const SurfacePoint& v, const CommElement& E,
                      double T, int samples, uint64_t seed, uint64_t index_cap) {
    CosetDecomposition cosets = comm_cosets(E, index_cap);
    GroupElement beta = E.beta();
    Rng rng(seed);
    double worst = 0;
    for (int k = 0; k < samples; ++k) {
        double r = rng.uniform(0.0, T);
        SurfacePoint us = flow_point(u, r);
        SurfacePoint vs = flow_point(v, r);
        double best_sheet = std::numeric_limits<double>::infinity();
        for (const Mat2q& delta : cosets.reps) {
            // BFS reps are right-coset representatives; the graph sheets
            // Delta_i beta Gamma need left-coset ones, i.e. the inverses
            Mat2q di = delta.inverse();
            GroupElement dg =
                GroupElement::raw(di.a.get_d(), di.b.get_d(), di.c.get_d(), di.d.get_d());
            best_sheet = std::min(best_sheet, dist_surface(vs, reduce(us.rep * dg * beta)));
            if (best_sheet < 1e-12) break;
        }
        worst = std::max(worst, best_sheet);
    }
    return worst;
}

TrichotomyReport classify_pair(const SurfacePoint& x, uint64_t p, uint64_t q, double T,
                               const ClassifierParams& params) {
    if (p == q || p < 2 || q < 2) throw std::invalid_argument("classify_pair: p != q primes");
    if (T < 1e3) throw std::invalid_argument("classify_pair: T >= 1e3");
    TrichotomyReport rep;
    rep.T = T;
    rep.R = params.effective_R(T);
    rep.delta = params.delta;
    rep.A1 = params.A1;
    rep.A2 = params.A2;
    rep.e1_threshold = params.e1_threshold;
    rep.e2_threshold = std::pow(rep.R, params.A1) * std::pow(T, -1.0 / params.A2);

    SurfacePoint xp = geodesic_point(x, -std::log(static_cast<double>(p)));
    SurfacePoint yq = geodesic_point(x, -std::log(static_cast<double>(q)));

    // E1: relative discrepancy of the pair average against the product-Haar
    // integral over a battery of positive-mass product bumps.  (Mean-zero
    // functions cannot tell equidistribution from cusp escape: both give 0.)
    Rng brng(params.seed ^ 0xe1);
    std::vector<TestFunction> battery;
    for (int i = 0; i < 3; ++i)
        battery.push_back(TestFunction::bump(brng.uniform(-0.15, 0.15), brng.uniform(1.3, 1.5),
                                             brng.uniform(0.0, kTwoPi), 0.3, 0.35, 1.5, false));
    double step = std::max(0.25, T / 200000.0);
    rep.discrepancy = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
        const TestFunction& fx = battery[i];
        const TestFunction& fy = battery[(i + 1) % battery.size()];
        double avg = pair_continuous_average(xp, yq, fx, fy, T, step);
        double target = fx.haar_integral() * fy.haar_integral();
        rep.discrepancy = std::max(rep.discrepancy, std::abs(avg - target) / target);
    }

    // E3: inj radius of (a_{-t} x a_{-t})(h_r x h_r)(x', y') against R^{A1} e^{-t}.
    Rng rng(params.seed ^ 0x5117);
    rep.e3_all_below = true;
    rep.inj_min = std::numeric_limits<double>::infinity();
    double tlo = std::log(rep.R), thi = std::log(T);
    for (int ri = 0; ri < 12; ++ri) {
        double r = rng.uniform(0.0, T);
        SurfacePoint ur = flow_point(xp, r);
        SurfacePoint vr = flow_point(yq, r);
        for (int tk = 0; tk < 8; ++tk) {
            double t = tlo + (thi - tlo) * tk / 7.0;
            double inj = std::min(injectivity_radius(geodesic_point(ur, -t)),
                                  injectivity_radius(geodesic_point(vr, -t)));
            rep.inj_min = std::min(rep.inj_min, inj);
            if (inj > std::pow(rep.R, params.A1) * std::exp(-t)) rep.e3_all_below = false;
        }
    }

    // E2: on a graph \{(xi, xi Delta_i beta)\} the cocycle us^{-1} vs equals
    // gamma_1 beta gamma_2, so sqrt(det) times it is an integer matrix.
    // Extract candidates by rounding sqrt(D) * cocycle over D <= det cap at a
    // few sampled times (the same search space as enumerating entries <= cap,
    // reached directly), then verify with full graph distances.
    double target_trace = (static_cast<double>(p) + static_cast<double>(q)) /
                          std::sqrt(static_cast<double>(p) * static_cast<double>(q));
    Rng srng(params.seed ^ 0xe2);
    std::vector<std::array<long, 4>> candidates;
    for (int k = 0; k < 4; ++k) {
        double r = srng.uniform(0.0, T);
        SurfacePoint us = flow_point(xp, r);
        SurfacePoint vs = flow_point(yq, r);
        GroupElement M = us.rep.inverse() * vs.rep;
        for (long D = 1; D <= params.e2_det_cap; ++D) {
            double s = std::sqrt(static_cast<double>(D));
            long a = std::lround(s * M.m11), b = std::lround(s * M.m12);
            long c = std::lround(s * M.m21), d = std::lround(s * M.m22);
            double miss = std::max({std::abs(s * M.m11 - a), std::abs(s * M.m12 - b),
                                    std::abs(s * M.m21 - c), std::abs(s * M.m22 - d)});
            if (miss > 0.02 * (1 + s)) continue;
            if (a * d - b * c != D) continue;
            long g = std::gcd(std::gcd(std::labs(a), std::labs(b)),
                              std::gcd(std::labs(c), std::labs(d)));
            if (g == 0) continue;
            a /= g; b /= g; c /= g; d /= g;
            long lead = a ? a : b ? b : c;
            if (lead < 0) { a = -a; b = -b; c = -c; d = -d; }
            if (std::max({std::labs(a), std::labs(b), std::labs(c), std::labs(d)}) >
                params.e2_entry_cap)
                continue;
            std::array<long, 4> cand{a, b, c, d};
            if (std::find(candidates.begin(), candidates.end(), cand) == candidates.end())
                candidates.push_back(cand);
        }
    }

    rep.e2_witness.reset();
    for (const auto& cand : candidates) {
        auto [a, b, c, d] = cand;
        Mat2q A{Rational(a), Rational(b), Rational(c), Rational(d)};
        CommElement E(A);
        uint64_t index;
        double worst;
        try {
            index = comm_index(E, params.e2_index_cap);
            worst = graph_distance(xp, yq, E, T, 10, params.seed ^ 0xe2d, params.e2_index_cap);
        } catch (const CapacityExceeded&) {
            continue;
        }
        double tr = std::abs(static_cast<double>(a + d)) /
                    std::sqrt(static_cast<double>(a * d - b * c));
        if (!rep.e2_witness || worst < rep.e2_witness->distance)
            rep.e2_witness = E2Witness{A, index, worst, std::abs(tr - target_trace)};
    }

    bool e1 = rep.discrepancy <= rep.e1_threshold;
    bool e2 = rep.e2_witness && rep.e2_witness->distance <= rep.e2_threshold;
    bool e3 = rep.e3_all_below;
    rep.verdict = e1   ? TrichotomyReport::Verdict::E1
                  : e2 ? TrichotomyReport::Verdict::E2Candidate
                  : e3 ? TrichotomyReport::Verdict::E3
                       : TrichotomyReport::Verdict::Inconclusive;
    return rep;
}

std::string TrichotomyReport::summary() const {
    std::ostringstream os;
    const char* names[] = {"E1", "E2-candidate", "E3", "inconclusive"};
    os << "verdict=" << names[static_cast<int>(verdict)] << " discrepancy=" << fmt_double(discrepancy)
       << " inj_min=" << fmt_double(inj_min)
       << " e2_distance=" << (e2_witness ? fmt_double(e2_witness->distance) : "none");
    return os.str();
}

std::string TrichotomyReport::detail() const {
    std::ostringstream os;
    os << summary() << '\n';
    os << "T:" << fmt_double(T) << '\n'
       << "R:" << fmt_double(R) << '\n'
       << "delta:" << fmt_double(delta) << '\n'
       << "A1:" << fmt_double(A1) << '\n'
       << "A2:" << fmt_double(A2) << '\n'
       << "e1_threshold:" << fmt_double(e1_threshold) << '\n'
       << "e2_threshold:" << fmt_double(e2_threshold) << '\n'
       << "e3_all_below:" << (e3_all_below ? 1 : 0) << '\n';
    if (e2_witness) {
        os << "e2_index:" << e2_witness->index << '\n'
           << "e2_trace_gap:" << fmt_double(e2_witness->trace_gap) << '\n';
    }
    return os.str();
}

DriftRecord fit_centralizer_drift(const SurfacePoint& x, const SurfacePoint& u, double T,
                                  double tolerance) {
    SurfaceDistance sd = dist_surface_witness(x, u);
    if (sd.dist > 0.1)
        throw std::invalid_argument("fit_centralizer_drift: points not close (dist > 0.1)");
    GroupElement M = x.rep * sd.gamma.inverse() * u.rep.inverse();
    if (std::abs(M.m12) > 0.1)
        throw std::invalid_argument("fit_centralizer_drift: cocycle not near lower-triangular");
    DriftRecord rec;
    rec.a = M.m11;
    rec.c = M.m21;
    rec.max_distance = 0;
    rec.failure_time = std::numeric_limits<double>::infinity();
    rec.ok = true;
    // log-spaced grid in [1, T]
    for (int k = 0; k <= 48; ++k) {
        double t = std::exp(std::log(T) * k / 48.0);
        double K = centralizer_shift(rec.a, rec.c, t);
        double d = dist_surface(flow_point(x, t), flow_point(u, t + K));
        rec.max_distance = std::max(rec.max_distance, d);
        if (d > tolerance) {
            rec.failure_time = std::min(rec.failure_time, t);
            rec.ok = false;
        }
    }
    return rec;
}

std::optional<HorocycleApproximant> closed_horocycle_approximant(const SurfacePoint& x, double T,
                                                                 double eta, double K) {
    if (T < 10 || K < 1 || K > T)
        throw std::invalid_argument("closed_horocycle_approximant: T >= 10, 1 <= K <= T");
    SurfacePoint yT = geodesic_point(x, -std::log(T));
    double exc = cusp_excursion(yT);
    if (exc <= 0.05) return std::nullopt;

    double Y = yT.z.imag();
    double xt = yT.z.real();
    GroupElement base = flow_a(-std::log(Y)) * flow_h(-xt);  // period 1/Y at unit scale
    SurfacePoint xi = reduce(flow_a(std::log(T)) * base);
    double period = T / Y;

    HorocycleApproximant out;
    out.xi = xi;
    out.period = period;
    out.excursion = exc;
    out.period_constant = period * std::exp(exc) / T;

    // align: coarse argmin of d(h_{s0} x, xi)
    double best_s0 = 0, best_d = std::numeric_limits<double>::infinity();
    double span = std::min(T, 4 * period);
    int grid = 400;
    for (int k = 0; k <= grid; ++k) {
        double s0 = span * k / grid;
        double d = dist_surface(flow_point(x, s0), xi);
        if (d < best_d) {
            best_d = d;
            best_s0 = s0;
        }
    }
    // refine
    double lo = best_s0 - span / grid, hi = best_s0 + span / grid;
    for (int k = 0; k <= 64; ++k) {
        double s0 = lo + (hi - lo) * k / 64.0;
        double d = dist_surface(flow_point(x, s0), xi);
        if (d < best_d) {
            best_d = d;
            best_s0 = s0;
        }
    }
    out.s0 = best_s0;

    int samples = 160;
    double exc_measure = 0, max_ok = 0;
    for (int k = 0; k <= samples; ++k) {
        double s = K * k / samples;
        double d = dist_surface(flow_point(x, best_s0 + s), flow_point(xi, s));
        if (d > eta)
            exc_measure += K / samples;
        else
            max_ok = std::max(max_ok, d);
    }
    out.max_distance = max_ok;
    out.exceptional_measure = exc_measure;
    return out;
}

double ShadowingDecomposition::reparam_time(std::size_t block, double t) const {
    const ShadowBlock& bl = blocks.at(block);
    return bl.scale * a * t / (a + c * t);
}

double ShadowingDecomposition::fraction_within_bound() const {
    uint64_t checked = 0, ok = 0;
    for (const auto& bl : blocks) {
        checked += bl.checked;
        ok += bl.ok;
    }
    return checked ? static_cast<double>(ok) / static_cast<double>(checked) : 1.0;
}

ShadowingDecomposition shadowing_decomposition(const SurfacePoint& x, const SurfacePoint& w,
                                               double period_w, double T,
                                               const ClassifierParams& params) {
    double close_bound = std::pow(T, -1 + 2 * params.A4 * params.delta);
    double per_bound = std::pow(T, 2 * params.A4 * params.delta);
    SurfaceDistance sd = dist_surface_witness(x, w);
    if (sd.dist >= close_bound)
        throw HypothesisViolation("shadowing_decomposition: dist(x, w) >= T^{-1+2 A4 delta}");
    if (period_w >= per_bound)
        throw HypothesisViolation("shadowing_decomposition: per(w) >= T^{2 A4 delta}");

    GroupElement wl = w.rep * sd.gamma;        // lift of w aligned with x
    GroupElement M = x.rep * wl.inverse();     // = [[a, b], [c, d]] near id
    ShadowingDecomposition dec;
    dec.a = M.m11;
    dec.b = M.m12;
    dec.c = M.m21;
    dec.d = M.m22;

    double thr = std::pow(T, -params.delta);
    if (std::abs(dec.c) > 0) {
        double t1 = (-thr - dec.a) / dec.c;
        double t2 = (thr - dec.a) / dec.c;
        dec.K_lo = std::max(-T, std::min(t1, t2));
        dec.K_hi = std::min(T, std::max(t1, t2));
        if (dec.K_lo > dec.K_hi) {
            dec.K_lo = 0;
            dec.K_hi = -1;
        }
        dec.K_bound = 2 * thr / std::abs(dec.c);
    } else {
        dec.K_lo = 0;
        dec.K_hi = -1;
        dec.K_bound = std::numeric_limits<double>::infinity();
    }

    double L = std::pow(T, 1 - params.A5 * params.delta);
    long imax = static_cast<long>(std::ceil(T / L));
    double logT_inv = 1.0 / std::log(T);
    Rng rng(params.seed ^ 0x5a);

    auto in_K = [&](double t) { return dec.K_lo <= dec.K_hi && t >= dec.K_lo && t <= dec.K_hi; };

    for (long i = -imax; i < imax; ++i) {
        double blo = std::max(-T, i * L);
        double bhi = std::min(T, (i + 1) * L);
        if (bhi <= blo) continue;
        // pick t_i inside the block but outside K
        double ti = blo;
        if (in_K(ti)) ti = std::min(bhi, dec.K_hi + 1e-9);
        if (in_K(ti) || ti >= bhi + 1e-9) continue;  // block swallowed by K
        double Ati = dec.a + dec.c * ti;
        if (std::abs(Ati) < thr) continue;

        ShadowBlock bl;
        bl.t_lo = blo;
        bl.t_hi = bhi;
        bl.t_i = ti;
        bl.scale = Ati * Ati;
        bl.period = bl.scale * period_w;
        double shift = Ati * (dec.b + (dec.d - dec.a) * ti);
        SurfacePoint wi = reduce(flow_a(2 * std::log(std::abs(Ati))) * wl);
        bl.w_i = flow_point(wi, shift);

        bl.checked = 0;
        bl.ok = 0;
        bl.max_checked_distance = 0;
        for (int s = 0; s < 8; ++s) {
            double t = blo + (bhi - blo) * rng.uniform();
            if (in_K(t)) continue;
            double At = dec.a + dec.c * t;
            if (std::abs(At) < thr) continue;
            double tau = bl.scale * dec.a * t / At;
            double d = dist_surface(flow_point(x, t), flow_point(bl.w_i, tau));
            ++bl.checked;
            if (d < logT_inv) ++bl.ok;
            bl.max_checked_distance = std::max(bl.max_checked_distance, d);
        }
        dec.blocks.push_back(std::move(bl));
    }
    return dec;
}

CirclePushforward circle_pushforward(const SurfacePoint& w, double R, const TestFunction& f,
                                     int modes) {
    if (R < 1 || modes < 1) throw std::invalid_argument("circle_pushforward: R >= 1, modes >= 1");
    CirclePushforward cp;
    cp.R = R;
    cp.modes = modes;
    int M = std::max(8 * modes, 256);
    std::vector<double> vals(M);
    SurfacePoint p = w;
    double step = R / M;
    for (int k = 0; k < M; ++k) {
        vals[k] = f(p);
        p = flow_point(p, step);
    }
    cp.coeffs.assign(2 * modes + 1, cplx{0, 0});
    for (int n = -modes; n <= modes; ++n) {
        std::vector<cplx> terms(M);
        for (int k = 0; k < M; ++k)
            terms[k] = vals[k] * e_of(-static_cast<double>(n) * k / static_cast<double>(M));
        cp.coeffs[static_cast<std::size_t>(n + modes)] =
            pairwise_sum<cplx>(terms) / static_cast<double>(M);
    }
    double power = 0, fpower = 0;
    for (const cplx& cpv : cp.coeffs) power += std::norm(cpv);
    for (double v : vals) fpower += v * v;
    cp.parseval_gap = std::abs(power - fpower / M);
    cp.tail_constant = 0;
    for (int n = modes / 2 + 1; n <= modes; ++n) {
        double nn = static_cast<double>(n) * n / (R * R);
        cp.tail_constant = std::max({cp.tail_constant, std::abs(cp.coeff(n)) * nn,
                                     std::abs(cp.coeff(-n)) * nn});
    }
    return cp;
}

PeriodicExperimentReport periodic_spnt_experiment(const SurfacePoint& x, const SurfacePoint& w,
                                                  double period_w, double T, const TestFunction& f,
                                                  const ClassifierParams& params) {
    PeriodicExperimentReport rep;
    rep.T = T;
    ShadowingDecomposition dec = shadowing_decomposition(x, w, period_w, T, params);

    uint64_t NT = static_cast<uint64_t>(T);
    rep.pi2_T = pi2(NT);
    rep.direct_total =
        birkhoff_average(x, f, TimeSampler::semiprimes(NT)) * static_cast<double>(rep.pi2_T);
    rep.haar_target = static_cast<double>(rep.pi2_T) * f.haar_integral();
    rep.discrepancy = std::abs(rep.direct_total - rep.haar_target) / static_cast<double>(rep.pi2_T);
    rep.short_period_flag =
        std::abs(circle_pushforward(w, period_w, f, 8).coeff(0));

    ExpsumParams eparams{T, params.delta, params.A5};
    rep.pipeline_total = 0;
    int modes = 24;

    for (std::size_t bi = 0; bi < dec.blocks.size(); ++bi) {
        const ShadowBlock& bl = dec.blocks[bi];
        if (bl.t_hi <= 4 || bl.t_lo >= T) continue;  // only [0, T] carries semiprimes
        uint64_t lo = static_cast<uint64_t>(std::max(4.0, std::ceil(bl.t_lo)));
        uint64_t hi = static_cast<uint64_t>(std::min(T, std::floor(bl.t_hi)));
        if (hi < lo) continue;

        PeriodicBlockRow row;
        row.block = bi;
        row.distance_max = bl.max_checked_distance;
        row.block_pi2 = static_cast<double>(pi2_interval(lo, hi));
        if (row.block_pi2 == 0) continue;

        // direct sum along the reparametrized shadow
        std::vector<double> direct_terms;
        for_each_semiprime_pair(lo, hi, [&](uint64_t, uint64_t, uint64_t pq) {
            double t = static_cast<double>(pq);
            double At = dec.a + dec.c * t;
            if (std::abs(At) < std::pow(T, -params.delta)) return;
            double tau = bl.scale * dec.a * t / At;
            direct_terms.push_back(f(flow_point(bl.w_i, tau)));
        });
        row.direct_sum = pairwise_sum<double>(direct_terms);

        PhaseModel model{dec.a, dec.c, 1.0 / bl.period, 0.0, static_cast<double>(lo),
                         static_cast<double>(hi)};
        ArcClassification arc = classify_arc(model, eparams);
        CirclePushforward cp = circle_pushforward(bl.w_i, bl.period, f, modes);
        row.bound = params.A6 * (params.delta + std::abs(cp.coeff(0))) * row.block_pi2;

        if (arc.kind == ArcClassification::Kind::Major) {
            row.arc = 'M';
            // residue path: position on the orbit from pq * b/r plus slow drift
            uint64_t r = arc.r;
            double drift = std::abs(model.scale() * model.beta - static_cast<double>(arc.b) / r);
            uint64_t pieces = std::min<uint64_t>(
                64, 1 + static_cast<uint64_t>(drift * static_cast<double>(hi - lo) * r / 0.01));
            uint64_t plen = (hi - lo) / pieces + 1;
            double estimate = 0;
            for (uint64_t ps = lo; ps <= hi; ps += plen) {
                uint64_t pe = std::min(hi, ps + plen - 1);
                // anchor: exact orbit position at the piece start
                double t0p = static_cast<double>(ps);
                double At0 = dec.a + dec.c * t0p;
                if (std::abs(At0) < std::pow(T, -params.delta)) continue;
                double pos0 = bl.scale * dec.a * t0p / At0;
                std::vector<uint64_t> counts(r, 0);
                for_each_semiprime_pair(ps, pe, [&](uint64_t, uint64_t, uint64_t pq) {
                    uint64_t v = (pq - ps) % r;
                    uint64_t u = (v * static_cast<uint64_t>(std::llabs(arc.b))) % r;
                    if (arc.b < 0) u = (r - u) % r;
                    ++counts[u];
                });
                for (uint64_t u = 0; u < r; ++u) {
                    if (!counts[u]) continue;
                    double pos = pos0 + static_cast<double>(u) * bl.period / static_cast<double>(r);
                    estimate += static_cast<double>(counts[u]) * f(flow_point(bl.w_i, pos));
                }
            }
            row.pipeline_estimate = estimate;
        } else {
            row.arc = 'm';
            // Fourier path: a_0 pi_2 + sum_n a_n * twisted semiprime phase sums
            cplx estimate = cp.coeff(0) * row.block_pi2;
            for (int n = 1; n <= modes; ++n) {
                PhaseSumReport pos = semiprime_phase_sum(model, n, eparams);
                PhaseSumReport neg = semiprime_phase_sum(model, -n, eparams);
                estimate += cp.coeff(n) * pos.sum + cp.coeff(-n) * neg.sum;
            }
            row.pipeline_estimate = estimate.real();
        }
        rep.pipeline_total += row.pipeline_estimate;
        rep.rows.push_back(row);
    }
    return rep;
}

void PeriodicExperimentReport::to_csv(std::ostream& os) const {
    os << "block_index,arc_kind,block_sum,block_bound,distance_max,block_pi2,direct_sum\n";
    for (const auto& r : rows)
        os << r.block << ',' << r.arc << ',' << fmt_double(r.pipeline_estimate) << ','
           << fmt_double(r.bound) << ',' << fmt_double(r.distance_max) << ','
           << fmt_double(r.block_pi2) << ',' << fmt_double(r.direct_sum) << '\n';
    os << "summary,direct_total," << fmt_double(direct_total) << '\n';
    os << "summary,pipeline_total," << fmt_double(pipeline_total) << '\n';
    os << "summary,pi2_T," << pi2_T << '\n';
    os << "summary,discrepancy," << fmt_double(discrepancy) << '\n';
    os << "summary,short_period_flag," << fmt_double(short_period_flag) << '\n';
}

double flow_vs_discrete_gap(const SurfacePoint& x, const SurfacePoint& y, const TestFunction& fx,
                            const TestFunction& fy, double T, double step) {
    double cont = pair_continuous_average(x, y, fx, fy, T, step);
    uint64_t N = static_cast<uint64_t>(T);
    SurfacePoint px = x, py = y;
    std::vector<double> vals;
    vals.reserve(N);
    for (uint64_t n = 1; n <= N; ++n) {
        px = flow_point(px, 1.0);
        py = flow_point(py, 1.0);
        vals.push_back(fx(px) * fy(py));
    }
    double disc = pairwise_sum<double>(vals) / static_cast<double>(N);
    return std::abs(cont - disc);
}

} // namespace horolab
