#include "horolab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "horolab/errors.hpp"
#include "horolab/sieve.hpp"

namespace horolab {

double phase(const PhaseModel& model, double t) {
    double denom = model.mu + model.nu * t;
    if (std::abs(denom) < 1e-12) throw std::domain_error("phase: pole at mu + nu t = 0");
    return model.mu * t / denom;
}

double phase_derivative(const PhaseModel& model, int k, double t) {
    if (k < 1) throw std::invalid_argument("phase_derivative: k >= 1");
    double denom = model.mu + model.nu * t;
    if (std::abs(denom) < 1e-12) throw std::domain_error("phase_derivative: pole");
    double ck = (k % 2 ? 1.0 : -1.0) * std::tgamma(k + 1.0);
    return ck * model.mu * model.mu * std::pow(model.nu, k - 1) / std::pow(denom, k + 1);
}

RationalApprox rational_approx(double beta, uint64_t Q) {
    if (Q < 1) throw std::invalid_argument("rational_approx: Q >= 1");
    long double x = beta;
    int64_t p0 = 1, p1 = static_cast<int64_t>(std::floor(x));
    uint64_t q0 = 0, q1 = 1;
    long double frac = x - std::floor(x);
    for (int iter = 0; iter < 64 && frac > 1e-18L; ++iter) {
        long double inv = 1.0L / frac;
        long double a = std::floor(inv);
        if (a > 1e18L) break;
        uint64_t q2 = static_cast<uint64_t>(a) * q1 + q0;
        if (q2 > Q) break;
        int64_t p2 = static_cast<int64_t>(a) * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = inv - a;
    }
    double err = std::abs(beta - static_cast<double>(p1) / static_cast<double>(q1));
    return {p1, q1, err};
}

ArcClassification classify_arc(const PhaseModel& model, const ExpsumParams& params) {
    double len = model.length();
    if (!(len > 1)) throw std::invalid_argument("classify_arc: empty interval");
    ArcClassification out;
    double e1000 = std::pow(params.T, 1000 * params.A5 * params.delta);
    out.nu_threshold = std::pow(params.T, 100 * params.A5 * params.delta) / (len * len);
    out.r_lo = e1000;
    out.r_hi = len / e1000;
    uint64_t Q = static_cast<uint64_t>(std::max(1.0, std::floor(out.r_hi)));
    RationalApprox approx = rational_approx(model.scale() * model.beta, Q);
    out.b = approx.b;
    out.r = approx.r;
    out.quality = approx.error;
    out.quality_budget = e1000 / (static_cast<double>(approx.r) * len);
    out.minor_by_nu = std::abs(model.nu) > out.nu_threshold;
    out.minor_by_denominator = static_cast<double>(approx.r) >= out.r_lo &&
                               static_cast<double>(approx.r) <= out.r_hi &&
                               out.quality <= out.quality_budget;
    out.kind = (out.minor_by_nu || out.minor_by_denominator) ? ArcClassification::Kind::Minor
                                                             : ArcClassification::Kind::Major;
    return out;
}

namespace {

PhaseSumReport phase_sum_impl(const PhaseModel& model, int64_t n_twist,
                              const ExpsumParams& params, bool semiprimes_only) {
    PhaseSumReport rep{};
    double thr = params.pole_threshold();
    if (model.nu != 0) {
        double pole_t = -model.mu / model.nu + model.t0;
        rep.pole_in_interval = pole_t >= model.lo && pole_t <= model.hi;
    } else {
        rep.pole_in_interval = false;
    }
    uint64_t lo = static_cast<uint64_t>(std::ceil(std::max(0.0, model.lo)));
    uint64_t hi = static_cast<uint64_t>(std::floor(model.hi));
    if (hi < lo) throw std::invalid_argument("phase sum: empty interval");

    std::vector<cplx> terms;
    double scale_beta = model.scale() * model.beta * static_cast<double>(n_twist);
    auto add = [&](uint64_t t_int) {
        double u = static_cast<double>(t_int) - model.t0;
        double denom = model.mu + model.nu * u;
        if (std::abs(denom) < thr) {
            ++rep.excluded;
            return;
        }
        terms.push_back(e_of(model.mu * u / denom * scale_beta));
    };
    if (semiprimes_only) {
        for_each_semiprime_pair(lo, hi, [&](uint64_t, uint64_t, uint64_t pq) { add(pq); });
    } else {
        for (uint64_t n = std::max<uint64_t>(lo, 1); n <= hi; ++n) add(n);
    }
    rep.terms = terms.size();
    rep.sum = pairwise_sum<cplx>(terms);
    return rep;
}

} // namespace

PhaseSumReport semiprime_phase_sum(const PhaseModel& model, int64_t n_twist,
                                   const ExpsumParams& params) {
    return phase_sum_impl(model, n_twist, params, true);
}

PhaseSumReport integer_phase_sum(const PhaseModel& model, int64_t n_twist,
                                 const ExpsumParams& params) {
    return phase_sum_impl(model, n_twist, params, false);
}

double vdc2_bound(double len, double lambda2, double alpha, double C) {
    if (len <= 0 || lambda2 < 0 || alpha < 1) throw std::invalid_argument("vdc2_bound: bad input");
    if (lambda2 == 0) return std::numeric_limits<double>::infinity();
    return C * (len * std::sqrt(lambda2) + 1.0 / std::sqrt(lambda2));
}

double vdc3_bound(double len, double lambda3, double alpha, double C) {
    if (len <= 0 || lambda3 < 0 || alpha < 1) throw std::invalid_argument("vdc3_bound: bad input");
    if (lambda3 == 0) return std::numeric_limits<double>::infinity();
    return C * (len * std::pow(lambda3, 1.0 / 6.0) + std::sqrt(len) * std::pow(lambda3, -1.0 / 6.0));
}

double vinogradov_bound(double x, uint64_t q) {
    if (x < 16 || q < 1) throw std::invalid_argument("vinogradov_bound: x >= 16, q >= 1");
    double lg = std::log(x);
    return (std::sqrt(static_cast<double>(q) * x) + x / std::sqrt(static_cast<double>(q)) +
            std::pow(x, 0.8)) *
           lg * lg;
}

cplx prime_phase_sum(double alpha, uint64_t x) {
    auto ps = primes_upto(x);
    std::vector<cplx> terms;
    terms.reserve(ps.size());
    for (uint64_t p : ps) terms.push_back(e_of(alpha * static_cast<double>(p)));
    return pairwise_sum<cplx>(terms);
}

DerivativeRange phase_derivative_range(const PhaseModel& model, int n_twist, int k,
                                       const ExpsumParams& params) {
    double thr = params.pole_threshold();
    double factor = std::abs(model.scale() * model.beta * n_twist);
    double lo_abs = std::numeric_limits<double>::infinity();
    double hi_abs = 0;
    const int samples = 257;
    for (int i = 0; i < samples; ++i) {
        double t = model.lo + (model.hi - model.lo) * i / (samples - 1);
        double u = t - model.t0;
        if (std::abs(model.mu + model.nu * u) < thr) continue;
        double d = std::abs(phase_derivative(model, k, u)) * factor;
        lo_abs = std::min(lo_abs, d);
        hi_abs = std::max(hi_abs, d);
    }
    return {lo_abs, hi_abs};
}

TypeSplitReport type_split_harness(const BoundedSequence& seq, uint64_t lo, uint64_t hi,
                                   const std::vector<uint64_t>& A_list,
                                   const ExpsumParams& params, uint64_t seed, CoeffMode mode) {
    if (hi <= lo) throw std::invalid_argument("type_split_harness: empty interval");
    TypeSplitReport rep;
    double T = static_cast<double>(hi);
    double cut = std::pow(T, 1.0 - 100 * params.A5 * params.delta);
    cut = std::min(std::max(cut, 64.0), static_cast<double>(hi - lo));
    uint64_t piece = static_cast<uint64_t>(cut);

    for (uint64_t A : A_list) {
        if (A < 1 || 2 * A > hi) continue;
        uint64_t B = 1;
        while (2 * B * 2 * A <= hi) B *= 2;  // dyadic co-range

        auto coeff = [&](uint64_t v, uint64_t salt) -> double {
            switch (mode) {
                case CoeffMode::Ones: return 1.0;
                case CoeffMode::Parity: return v % 2 ? -1.0 : 1.0;
                default: {
                    Rng rng(seed ^ (v * 0x9e3779b97f4a7c15ULL + salt));
                    return rng.below(2) ? 1.0 : -1.0;
                }
            }
        };

        bool type_one = static_cast<double>(A) <= std::pow(T, 0.35);
        std::vector<cplx> terms;
        double short_max = 0;
        for (uint64_t start = lo; start < hi; start += piece) {
            uint64_t stop = std::min(hi, start + piece);
            std::vector<cplx> piece_terms;
            for (uint64_t a = A; a < 2 * A; ++a) {
                double alpha_a = type_one ? 1.0 : coeff(a, 0x51);
                uint64_t bmin = std::max<uint64_t>(type_one ? 1 : B, (start + a - 1) / a);
                uint64_t bmax = stop / a;
                if (!type_one) bmax = std::min<uint64_t>(bmax, 2 * B - 1);
                for (uint64_t b = bmin; b <= bmax; ++b) {
                    uint64_t ab = a * b;
                    if (ab < start || ab >= stop || ab < 1 || ab > seq.limit()) continue;
                    double beta_b = type_one ? 1.0 : coeff(b, 0x52);
                    piece_terms.push_back(alpha_a * beta_b * seq(ab));
                }
            }
            if (!piece_terms.empty()) {
                cplx ps = pairwise_sum<cplx>(piece_terms);
                short_max = std::max(short_max, std::abs(ps) / static_cast<double>(stop - start));
                terms.push_back(ps);
            }
        }
        cplx total = pairwise_sum<cplx>(terms);
        rep.rows.push_back({A, type_one ? 0 : B, type_one ? 'I' : 'T',
                            std::abs(total) / T, short_max});
    }
    return rep;
}

void TypeSplitReport::to_csv(std::ostream& os) const {
    os << "A,B,kind,magnitude_over_T,short_cut_max\n";
    for (const auto& r : rows)
        os << r.A << ',' << r.B << ',' << r.kind << ',' << fmt_double(r.magnitude_over_T) << ','
           << fmt_double(r.short_cut_max) << '\n';
}

} // namespace horolab
