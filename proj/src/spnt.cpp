#include "horolab/spnt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "horolab/errors.hpp"
#include "horolab/sieve.hpp"

namespace horolab {

namespace {

// exp(-1/u) continued by 0.
double gexp(double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; }

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smoothstep(double u) {
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    double a = gexp(u);
    return a / (a + gexp(1 - u));
}

// 1 for x <= 1, 0 for x >= 2.
double eta_cut(double x) { return 1.0 - smoothstep(x - 1.0); }

// Composite 8-point Gauss-Legendre.
template <typename F>
double integrate(F&& f, double a, double b, int panels) {
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    double h = (b - a) / panels;
    double acc = 0;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h, half = 0.5 * h;
        for (int i = 0; i < 4; ++i)
            acc += ws[i] * (f(mid + half * xs[i]) + f(mid - half * xs[i])) * half;
    }
    return acc;
}

} // namespace

// ---------------------------------------------------------------------------
// BoundedSequence

BoundedSequence::BoundedSequence(uint64_t limit, std::function<cplx(uint64_t)> eval)
    : limit_(limit), eval_(std::move(eval)) {
    if (limit_ == 0) throw std::invalid_argument("BoundedSequence: empty domain");
}

cplx BoundedSequence::operator()(uint64_t n) const {
    if (n == 0 || n > limit_) throw std::invalid_argument("BoundedSequence: index out of domain");
    cplx v = eval_(n);
    if (std::norm(v) > 1.0 + 3e-9)
        throw std::domain_error("BoundedSequence: |a_n| exceeds 1");
    return v;
}

BoundedSequence BoundedSequence::constant_one(uint64_t limit) {
    return {limit, [](uint64_t) { return cplx{1, 0}; }};
}

BoundedSequence dynamics_sequence(const SurfacePoint& x, const TestFunction& f, uint64_t limit) {
    struct Track {
        uint64_t n = 0;
        SurfacePoint p;
        uint64_t used = 0;
    };
    struct Cache {
        std::vector<Track> tracks;
        uint64_t clock = 0;
    };
    auto cache = std::make_shared<Cache>();
    SurfacePoint base = x;
    return {limit, [cache, base, f](uint64_t n) {
                Track* src = nullptr;
                for (auto& t : cache->tracks)
                    if (t.n <= n && (!src || t.n > src->n)) src = &t;
                SurfacePoint p = src ? src->p : base;
                uint64_t at = src ? src->n : 0;
                if (n > at) p = flow_point(p, static_cast<double>(n - at));
                ++cache->clock;
                if (src && src->n == n) {
                    src->used = cache->clock;
                } else if (cache->tracks.size() < 8) {
                    cache->tracks.push_back({n, p, cache->clock});
                } else {
                    Track* lru = &cache->tracks[0];
                    for (auto& t : cache->tracks)
                        if (t.used < lru->used) lru = &t;
                    *lru = {n, p, cache->clock};
                }
                return cplx{f(p), 0.0};
            }};
}

// ---------------------------------------------------------------------------
// SmoothWindow / DyadicPartition

SmoothWindow::SmoothWindow(double eta) : eta_(eta) {
    if (!(eta > 0 && eta < 0.5)) throw std::invalid_argument("SmoothWindow: eta in (0, 1/2)");
}

double SmoothWindow::operator()(double x) const {
    if (x <= 0 || x >= 1) return 0.0;
    return smoothstep(x / eta_) * smoothstep((1 - x) / eta_);
}

double SmoothWindow::second_derivative_l1() const {
    const double h = 1e-5;
    auto wpp = [&](double x) {
        return std::abs(((*this)(x + h) - 2 * (*this)(x) + (*this)(x - h)) / (h * h));
    };
    return integrate(wpp, 1e-4, 1 - 1e-4, 4000);
}

double DyadicPartition::operator()(double x) const {
    if (x <= 1 || x >= 4) return 0.0;
    return eta_cut(x / 2) - eta_cut(x);
}

std::pair<int, int> DyadicPartition::block_range(double n) const {
    // K(n / 2^j) != 0 needs 2^j in (n/4, n)
    int lo = static_cast<int>(std::floor(std::log2(n / 4.0))) - 1;
    int hi = static_cast<int>(std::ceil(std::log2(n))) + 1;
    return {lo, hi};
}

double DyadicPartition::partition_sum(double n) const {
    auto [lo, hi] = block_range(n);
    double acc = 0;
    for (int j = lo; j <= hi; ++j) acc += (*this)(n / std::ldexp(1.0, j));
    return acc;
}

// ---------------------------------------------------------------------------
// Windows and sums

PrimeWindow eligible_primes(double epsilon, uint64_t N) {
    if (!(epsilon > 0 && epsilon < 0.5))
        throw std::invalid_argument("eligible_primes: epsilon in (0, 1/2)");
    if (N < 16) throw std::invalid_argument("eligible_primes: N >= 16");
    double logN = std::log(static_cast<double>(N));
    PrimeWindow w;
    w.lo = std::exp(std::pow(logN, epsilon));
    w.hi = std::exp(std::pow(logN, 1 - epsilon));
    w.log10_side_lhs = std::pow(logN, epsilon) / std::numbers::ln10;
    w.log10_side_rhs = 1000.0 * std::log10(logN);
    if (w.hi > 5e7) throw CapacityExceeded("eligible_primes: window top > 5e7");
    auto ps = primes_upto(static_cast<uint64_t>(w.hi));
    for (uint64_t p : ps)
        if (static_cast<double>(p) >= w.lo) w.primes.push_back(p);
    if (w.primes.empty()) throw EmptyWindow("eligible_primes: no primes in window");
    return w;
}

cplx bilinear_sum(const BoundedSequence& seq, uint64_t q1, uint64_t q2, uint64_t N) {
    if (q1 < 1 || q2 < 1) throw std::invalid_argument("bilinear_sum: q >= 1");
    if (N * std::max(q1, q2) > seq.limit())
        throw std::invalid_argument("bilinear_sum: N * max(q1, q2) exceeds the sequence domain");
    return pairwise_sum_fn<cplx>(1, N + 1, [&](uint64_t n) {
        return seq(n * q1) * std::conj(seq(n * q2));
    });
}

double SmoothedSumReport::block_magnitude_sum() const {
    double acc = 0;
    for (const auto& b : blocks) acc += std::abs(b.sum);
    return acc;
}

SmoothedSumReport smoothed_semiprime_sum(const BoundedSequence& seq, uint64_t N,
                                         const SmoothWindow& W, const DyadicPartition& K) {
    if (N > seq.limit()) throw std::invalid_argument("smoothed_semiprime_sum: N exceeds domain");
    SmoothedSumReport rep;
    auto stream = semiprimes_upto(N);

    std::map<std::pair<int, int>, cplx> blocks;
    std::vector<cplx> tot_terms, raw_terms;
    tot_terms.reserve(stream.pairs.size());
    raw_terms.reserve(stream.pairs.size());
    rep.fringe_pairs = 0;

    double eta = W.eta();
    for (auto [p32, q32] : stream.pairs) {
        uint64_t p = p32, q = q32, pq = p * q;
        double u = static_cast<double>(pq) / static_cast<double>(N);
        cplx a = seq(pq);
        double w = W(u);
        raw_terms.push_back(a);
        tot_terms.push_back(a * w);
        if (!(u > eta && u < 1 - eta)) ++rep.fringe_pairs;
        if (w != 0.0) {
            auto [plo, phi_] = K.block_range(static_cast<double>(p));
            auto [qlo, qhi_] = K.block_range(static_cast<double>(q));
            for (int j1 = plo; j1 <= phi_; ++j1) {
                double kp = K(static_cast<double>(p) / std::ldexp(1.0, j1));
                if (kp == 0.0) continue;
                for (int j2 = qlo; j2 <= qhi_; ++j2) {
                    double kq = K(static_cast<double>(q) / std::ldexp(1.0, j2));
                    if (kq == 0.0) continue;
                    blocks[{j1, j2}] += a * (w * kp * kq);
                }
            }
        }
    }
    rep.total = pairwise_sum<cplx>(tot_terms);
    rep.unsmoothed = pairwise_sum<cplx>(raw_terms);
    cplx block_sum = 0;
    for (const auto& [key, val] : blocks) {
        rep.blocks.push_back({std::ldexp(1.0, key.first), std::ldexp(1.0, key.second), val});
        block_sum += val;
    }
    rep.block_recombination_gap = std::abs(block_sum - rep.total);
    return rep;
}

MellinReport mellin_decay_check(const SmoothWindow& W, const std::vector<double>& t_grid) {
    MellinReport rep;
    rep.c_w = W.second_derivative_l1();
    // substitute x = e^{-u}: W~(it) = int_0^umax W(e^{-u}) e^{-i t u} du
    double umax = std::log(2000.0 / W.eta());
    for (double t : t_grid) {
        if (!std::isfinite(t)) throw std::invalid_argument("mellin_decay_check: non-finite t");
        int panels = std::max(64, static_cast<int>(std::abs(t) * umax / 2.0));
        if (panels > 200000) throw CapacityExceeded("mellin_decay_check: t too large for quadrature");
        double re = integrate([&](double u) { return W(std::exp(-u)) * std::cos(t * u); }, 0.0,
                              umax, panels);
        double im = integrate([&](double u) { return -W(std::exp(-u)) * std::sin(t * u); }, 0.0,
                              umax, panels);
        double mag = std::hypot(re, im);
        double bound = rep.c_w / (1 + t * t);
        rep.rows.push_back({t, mag, bound, mag <= bound * (1 + 1e-9)});
    }
    rep.all_ok = std::all_of(rep.rows.begin(), rep.rows.end(), [](const MellinRow& r) { return r.ok; });
    return rep;
}

CriterionReport criterion_report(const BoundedSequence& seq, double epsilon, uint64_t N,
                                 uint64_t sample_pairs, uint64_t seed) {
    PrimeWindow w = eligible_primes(epsilon, N);
    std::vector<std::pair<uint64_t, uint64_t>> pairs;
    for (std::size_t i = 0; i < w.primes.size(); ++i)
        for (std::size_t j = i + 1; j < w.primes.size(); ++j) {
            if (w.primes[j] > 5 * w.primes[i]) break;
            pairs.emplace_back(w.primes[i], w.primes[j]);
        }
    if (pairs.empty()) throw EmptyWindow("criterion_report: no eligible pairs");
    if (pairs.size() > sample_pairs) {
        Rng rng(seed);
        std::vector<std::pair<uint64_t, uint64_t>> chosen;
        for (uint64_t k = 0; k < sample_pairs; ++k)
            chosen.push_back(pairs[rng.below(pairs.size())]);
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
        pairs = std::move(chosen);
    }

    CriterionReport rep;
    rep.window_lo = w.lo;
    rep.window_hi = w.hi;
    double acc = 0;
    for (auto [q1, q2] : pairs) {
        double v = std::abs(bilinear_sum(seq, q1, q2, N)) / static_cast<double>(N);
        rep.rows.push_back({q1, q2, v});
        rep.max_bilinear_over_N = std::max(rep.max_bilinear_over_N, v);
        acc += v;
    }
    rep.mean_bilinear_over_N = acc / static_cast<double>(pairs.size());

    auto prods = semiprime_products(N);
    cplx s = 0;
    uint64_t count = 0;
    std::vector<cplx> terms;
    terms.reserve(prods.size());
    for (auto [pq, mult] : prods) {
        terms.push_back(static_cast<double>(mult) * seq(pq));
        count += mult;
    }
    s = pairwise_sum<cplx>(terms);
    rep.semiprime_average = std::abs(s) / static_cast<double>(count);

    double logN = std::log(static_cast<double>(N));
    rep.hypothesis_threshold = 1.0 / (logN * logN);  // desk-scale proxy for (log N)^{-100}
    rep.conclusion_threshold = 4.0 * epsilon;
    rep.hypothesis_holds = rep.max_bilinear_over_N <= rep.hypothesis_threshold;
    rep.conclusion_holds = rep.semiprime_average <= rep.conclusion_threshold;
    rep.implication_ok = !rep.hypothesis_holds || rep.conclusion_holds;
    return rep;
}

void CriterionReport::to_csv(std::ostream& os) const {
    os << "q1,q2,bilinear_over_N\n";
    for (const auto& r : rows)
        os << r.q1 << ',' << r.q2 << ',' << fmt_double(r.bilinear_over_N) << '\n';
    os << "summary,max," << fmt_double(max_bilinear_over_N) << '\n';
    os << "summary,mean," << fmt_double(mean_bilinear_over_N) << '\n';
    os << "summary,semiprime_average," << fmt_double(semiprime_average) << '\n';
    os << "summary,hypothesis_threshold," << fmt_double(hypothesis_threshold) << '\n';
    os << "summary,conclusion_threshold," << fmt_double(conclusion_threshold) << '\n';
    os << "summary,hypothesis_holds," << (hypothesis_holds ? 1 : 0) << '\n';
    os << "summary,conclusion_holds," << (conclusion_holds ? 1 : 0) << '\n';
    os << "summary,implication_ok," << (implication_ok ? 1 : 0) << '\n';
}

TwistedReport twisted_sum(const BoundedSequence& seq, const std::function<cplx(uint64_t)>& nu,
                          uint64_t N, uint64_t seed) {
    if (N > seq.limit()) throw std::invalid_argument("twisted_sum: N exceeds domain");
    // multiplicativity spot check on coprime pairs
    Rng rng(seed ^ 0xabcdef);
    for (int trial = 0; trial < 200; ++trial) {
        uint64_t m = 1 + rng.below(static_cast<uint64_t>(std::sqrt(static_cast<double>(N))));
        uint64_t n = 1 + rng.below(static_cast<uint64_t>(std::sqrt(static_cast<double>(N))));
        if (std::gcd(m, n) != 1) continue;
        cplx lhs = nu(m * n), rhs = nu(m) * nu(n);
        if (std::abs(lhs - rhs) > 1e-9)
            throw std::invalid_argument("twisted_sum: nu is not multiplicative");
        if (std::norm(nu(m)) > 1 + 1e-9)
            throw std::invalid_argument("twisted_sum: |nu| exceeds 1");
    }

    TwistedReport rep;
    rep.sum = pairwise_sum_fn<cplx>(1, N + 1, [&](uint64_t n) { return nu(n) * seq(n); });

    double logN = std::log(static_cast<double>(N));
    double lll = std::log(std::log(logN));
    double ll = std::log(logN);
    rep.window_lo = std::max(3.0, std::exp(lll * lll * lll));
    rep.window_hi = std::min(std::pow(static_cast<double>(N), 1.0 / 3.0),
                             std::exp(std::pow(ll, 10.0)));
    if (rep.window_hi >= rep.window_lo) {
        auto ps = primes_upto(static_cast<uint64_t>(rep.window_hi));
        std::vector<uint64_t> win;
        for (uint64_t p : ps)
            if (static_cast<double>(p) >= rep.window_lo) win.push_back(p);
        std::vector<std::pair<uint64_t, uint64_t>> pairs;
        for (std::size_t i = 0; i < win.size(); ++i)
            for (std::size_t j = i + 1; j < win.size(); ++j) {
                if (win[j] > 5 * win[i]) break;
                pairs.emplace_back(win[i], win[j]);
            }
        Rng prng(seed);
        for (int k = 0; k < 6 && !pairs.empty(); ++k) {
            auto [q1, q2] = pairs[prng.below(pairs.size())];
            uint64_t M = std::min(N, seq.limit() / q2);
            double v = std::abs(bilinear_sum(seq, q1, q2, M)) / static_cast<double>(M);
            rep.secondary.push_back({q1, q2, M, v});
        }
    }
    return rep;
}

} // namespace horolab
