#include "horolab/quat.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "horolab/errors.hpp"
#include "horolab/util.hpp"

namespace horolab {

namespace {

bool squarefree(int64_t n) {
    n = std::abs(n);
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % (d * d) == 0) return false;
        while (n % d == 0) n /= d;
    }
    return true;
}

bool perfect_square(int64_t n) {
    if (n < 0) return false;
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    for (int64_t s = std::max<int64_t>(0, r - 2); s <= r + 2; ++s)
        if (s * s == n) return true;
    return false;
}

BigInt lcm_big(const BigInt& x, const BigInt& y) {
    BigInt g, l;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    l = x / g * y;
    return abs(l);
}

} // namespace

Mat2q Mat2q::inverse() const {
    Rational dt = det();
    if (dt == 0) throw std::invalid_argument("Mat2q: singular");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

Mat2q operator*(const Mat2q& x, const Mat2q& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

bool Mat2q::is_integral() const {
    return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 && d.get_den() == 1;
}

QuatAlgebra::QuatAlgebra(int64_t a_, int64_t b_) : a(a_), b(b_) {
    if (a <= 0 || perfect_square(a) || !squarefree(a))
        throw std::invalid_argument("QuatAlgebra: a must be a positive squarefree non-square");
    if (b == 0 || !squarefree(b))
        throw std::invalid_argument("QuatAlgebra: b must be squarefree and nonzero");
}

QuatElement quat_mul(const QuatElement& x, const QuatElement& y) {
    if (x.alg.a != y.alg.a || x.alg.b != y.alg.b)
        throw std::invalid_argument("quat_mul: mixed algebras");
    Rational a(x.alg.a), b(x.alg.b);
    QuatElement z{x.alg, 0, 0, 0, 0};
    z.x0 = x.x0 * y.x0 + a * x.x1 * y.x1 + b * x.x2 * y.x2 - a * b * x.x3 * y.x3;
    z.x1 = x.x0 * y.x1 + x.x1 * y.x0 - b * x.x2 * y.x3 + b * x.x3 * y.x2;
    z.x2 = x.x0 * y.x2 + x.x2 * y.x0 + a * x.x1 * y.x3 - a * x.x3 * y.x1;
    z.x3 = x.x0 * y.x3 + x.x3 * y.x0 + x.x1 * y.x2 - x.x2 * y.x1;
    return z;
}

Rational quat_norm(const QuatElement& x) {
    Rational a(x.alg.a), b(x.alg.b);
    return x.x0 * x.x0 - a * x.x1 * x.x1 - b * x.x2 * x.x2 + a * b * x.x3 * x.x3;
}

Rational quat_trace(const QuatElement& x) { return 2 * x.x0; }

QuadVal quad_mul(const QuadVal& x, const QuadVal& y, int64_t a) {
    return {x.u * y.u + Rational(a) * x.v * y.v, x.u * y.v + x.v * y.u};
}

QuadVal EmbeddedMatrix::det() const {
    QuadVal p = quad_mul(e11, e22, a);
    QuadVal q = quad_mul(e12, e21, a);
    return {p.u - q.u, p.v - q.v};
}

QuadVal EmbeddedMatrix::trace() const { return {e11.u + e22.u, e11.v + e22.v}; }

EmbeddedMatrix embed_phi(const QuatElement& x) {
    Rational b(x.alg.b);
    EmbeddedMatrix m;
    m.a = x.alg.a;
    m.e11 = {x.x0, x.x1};           // xi-bar = x0 + x1 sqrt a
    m.e12 = {x.x2, x.x3};           // eta
    m.e21 = {b * x.x2, -b * x.x3};  // b eta-bar
    m.e22 = {x.x0, -x.x1};          // xi
    return m;
}

EmbeddedMatrix embed_mul(const EmbeddedMatrix& x, const EmbeddedMatrix& y) {
    if (x.a != y.a) throw std::invalid_argument("embed_mul: mixed fields");
    auto add = [](const QuadVal& l, const QuadVal& r) { return QuadVal{l.u + r.u, l.v + r.v}; };
    EmbeddedMatrix m;
    m.a = x.a;
    m.e11 = add(quad_mul(x.e11, y.e11, x.a), quad_mul(x.e12, y.e21, x.a));
    m.e12 = add(quad_mul(x.e11, y.e12, x.a), quad_mul(x.e12, y.e22, x.a));
    m.e21 = add(quad_mul(x.e21, y.e11, x.a), quad_mul(x.e22, y.e21, x.a));
    m.e22 = add(quad_mul(x.e21, y.e12, x.a), quad_mul(x.e22, y.e22, x.a));
    return m;
}

CommElement::CommElement(Mat2q A_) : A(std::move(A_)) {
    if (A.det() <= 0) throw std::invalid_argument("CommElement: det A must be positive");
}

Mat2q CommElement::primitive() const {
    BigInt l(1);
    for (const Rational* r : {&A.a, &A.b, &A.c, &A.d}) l = lcm_big(l, BigInt(r->get_den()));
    BigInt g(0);
    Mat2q m{A.a * Rational(l), A.b * Rational(l), A.c * Rational(l), A.d * Rational(l)};
    for (const Rational* r : {&m.a, &m.b, &m.c, &m.d}) {
        BigInt n(r->get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    if (g == 0) throw std::invalid_argument("CommElement: zero matrix");
    Rational s{BigInt(1), g};
    return {m.a * s, m.b * s, m.c * s, m.d * s};
}

GroupElement CommElement::beta() const {
    double s = std::sqrt(A.det().get_d());
    return GroupElement::raw(A.a.get_d() / s, A.b.get_d() / s, A.c.get_d() / s,
                             A.d.get_d() / s);
}

namespace {

// Hermite normal form label of the primitive integer multiple of M (which has
// positive determinant); unique per left-SL(2,Z) orbit up to scalars.
std::string hnf_label(const Mat2q& M) {
    // clear denominators and content
    BigInt l(1);
    for (const Rational* r : {&M.a, &M.b, &M.c, &M.d}) l = lcm_big(l, BigInt(r->get_den()));
    BigInt a(Rational(M.a * Rational(l)).get_num());
    BigInt b(Rational(M.b * Rational(l)).get_num());
    BigInt c(Rational(M.c * Rational(l)).get_num());
    BigInt d(Rational(M.d * Rational(l)).get_num());
    BigInt g(0);
    for (const BigInt* x : {&a, &b, &c, &d}) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x->get_mpz_t());
    a /= g; b /= g; c /= g; d /= g;
    BigInt det = a * d - b * c;
    if (det < 0) throw std::logic_error("hnf_label: negative determinant");

    // row HNF: [[h11, h12], [0, h22]], h11 > 0, h22 > 0, 0 <= h12 < h22
    BigInt u, v, gg;
    mpz_gcdext(gg.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
    BigInt h11 = gg;
    BigInt h12 = u * b + v * d;
    BigInt h22 = det / gg;
    // reduce h12 mod h22
    BigInt rem;
    mpz_fdiv_r(rem.get_mpz_t(), h12.get_mpz_t(), h22.get_mpz_t());
    std::ostringstream os;
    os << h11 << '/' << rem << '/' << h22;
    return os.str();
}

const Mat2q kGenS{0, -1, 1, 0};
const Mat2q kGenT{1, 1, 0, 1};
const Mat2q kGenTinv{1, -1, 0, 1};

} // namespace

CosetDecomposition comm_cosets(const CommElement& E, uint64_t cap) {
    if (cap > 10000) throw std::invalid_argument("comm_cosets: cap <= 1e4");
    Mat2q P = E.primitive();
    Mat2q Pinv = P.inverse();

    CosetDecomposition out;
    std::map<std::string, uint64_t> seen;
    std::vector<Mat2q> frontier;

    Mat2q id = Mat2q::identity();
    seen[hnf_label(Pinv)] = 0;
    out.reps.push_back(id);
    frontier.push_back(id);

    while (!frontier.empty()) {
        std::vector<Mat2q> next;
        for (const Mat2q& gamma : frontier) {
            for (const Mat2q* gen : {&kGenS, &kGenT, &kGenTinv}) {
                Mat2q cand = gamma * *gen;
                std::string label = hnf_label(Pinv * cand);
                if (seen.count(label)) continue;
                if (out.reps.size() >= cap)
                    throw CapacityExceeded("comm_cosets: coset cap exceeded");
                seen[label] = out.reps.size();
                out.reps.push_back(cand);
                next.push_back(cand);
            }
        }
        frontier = std::move(next);
    }
    out.index = out.reps.size();
    return out;
}

uint64_t comm_index(const CommElement& E, uint64_t cap) { return comm_cosets(E, cap).index; }

DenominatorReport denominator_bound_check(const CommElement& E, uint64_t cap) {
    DenominatorReport rep;
    rep.index = comm_index(E, cap);
    Rational dt = E.A.det();
    const Rational* entries[4] = {&E.A.a, &E.A.b, &E.A.c, &E.A.d};
    rep.z = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            Rational prod = (*entries[i]) * (*entries[j]) / dt;  // beta_i beta_j exactly
            rep.products.push_back(prod);
            rep.z = lcm_big(rep.z, BigInt(prod.get_den()));
        }
    BigInt n(rep.index + 1);
    rep.bound = n * n * n;
    rep.ok = rep.z <= rep.bound;
    return rep;
}

CongruenceProbe congruence_containment_probe(const CommElement& E, uint64_t trials, uint64_t seed,
                                             std::optional<BigInt> z_override) {
    CongruenceProbe probe;
    if (z_override) {
        probe.z = *z_override;
    } else {
        DenominatorReport rep = denominator_bound_check(E);
        probe.z = rep.z;
    }
    probe.trials = trials;
    probe.failures = 0;

    Mat2q P = E.primitive();
    Mat2q Pinv = P.inverse();
    Rational z{probe.z};

    Rng rng(seed);
    const Mat2q e12{1, z, 0, 1};
    const Mat2q e12i{1, -z, 0, 1};
    const Mat2q e21{1, 0, z, 1};
    const Mat2q e21i{1, 0, -z, 1};

    for (uint64_t t = 0; t < trials; ++t) {
        // random word in the elementary generators
        Mat2q w = Mat2q::identity();
        int len = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < len; ++i) {
            switch (rng.below(4)) {
                case 0: w = w * e12; break;
                case 1: w = w * e12i; break;
                case 2: w = w * e21; break;
                default: w = w * e21i; break;
            }
        }
        // conjugate by a random short gamma in SL(2,Z); Gamma(z) is normal,
        // so the conjugate still lies in it
        Mat2q gamma = Mat2q::identity();
        int glen = static_cast<int>(rng.below(5));
        for (int i = 0; i < glen; ++i) {
            switch (rng.below(3)) {
                case 0: gamma = gamma * kGenS; break;
                case 1: gamma = gamma * kGenT; break;
                default: gamma = gamma * kGenTinv; break;
            }
        }
        Mat2q cand = gamma * w * gamma.inverse();
        bool in_gamma = cand.is_integral() && cand.det() == 1;
        Mat2q conj = Pinv * cand * P;
        bool in_conj = conj.is_integral() && conj.det() == 1;
        if (!(in_gamma && in_conj)) ++probe.failures;
    }
    return probe;
}

TraceObstructionCertificate trace_obstruction(const QuatAlgebra& alg, uint64_t p, uint64_t q,
                                              uint64_t D) {
    if (D > 200) throw CapacityExceeded("trace_obstruction: D <= 200");
    if (p < 2 || q < 2 || p > 1000 || q > 1000)
        throw std::invalid_argument("trace_obstruction: p, q in [2, 1000]");
    TraceObstructionCertificate cert;
    cert.a = alg.a;
    cert.b = alg.b;
    cert.p = p;
    cert.q = q;
    cert.D = D;
    cert.has_solution = false;
    cert.norm_isotropy_found = false;

    const int64_t a = alg.a, b = alg.b;
    const int64_t s = static_cast<int64_t>(p + q);
    const int64_t dpq = static_cast<int64_t>(p) - static_cast<int64_t>(q);
    const int64_t s2 = s * s;
    const int64_t d2 = dpq * dpq;
    const int64_t den = a * b * s2;  // coefficient of x3^2 in the trace equation

    auto try_square = [&](int64_t num, int64_t denom, int64_t& root) {
        // num / denom must be a perfect square <= D^2
        if (denom == 0) return false;
        if (num % denom) return false;
        int64_t v = num / denom;
        if (v < 0 || v > static_cast<int64_t>(D * D)) return false;
        int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(v)));
        for (int64_t c = std::max<int64_t>(0, r - 1); c <= r + 1; ++c)
            if (c * c == v) {
                root = c;
                return true;
            }
        return false;
    };

    // All variables appear squared, so nonnegative quadruples cover everything.
    for (int64_t x0 = 0; x0 <= static_cast<int64_t>(D) && !cert.has_solution; ++x0) {
        for (int64_t x1 = 0; x1 <= static_cast<int64_t>(D) && !cert.has_solution; ++x1) {
            for (int64_t x2 = 0; x2 <= static_cast<int64_t>(D); ++x2) {
                // 4 x0^2 pq = (p+q)^2 N(alpha)  <=>
                // a b (p+q)^2 x3^2 = (p+q)^2 (a x1^2 + b x2^2) - (p-q)^2 x0^2
                int64_t num = s2 * (a * x1 * x1 + b * x2 * x2) - d2 * x0 * x0;
                int64_t x3;
                if (!try_square(num, den, x3)) continue;
                if (x0 == 0 && x1 == 0 && x2 == 0 && x3 == 0) continue;
                int64_t N = x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3;
                if (N <= 0) continue;
                cert.has_solution = true;
                cert.solution = {x0, x1, x2, x3};
                break;
            }
        }
    }

    // Necessary division condition: norm form isotropy scan,
    // a b x3^2 = a x1^2 + b x2^2 - x0^2.
    for (int64_t x0 = 0; x0 <= static_cast<int64_t>(D) && !cert.norm_isotropy_found; ++x0) {
        for (int64_t x1 = 0; x1 <= static_cast<int64_t>(D) && !cert.norm_isotropy_found; ++x1) {
            for (int64_t x2 = 0; x2 <= static_cast<int64_t>(D); ++x2) {
                int64_t num = a * x1 * x1 + b * x2 * x2 - x0 * x0;
                int64_t x3;
                if (!try_square(num, a * b, x3)) continue;
                if (x0 == 0 && x1 == 0 && x2 == 0 && x3 == 0) continue;
                cert.norm_isotropy_found = true;
                cert.isotropy = {x0, x1, x2, x3};
                break;
            }
        }
    }
    return cert;
}

std::string TraceObstructionCertificate::text() const {
    std::ostringstream os;
    os << "quaternion trace obstruction certificate\n";
    os << "algebra: a=" << a << " b=" << b << "\n";
    os << "primes: p=" << p << " q=" << q << "\n";
    os << "height: D=" << D
       << " (primitive integer quadruples; rational solutions of projective height <= D are "
          "covered by scale invariance)\n";
    if (has_solution) {
        os << "verdict: SOLUTION x=(" << solution[0] << "," << solution[1] << "," << solution[2]
           << "," << solution[3] << ") satisfies 4 x0^2 / N = (p+q)^2 / (pq)\n";
    } else {
        os << "verdict: no solution with N(alpha) > 0 up to height " << D << "\n";
    }
    if (norm_isotropy_found) {
        os << "norm form: isotropic vector found (" << isotropy[0] << "," << isotropy[1] << ","
           << isotropy[2] << "," << isotropy[3] << "); algebra is NOT division\n";
    } else {
        os << "norm form: no isotropy up to height " << D
           << " (necessary division condition; no local-global certificate)\n";
    }
    return os.str();
}

} // namespace horolab
