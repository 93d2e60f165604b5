#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horolab/sl2.hpp"

namespace horolab {

using Rational = mpq_class;
using BigInt = mpz_class;

// Exact rational 2x2 matrix.
struct Mat2q {
    Rational a, b, c, d;

    static Mat2q identity() { return {1, 0, 0, 1}; }
    Rational det() const { return a * d - b * c; }
    Mat2q inverse() const;
    friend Mat2q operator*(const Mat2q& x, const Mat2q& y);
    bool is_integral() const;
};

// Quaternion algebra (a, b / Q): basis 1, w, W, wW with w^2 = a, W^2 = b,
// wW = -Ww.  a must be a positive squarefree non-square, b squarefree != 0.
struct QuatAlgebra {
    int64_t a;
    int64_t b;
    QuatAlgebra(int64_t a, int64_t b);
};

struct QuatElement {
    QuatAlgebra alg;
    Rational x0, x1, x2, x3;
};

QuatElement quat_mul(const QuatElement& x, const QuatElement& y);
// N(x) = x0^2 - a x1^2 - b x2^2 + ab x3^2.
Rational quat_norm(const QuatElement& x);
// tr(x) = 2 x0.
Rational quat_trace(const QuatElement& x);

// u + v sqrt(a), exact.
struct QuadVal {
    Rational u, v;
};
QuadVal quad_mul(const QuadVal& x, const QuadVal& y, int64_t a);

// phi(x) = [[x0 + x1 sqrt a, x2 + x3 sqrt a], [b (x2 - x3 sqrt a), x0 - x1 sqrt a]];
// det = N(x) and trace = tr(x), both exact in Q(sqrt a).
struct EmbeddedMatrix {
    int64_t a;  // the quadratic field parameter
    QuadVal e11, e12, e21, e22;
    QuadVal det() const;
    QuadVal trace() const;
};
EmbeddedMatrix embed_phi(const QuatElement& x);
// phi(x) phi(y), exact in Q(sqrt a).
EmbeddedMatrix embed_mul(const EmbeddedMatrix& x, const EmbeddedMatrix& y);

// A rational-matrix commensurator element of SL(2,Z): beta = A / sqrt(det A)
// with det A > 0.
struct CommElement {
    Mat2q A;
    explicit CommElement(Mat2q A);

    // Primitive integer matrix proportional to A (canonical under scaling).
    Mat2q primitive() const;
    // beta as floating 2x2 for the geometry layer.
    GroupElement beta() const;
};

// [Gamma : Gamma cap beta Gamma beta^{-1}] by breadth-first coset search over
// the generators S, T with exact-rational membership tests; coset identity is
// the Hermite normal form of the primitive integer multiple of A^{-1} gamma.
// Throws CapacityExceeded past `cap` cosets.
struct CosetDecomposition {
    uint64_t index;
    std::vector<Mat2q> reps;  // integer coset representatives, reps[0] = id
};
CosetDecomposition comm_cosets(const CommElement& E, uint64_t cap = 10000);
uint64_t comm_index(const CommElement& E, uint64_t cap = 10000);

// Checks every two-entry product of beta (a rational, entries of A scaled by
// det) against Lemma-style denominator bounds: all denominators divide
// z = lcm(denominators) and z <= (ind + 1)^3.
struct DenominatorReport {
    uint64_t index;
    std::vector<Rational> products;  // the 10 pair products
    BigInt z;                        // lcm of the denominators
    BigInt bound;                    // (index + 1)^3
    bool ok;
};
DenominatorReport denominator_bound_check(const CommElement& E, uint64_t cap = 10000);

// Samples words in the generators of the principal congruence group
// Gamma(z) (elementary matrices id + z E_ij and Gamma-conjugates) and checks
// membership in beta Gamma beta^{-1} cap Gamma exactly.
struct CongruenceProbe {
    BigInt z;
    uint64_t trials;
    uint64_t failures;
};
CongruenceProbe congruence_containment_probe(const CommElement& E, uint64_t trials,
                                             uint64_t seed = 1, std::optional<BigInt> z_override = {});

// Exhaustive exact search for alpha with 4 x0^2 / N(alpha) = (p+q)^2 / (pq),
// N(alpha) > 0, over primitive integer quadruples of height <= D (covering
// all rational alpha of projective height <= D, since both sides are scale
// invariant).  Also scans the norm form for isotropy up to the same height
// (a necessary division-algebra condition; no local-global certificate).
struct TraceObstructionCertificate {
    int64_t a, b;
    uint64_t p, q;
    uint64_t D;
    bool has_solution;
    std::array<int64_t, 4> solution{0, 0, 0, 0};
    bool norm_isotropy_found;
    std::array<int64_t, 4> isotropy{0, 0, 0, 0};

    std::string text() const;
};
TraceObstructionCertificate trace_obstruction(const QuatAlgebra& alg, uint64_t p, uint64_t q,
                                              uint64_t D);

} // namespace horolab
