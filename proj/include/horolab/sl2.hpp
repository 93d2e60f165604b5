#pragma once

#include <array>
#include <cmath>

namespace horolab {

// A real 2x2 matrix of determinant 1.  Carrier of the three flows h_t, v_t,
// a_t and of every conjugation formula in the library.
struct GroupElement {
    double m11 = 1, m12 = 0, m21 = 0, m22 = 1;

    GroupElement() = default;
    // Validates |det - 1| <= 1e-9; throws std::invalid_argument otherwise.
    GroupElement(double a, double b, double c, double d);

    static GroupElement identity() { return {}; }

    double det() const { return m11 * m22 - m12 * m21; }
    double frobenius() const {
        return std::sqrt(m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22);
    }

    GroupElement inverse() const;
    GroupElement transpose() const { return raw(m11, m21, m12, m22); }

    // Rescales so det is exactly 1 (up to rounding).
    GroupElement renormalized() const;

    friend GroupElement operator*(const GroupElement& g, const GroupElement& h);
    GroupElement operator-() const { return raw(-m11, -m12, -m21, -m22); }

    std::array<double, 4> entries() const { return {m11, m12, m21, m22}; }

    // Bypasses the determinant check; for internal formulas that are exact.
    static GroupElement raw(double a, double b, double c, double d) {
        GroupElement g;
        g.m11 = a; g.m12 = b; g.m21 = c; g.m22 = d;
        return g;
    }
};

// [[a, 0], [c, 1/a]], the centralizer-drift normal form of Lemma-style
// conjugation identities.
struct LowerTriangularElement {
    double a = 1, c = 0;

    LowerTriangularElement() = default;
    LowerTriangularElement(double a_, double c_);  // requires a != 0

    GroupElement matrix() const { return GroupElement::raw(a, 0.0, c, 1.0 / a); }

    // Frobenius-closest lower-triangular element to a near-triangular g.
    static LowerTriangularElement closest(const GroupElement& g);
};

// Unstable horocycle [[1,t],[0,1]].
GroupElement flow_h(double t);
// Stable horocycle [[1,0],[t,1]].
GroupElement flow_v(double t);
// Geodesic flow diag(e^{t/2}, e^{-t/2}).
GroupElement flow_a(double t);

// h_t z h_{-t} in closed form: [[a+ct, (1/a-a)t-ct^2], [c, 1/a-ct]].
GroupElement conjugate_h(const LowerTriangularElement& z, double t);

// K(t) = ((1/a - a) t - c t^2) / (a + c t); h_t z h_{-t-K(t)} is lower
// triangular.  Throws std::domain_error when |a + ct| < 1e-12.
double centralizer_shift(double a, double c, double t);

// Right-invariant distance: ||g h^{-1} - id||_F.
double dist_group(const GroupElement& g, const GroupElement& h);

// Multiplies long chains of factors, dividing by sqrt(det) every 64 factors
// so determinant drift stays bounded over ~1e6 flow factors.
class ProductAccumulator {
public:
    void push(const GroupElement& g);
    const GroupElement& value() const { return acc_; }

private:
    GroupElement acc_{};
    int since_renorm_ = 0;
};

} // namespace horolab
