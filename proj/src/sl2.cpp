#include "horolab/sl2.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace horolab {

namespace {
void require_finite(double t, const char* who) {
    if (!std::isfinite(t)) throw std::invalid_argument(std::string(who) + ": non-finite parameter");
}
} // namespace

GroupElement::GroupElement(double a, double b, double c, double d) {
    require_finite(a, "GroupElement");
    require_finite(b, "GroupElement");
    require_finite(c, "GroupElement");
    require_finite(d, "GroupElement");
    m11 = a; m12 = b; m21 = c; m22 = d;
    if (std::abs(det() - 1.0) > 1e-9)
        throw std::invalid_argument("GroupElement: determinant must be 1 (got " +
                                    std::to_string(det()) + ")");
}

GroupElement GroupElement::inverse() const {
    // Adjugate over det keeps g * g^{-1} within rounding of the identity even
    // after determinant drift.
    double d = det();
    return raw(m22 / d, -m12 / d, -m21 / d, m11 / d);
}

GroupElement GroupElement::renormalized() const {
    double s = std::sqrt(std::abs(det()));
    return raw(m11 / s, m12 / s, m21 / s, m22 / s);
}

GroupElement operator*(const GroupElement& g, const GroupElement& h) {
    return GroupElement::raw(g.m11 * h.m11 + g.m12 * h.m21, g.m11 * h.m12 + g.m12 * h.m22,
                             g.m21 * h.m11 + g.m22 * h.m21, g.m21 * h.m12 + g.m22 * h.m22);
}

LowerTriangularElement::LowerTriangularElement(double a_, double c_) {
    if (a_ == 0.0 || !std::isfinite(a_) || !std::isfinite(c_))
        throw std::invalid_argument("LowerTriangularElement: need finite a != 0");
    a = a_;
    c = c_;
}

LowerTriangularElement LowerTriangularElement::closest(const GroupElement& g) {
    // minimize (a - m11)^2 + (1/a - m22)^2 over a (c decouples to m21);
    // Newton on the stationarity equation a^3 - m11 a^2 + m22 a - 1 = 0
    double a = g.m11;
    for (int it = 0; it < 8; ++it) {
        double f = a * a * a - g.m11 * a * a + g.m22 * a - 1.0;
        double fp = 3 * a * a - 2 * g.m11 * a + g.m22;
        if (std::abs(fp) < 1e-12) break;
        double step = f / fp;
        a -= step;
        if (std::abs(step) < 1e-15 * std::abs(a)) break;
    }
    if (a == 0.0 || !std::isfinite(a)) a = g.m11;
    return {a, g.m21};
}

GroupElement flow_h(double t) {
    require_finite(t, "flow_h");
    return GroupElement::raw(1, t, 0, 1);
}

GroupElement flow_v(double t) {
    require_finite(t, "flow_v");
    return GroupElement::raw(1, 0, t, 1);
}

GroupElement flow_a(double t) {
    require_finite(t, "flow_a");
    double e = std::exp(t / 2);
    return GroupElement::raw(e, 0, 0, 1.0 / e);
}

GroupElement conjugate_h(const LowerTriangularElement& z, double t) {
    require_finite(t, "conjugate_h");
    double a = z.a, c = z.c;
    return GroupElement::raw(a + c * t, (1.0 / a - a) * t - c * t * t, c, 1.0 / a - c * t);
}

double centralizer_shift(double a, double c, double t) {
    require_finite(t, "centralizer_shift");
    double denom = a + c * t;
    if (std::abs(denom) < 1e-12)
        throw std::domain_error("centralizer_shift: pole, |a + ct| < 1e-12");
    return ((1.0 / a - a) * t - c * t * t) / denom;
}

double dist_group(const GroupElement& g, const GroupElement& h) {
    GroupElement m = g * h.inverse();
    double a = m.m11 - 1, b = m.m12, c = m.m21, d = m.m22 - 1;
    return std::sqrt(a * a + b * b + c * c + d * d);
}

void ProductAccumulator::push(const GroupElement& g) {
    acc_ = acc_ * g;
    if (++since_renorm_ >= 64) {
        acc_ = acc_.renormalized();
        since_renorm_ = 0;
    }
}

} // namespace horolab
