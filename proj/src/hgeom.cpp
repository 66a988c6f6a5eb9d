#include "qspec/hgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qspec {

namespace {

constexpr double kSameTol = 1e-13;

bool finite_pair_distinct(const BoundaryPoint& a, const BoundaryPoint& b) { return !a.same(b); }

// log of |x - y| where one of them may be infinite; infinite factors cancel in crossratios.
double log_gap(const BoundaryPoint& x, const BoundaryPoint& y) {
    if (x.infinite || y.infinite) return 0.0;
    return std::log(std::abs(x.z - y.z));
}

bool shares_endpoint(const Geodesic& g, const Geodesic& L) {
    return g.minus.same(L.minus) || g.minus.same(L.plus) || g.plus.same(L.minus) || g.plus.same(L.plus);
}

void require_positive_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be a positive real");
}

}  // namespace

// ------------------------------------------------------------------ ExtReal

ExtReal::ExtReal(double v) : v_(v) {
    if (!std::isfinite(v)) throw DomainError("ExtReal built from a non-finite double");
}

double ExtReal::value() const {
    if (inf_) throw DomainError("ExtReal is infinite");
    return v_;
}

std::string ExtReal::str() const {
    if (inf_) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v_);
    return buf;
}

bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return a.value() < b.value();
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return a.value() == b.value();
}

// ------------------------------------------------------------ BoundaryPoint

BoundaryPoint BoundaryPoint::of(const QuadSurd& x) {
    BoundaryPoint p;
    if (x.is_real()) {
        p.z = {x.to_double(), 0.0};
        p.dim = 2;
    } else {
        p.z = x.to_complex();
        p.dim = 3;
    }
    p.exact = x;
    return p;
}

bool BoundaryPoint::same(const BoundaryPoint& o) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    if (exact && o.exact && exact->m() == o.exact->m()) return *exact == *o.exact;
    double scale = std::max({1.0, std::abs(z), std::abs(o.z)});
    return std::abs(z - o.z) <= kSameTol * scale;
}

std::string BoundaryPoint::str() const {
    if (infinite) return "inf";
    if (exact) return exact->str();
    char buf[96];
    if (dim == 2)
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
    else
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

Geodesic::Geodesic(BoundaryPoint m, BoundaryPoint p) : minus(std::move(m)), plus(std::move(p)) {
    if (minus.same(plus)) throw DomainError("geodesic endpoints must be distinct");
}

// ----------------------------------------------------------------- CMoebius

BoundaryPoint CMoebius::apply(const BoundaryPoint& p) const {
    BoundaryPoint out;
    out.dim = p.dim;
    if (p.infinite) {
        if (c == 0.0) return BoundaryPoint::infinity(p.dim);
        out.z = a / c;
        return out;
    }
    cplx den = c * p.z + d;
    if (den == 0.0) return BoundaryPoint::infinity(p.dim);
    out.z = (a * p.z + b) / den;
    return out;
}

HPoint CMoebius::apply(const HPoint& p) const {
    cplx cz_d = c * p.z + d;
    double den = std::norm(cz_d) + std::norm(c) * p.h * p.h;
    cplx num = (a * p.z + b) * std::conj(cz_d) + a * std::conj(c) * p.h * p.h;
    return {num / den, std::abs(a * d - b * c) * p.h / den};
}

CMoebius CMoebius::from(const MoebiusMap& g) {
    if (g.anti) throw DomainError("CMoebius::from: orientation reversing map");
    return {g.a.to_complex(), g.b.to_complex(), g.c.to_complex(), g.d.to_complex()};
}

CMoebius operator*(const CMoebius& g, const CMoebius& h) {
    return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

CMoebius normalizer(const Geodesic& g) {
    if (g.minus.infinite) return {0.0, 1.0, 1.0, -g.plus.z};
    if (g.plus.infinite) return {1.0, -g.minus.z, 0.0, 1.0};
    return {1.0, -g.minus.z, 1.0, -g.plus.z};
}

// ---------------------------------------------------------------- distances

double point_distance(const HPoint& p, const HPoint& q) {
    double dz = std::abs(p.z - q.z), dh = p.h - q.h;
    return 2.0 * std::asinh(std::hypot(dz, dh) / (2.0 * std::sqrt(p.h * q.h)));
}

double point_geodesic_distance(const HPoint& p, const Geodesic& g) {
    HPoint q = normalizer(g).apply(p);
    return std::asinh(std::abs(q.z) / q.h);
}

double hamenstadt_distance(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.infinite || b.infinite) throw DomainError("Hamenstadt distance is undefined at the horoball centre");
    return std::abs(a.z - b.z);
}

double hamenstadt_limit_at(const BoundaryPoint& a, const BoundaryPoint& b, double t) {
    if (a.infinite || b.infinite) throw DomainError("Hamenstadt distance is undefined at the horoball centre");
    double y = std::exp(-t);
    return std::exp(0.5 * point_distance({a.z, y}, {b.z, y}) - t);
}

double crossratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                  const BoundaryPoint& d) {
    const BoundaryPoint* pts[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (!finite_pair_distinct(*pts[i], *pts[j])) throw DomainError("crossratio needs four distinct points");
    return log_gap(c, a) - log_gap(c, b) + log_gap(d, b) - log_gap(d, a);
}

ComplexDistance complex_distance(const Geodesic& g, const Geodesic& L) {
    ComplexDistance out;
    bool same_start = g.minus.same(L.minus), same_end = g.plus.same(L.plus);
    bool cross_a = g.plus.same(L.minus), cross_b = g.minus.same(L.plus);
    if (same_start || same_end) {
        out.degenerate = true;
        return out;
    }
    if (cross_a || cross_b) {
        out.theta = M_PI;
        out.degenerate = true;
        return out;
    }
    CMoebius n = normalizer(L);
    cplx u = n.apply(g.minus).z, v = n.apply(g.plus).z;
    // (z - w)/(z + w) makes the common perpendicular vertical; L becomes [-1, 1]
    cplx w = std::sqrt(u * v);
    cplx up = (u - w) / (u + w);
    double r = std::abs(up);
    out.ell = std::abs(std::log(r));
    double c = std::clamp(std::real(-up / r), -1.0, 1.0);
    out.theta = std::acos(c);
    return out;
}

ExtReal crossratio_geom(const Geodesic& g, const Geodesic& L) {
    if (shares_endpoint(g, L)) return ExtReal::infinity();
    ComplexDistance cd = complex_distance(g, L);
    return -std::log((std::cosh(cd.ell) + std::cos(cd.theta)) / 2.0);
}

ExtReal cp_value(const Geodesic& g, const Geodesic& L) {
    if (shares_endpoint(g, L)) return ExtReal::infinity();
    ComplexDistance cd = complex_distance(g, L);
    double ch = std::cosh(cd.ell), co = std::cos(cd.theta);
    double lo = std::min(ch + co, ch - co);
    if (!(lo > 0.0)) return ExtReal::infinity();
    return std::max(0.0, -std::log(lo / 2.0));
}

// ----------------------------------------------------------- penetration

double c1_prime(double eps) {
    require_positive_eps(eps);
    return 2.0 * std::asinh(1.0 / std::tanh(eps));
}

ExtReal penetration_length(const Geodesic& rho, const Geodesic& L, double eps) {
    require_positive_eps(eps);
    if (shares_endpoint(rho, L)) return ExtReal::infinity();
    CMoebius n = normalizer(L);
    cplx u = n.apply(rho.minus).z, v = n.apply(rho.plus).z;
    // rho(s) = (c + r tanh(s) e, r / cosh s); sinh d = |horizontal| cosh(s) / r against the vertical axis,
    // so d <= eps is a quadratic inequality in T = tanh s.
    cplx c = 0.5 * (u + v);
    double r = 0.5 * std::abs(v - u);
    cplx e = (v - u) / (2.0 * r);
    double beta = std::real(std::conj(c) * e);
    double qa = r * r * std::cosh(eps) * std::cosh(eps);
    double qb = 2.0 * r * beta;
    double qc = std::norm(c) - r * r * std::sinh(eps) * std::sinh(eps);
    double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) return 0.0;
    double sq = std::sqrt(disc);
    double q = -0.5 * (qb + std::copysign(sq, qb));
    double t1 = q / qa, t2 = (q != 0.0) ? qc / q : -t1;
    if (t1 > t2) std::swap(t1, t2);
    t1 = std::max(t1, -1.0);
    t2 = std::min(t2, 1.0);
    if (t1 <= -1.0 || t2 >= 1.0) return ExtReal::infinity();
    return std::max(0.0, std::atanh(t2) - std::atanh(t1));
}

ExtReal fellow_traveller(const Geodesic& rho, const Geodesic& L) {
    if (shares_endpoint(rho, L)) return ExtReal::infinity();
    CMoebius n = normalizer(L);
    // the projection of a boundary point z onto the vertical axis has height |z|
    double hu = std::abs(n.apply(rho.minus).z), hv = std::abs(n.apply(rho.plus).z);
    return std::abs(std::log(hu) - std::log(hv));
}

ExtReal crossratio_penetration(const Geodesic& rho, const Geodesic& L) {
    if (shares_endpoint(rho, L)) return ExtReal::infinity();
    double x1 = crossratio(rho.minus, L.minus, rho.plus, L.plus);
    double x2 = crossratio(rho.minus, L.plus, rho.plus, L.minus);
    return std::max({0.0, x1, x2});
}

PenetrationValues penetration_maps(const Geodesic& rho, const Geodesic& L, double eps) {
    require_positive_eps(eps);
    return {penetration_length(rho, L, eps), fellow_traveller(rho, L), crossratio_penetration(rho, L)};
}

// --------------------------------------------------------------- misc

double circle_arc_length(double alpha) {
    if (!(alpha > 0.0) || alpha > M_PI / 2 + 1e-15) throw DomainError("angle must lie in (0, pi/2]");
    return std::max(0.0, std::log(1.0 / std::tan(alpha / 2.0)));
}

HoroDepth horoball_geodesic_depth(const Horoball& H, const Geodesic& g) {
    if (!H.center.infinite) throw DomainError("horoball must be centred at infinity");
    if (!(H.param > 0.0)) throw DomainError("horoball height must be positive");
    if (g.minus.infinite || g.plus.infinite) throw DomainError("geodesic endpoint at the horoball centre");
    double depth = std::log(H.param) - std::log(std::abs(g.plus.z - g.minus.z) / 2.0);
    return {depth, depth < 0.0};
}

}  // namespace qspec
