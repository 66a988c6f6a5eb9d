#pragma once

// Upper half-plane / half-space geometry: boundary points, geodesics, crossratios,
// complex distance and penetration maps.

#include <complex>
#include <optional>
#include <string>

#include "qspec/exactnum.hpp"

namespace qspec {

using cplx = std::complex<double>;

// Extended non-negative reals: +inf is a flag, never a float infinity.
class ExtReal {
public:
    ExtReal() = default;
    ExtReal(double v);  // NOLINT(google-explicit-constructor)
    static ExtReal infinity() {
        ExtReal r;
        r.inf_ = true;
        return r;
    }
    bool is_infinite() const { return inf_; }
    double value() const;  // throws when infinite
    double value_or(double fallback) const { return inf_ ? fallback : v_; }
    std::string str() const;

private:
    bool inf_ = false;
    double v_ = 0.0;
};

bool operator<(const ExtReal& a, const ExtReal& b);
bool operator==(const ExtReal& a, const ExtReal& b);

// Point of R u {inf} (dim 2) or C u {inf} (dim 3).
struct BoundaryPoint {
    bool infinite = false;
    cplx z{0.0, 0.0};
    int dim = 2;
    std::optional<QuadSurd> exact;

    static BoundaryPoint infinity(int dim = 2) {
        BoundaryPoint p;
        p.infinite = true;
        p.dim = dim;
        return p;
    }
    static BoundaryPoint real(double x) {
        BoundaryPoint p;
        p.z = {x, 0.0};
        return p;
    }
    static BoundaryPoint complex(cplx z) {
        BoundaryPoint p;
        p.z = z;
        p.dim = 3;
        return p;
    }
    static BoundaryPoint of(const QuadSurd& x);
    bool same(const BoundaryPoint& o) const;  // exact when both carry exact values
    std::string str() const;
};

struct Geodesic {
    BoundaryPoint minus, plus;
    Geodesic() = default;
    Geodesic(BoundaryPoint m, BoundaryPoint p);
    Geodesic reversed() const { return Geodesic(plus, minus); }
};

struct Horoball {
    BoundaryPoint center;
    double param = 1.0;  // Euclidean height if center is inf, Euclidean diameter otherwise
};

struct ComplexDistance {
    double ell = 0.0;
    double theta = 0.0;  // in [0, pi]
    bool degenerate = false;  // shared endpoint convention was applied
};

// Point of the upper half-space: horizontal coordinate z (real in dim 2) and height h > 0.
struct HPoint {
    cplx z;
    double h;
};

// Orientation preserving Moebius map of C u {inf} with double entries.
struct CMoebius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
    BoundaryPoint apply(const BoundaryPoint& p) const;
    HPoint apply(const HPoint& p) const;  // Poincare extension
    CMoebius inverse() const { return {d, -b, -c, a}; }
    static CMoebius from(const MoebiusMap& g);  // requires orientation preserving
};
CMoebius operator*(const CMoebius& g, const CMoebius& h);

// Map sending g.minus to 0 and g.plus to inf.
CMoebius normalizer(const Geodesic& g);

double point_distance(const HPoint& p, const HPoint& q);
double point_geodesic_distance(const HPoint& p, const Geodesic& g);

double hamenstadt_distance(const BoundaryPoint& a, const BoundaryPoint& b);
// e^{d(a_t, b_t)/2 - t} for the rays from the horosphere of height 1 at time t.
double hamenstadt_limit_at(const BoundaryPoint& a, const BoundaryPoint& b, double t);

double crossratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                  const BoundaryPoint& d);

// Complex distance from g to L, measured at the foot on L.
ComplexDistance complex_distance(const Geodesic& g, const Geodesic& L);

// [g-, L-, g+, L+] from the complex distance; infinite on shared endpoints.
ExtReal crossratio_geom(const Geodesic& g, const Geodesic& L);
ExtReal cp_value(const Geodesic& g, const Geodesic& L);

struct PenetrationValues {
    ExtReal ell;  // length of rho inside the closed eps-neighbourhood of L
    ExtReal ftp;
    ExtReal cp;
};

PenetrationValues penetration_maps(const Geodesic& rho, const Geodesic& L, double eps);
ExtReal penetration_length(const Geodesic& rho, const Geodesic& L, double eps);
ExtReal fellow_traveller(const Geodesic& rho, const Geodesic& L);
ExtReal crossratio_penetration(const Geodesic& rho, const Geodesic& L);

// 2 argsinh(coth eps).
double c1_prime(double eps);

double circle_arc_length(double alpha);

struct HoroDepth {
    double depth;       // -log(|a-b|/2)
    bool intersecting;  // depth < 0
};
HoroDepth horoball_geodesic_depth(const Horoball& H, const Geodesic& g);

}  // namespace qspec
