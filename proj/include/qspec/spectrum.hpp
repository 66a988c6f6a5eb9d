#pragma once

// Approximation constants: finite-budget envelopes, certified values at periodic points,
// spectrum samples and the catalog of Hurwitz upper bounds.

#include <string>
#include <vector>

#include "qspec/exactnum.hpp"
#include "qspec/orbit.hpp"

namespace qspec {

struct ApproxEstimate {
    std::vector<double> thresholds;    // increasing T
    std::vector<double> tail_infima;   // inf of h(r)|x - r| over T <= h(r) <= h_max; +inf if no hit
    double h_max = 0.0;
    double window_bound = 0.0;         // B such that every r with h(r)|x - r| <= B, h(r) >= T_min was scanned

    double value() const { return tail_infima.empty() ? 0.0 : tail_infima.back(); }
};

struct EstimateOptions {
    std::vector<double> h_grid;   // empty: powers of ten below h_max
    double initial_bound = 1.5;   // B in |x - r| <= B / T
    double max_bound = 64.0;
    OrbitOptions orbit{};
};

// Default grid: 1, 10, 100, ... strictly below h_max.
std::vector<double> default_h_grid(double h_max);

// Membership of x in Gamma.alpha0 u Gamma.alpha0^sigma, decided exactly.
bool in_exceptional_set(const QuadSurd& x, const QuadSurd& alpha0, const GroupSpec& group);

ApproxEstimate approx_constant_estimate(const QuadSurd& x, const QuadSurd& alpha0, const GroupSpec& group,
                                        double h_max, const EstimateOptions& opts = {});
// Target given as a real number; no exceptional-set check is possible.
ApproxEstimate approx_constant_estimate(double x, const QuadSurd& alpha0, const GroupSpec& group, double h_max,
                                        const EstimateOptions& opts = {});

struct SpectrumSample {
    QuadSurd xi;
    mpz_class disc{0};
    double c_value = 0.0;
    bool certified = false;
    double cert_radius = 0.0;   // every axis within this distance of a fundamental segment was examined
    bool exceptional = false;   // xi in the exceptional set: value 0 by convention
    int axes = 0;               // axes examined in the final pass
};

struct PeriodicOptions {
    double initial_bound = 1.0;   // first guess for the minimum; doubled while no axis beats it
    int max_doublings = 8;
    double piece_length = 0.5;    // hyperbolic length of the axis pieces covered one at a time
    OrbitOptions orbit{};
};

// c(xi) = min over axes C in the orbit of the alpha0-axis of cosh l - |cos theta|, (l, theta) the complex
// distance between the axis of the automorph of xi and C.
SpectrumSample approx_constant_periodic(const QuadSurd& xi, const QuadSurd& alpha0, const GroupSpec& group,
                                        const PeriodicOptions& opts = {});

// Certified samples over the hyperbolic points of enumerate_hyperbolic_points(trace_budget),
// sorted by (discriminant, value).
std::vector<SpectrumSample> spectrum_sample(const QuadSurd& alpha0, const GroupSpec& group, long trace_budget,
                                            const PeriodicOptions& opts = {});
std::vector<SpectrumSample> spectrum_sample(const std::vector<QuadSurd>& points, const QuadSurd& alpha0,
                                            const GroupSpec& group, const PeriodicOptions& opts = {});

// Attracting fixed point n/2 + sqrt(n^2/4 + 1) of (n^2+1, n; n, 1).
QuadSurd golden_family_point(long n);

enum class HurwitzCase { psl2z, modular_torus, bianchi, hurwitz_h5, eisenstein_picard, hurwitz_modular };

// Upper bound (1 + sqrt 2) e^Delta for the spectrum; m is used by the Bianchi case only (1, 2, 3, 7, 11).
double hurwitz_bounds_catalog(HurwitzCase c, long m = 0);
HurwitzCase parse_hurwitz_case(const std::string& name, long* m);

struct LiouvilleResult {
    QuadSurd value;   // [0; (pattern)^infinity]
    ApproxEstimate estimate;
    SpectrumSample periodic;  // exact value of the constant at this periodic point
};

// Purely periodic continued fraction value of a block of positive partial quotients.
QuadSurd periodic_continued_fraction(const std::vector<long>& pattern);
LiouvilleResult liouville_construct(const std::vector<long>& pattern, double h_max,
                                    const EstimateOptions& opts = {});

}  // namespace qspec
