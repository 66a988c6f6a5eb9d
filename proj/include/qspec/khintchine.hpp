#pragma once

// Integral criteria and Monte-Carlo experiments for Khintchine-type zero-full laws of orbit approximation.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qspec/exactnum.hpp"
#include "qspec/orbit.hpp"

namespace qspec {

struct SlowlyVaryingOptions {
    double B = 1.0;       // shift
    double A_cap = 1e3;   // largest acceptable ratio
};

struct SlowlyVaryingReport {
    bool ok = false;
    double A = 1.0;  // max f(y)/f(x) over sampled |x - y| <= B
    double B = 1.0;
};

// f is sampled on `samples` equally spaced points of [lo, hi]; throws DomainError if f is not positive.
SlowlyVaryingReport slowly_varying_check(const std::function<double(double)>& f, double lo, double hi, int samples,
                                         const SlowlyVaryingOptions& opts = {});
// Same with log f supplied, for maps whose values leave the double range.
SlowlyVaryingReport slowly_varying_check_log(const std::function<double(double)>& log_f, double lo, double hi,
                                             int samples, const SlowlyVaryingOptions& opts = {});

// Positive map with a printable descriptor.
struct PhiSpec {
    std::string name;
    std::function<double(double)> f;

    static PhiSpec power(double a);  // t^a
    static PhiSpec constant(double c);
    // "1", "2.5", "power:-0.5", "t^-0.5"
    static PhiSpec parse(const std::string& text);
};

enum class Verdict { diverges, converges, inconclusive };
const char* verdict_name(Verdict v);

struct IntegralBounds {
    double u_max = 600.0;  // integrate in u = log t over [0, u_max]
    double tol = 1e-10;
};

struct IntegralTestResult {
    Verdict verdict = Verdict::inconclusive;
    bool diverges = false;
    std::string method;    // "geometric" or "dyadic"
    double rate = 0.0;     // tail slope of log block integrals (geometric) or log2 growth of dyadic blocks
    double margin = 0.0;   // distance of rate from the nearest classification cut
    double partial = 0.0;  // integral over [1, e^{u_max}]
    double value = 0.0;    // extrapolated total when converging, else partial
};

// Integral of phi(t)^delta / t over [1, inf).
IntegralTestResult integral_test(const PhiSpec& phi, double delta, const IntegralBounds& bounds = {});
// Integral of psi(t)/t^2 over (0, 1] through phi(t) = t psi(2/t).
IntegralTestResult integral_test_intro(const std::function<double(double)>& psi, double delta,
                                       const IntegralBounds& bounds = {});
PhiSpec intro_to_phi(const std::function<double(double)>& psi);

struct MonteCarloOptions {
    std::vector<double> thresholds{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    double tail_ratio = 100.0;  // tail statistic over h in [h_max / tail_ratio, h_max]; 0 disables it
    double window_lo = 0.0;     // targets are uniform in [window_lo, window_lo + 1)
    int threads = 1;
    bool parallel = true;
};

struct MonteCarloReport {
    std::string phi;
    double delta = 1.0;
    double h_max = 0.0;
    std::uint64_t seed = 0;
    std::string rng;  // generator identifier
    long n_points = 0;
    std::vector<double> x;       // targets, by index
    std::vector<double> m;       // min over h(r) <= h_max of (h/phi(h)) |x - r|
    std::vector<double> tail_m;  // same over h(r) in [h_max / tail_ratio, h_max]
    std::vector<std::pair<double, double>> cdf;       // (threshold, fraction of m below it)
    std::vector<std::pair<double, double>> tail_cdf;
    double median = 0.0;
    double tail_median = 0.0;

    double fraction_below(double threshold) const;
};

// Exact minimum of (h/phi(h)) |x - r| over orbit points with h_lo <= h(r) <= h_hi (phi assumed regular enough that
// its extremes on each dyadic band of h are found by sampling the band).
double weighted_orbit_min(double x, const QuadSurd& alpha0, const GroupSpec& group, const PhiSpec& phi, double h_lo,
                          double h_hi);

MonteCarloReport monte_carlo_liminf(const QuadSurd& alpha0, const GroupSpec& group, const PhiSpec& phi, double delta,
                                    long n_points, double h_max, std::uint64_t seed,
                                    const MonteCarloOptions& opts = {});

}  // namespace qspec
