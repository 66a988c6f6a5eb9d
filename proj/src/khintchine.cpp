#include "qspec/khintchine.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qspec/forms.hpp"

namespace qspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SlowlyVaryingReport ratio_scan(const std::vector<double>& logs, double step, const SlowlyVaryingOptions& opts) {
    if (!(opts.B > 0.0)) throw DomainError("slowly_varying_check: B must be positive");
    SlowlyVaryingReport r;
    r.B = opts.B;
    double worst = 0.0;
    long reach = std::max(1L, static_cast<long>(std::floor(opts.B / step + 1e-9)));
    for (size_t i = 0; i < logs.size(); ++i)
        for (size_t j = i + 1; j < logs.size() && static_cast<long>(j - i) <= reach; ++j)
            worst = std::max(worst, std::abs(logs[j] - logs[i]));
    r.A = std::exp(worst);
    r.ok = worst <= std::log(opts.A_cap);
    return r;
}

std::vector<double> grid(double lo, double hi, int samples) {
    if (samples < 2 || !(hi > lo)) throw DomainError("slowly_varying_check: need lo < hi and at least 2 samples");
    std::vector<double> g(samples);
    for (int i = 0; i < samples; ++i) g[i] = lo + (hi - lo) * i / (samples - 1);
    return g;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SlowlyVaryingReport slowly_varying_check(const std::function<double(double)>& f, double lo, double hi, int samples,
                                         const SlowlyVaryingOptions& opts) {
    std::vector<double> g = grid(lo, hi, samples), logs;
    for (double t : g) {
        double v = f(t);
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("slowly_varying_check: f is not positive at t = " + num(t));
        logs.push_back(std::log(v));
    }
    return ratio_scan(logs, g[1] - g[0], opts);
}

SlowlyVaryingReport slowly_varying_check_log(const std::function<double(double)>& log_f, double lo, double hi,
                                             int samples, const SlowlyVaryingOptions& opts) {
    std::vector<double> g = grid(lo, hi, samples), logs;
    for (double t : g) {
        double v = log_f(t);
        if (!std::isfinite(v)) throw DomainError("slowly_varying_check: log f is not finite at t = " + num(t));
        logs.push_back(v);
    }
    return ratio_scan(logs, g[1] - g[0], opts);
}

PhiSpec PhiSpec::power(double a) {
    if (a == 0.0) return constant(1.0);
    return {"t^" + num(a), [a](double t) { return std::pow(t, a); }};
}

PhiSpec PhiSpec::constant(double c) {
    if (!(c > 0.0)) throw DomainError("phi must be positive");
    return {num(c), [c](double) { return c; }};
}

PhiSpec PhiSpec::parse(const std::string& text) {
    auto to_double = [&](const std::string& s) {
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw ParseError("");
            return v;
        } catch (const std::exception&) {
            throw ParseError("cannot parse phi: " + text);
        }
    };
    if (text.rfind("power:", 0) == 0) return power(to_double(text.substr(6)));
    if (text.rfind("t^", 0) == 0) return power(to_double(text.substr(2)));
    return constant(to_double(text));
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::diverges: return "diverges";
        case Verdict::converges: return "converges";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

IntegralTestResult integral_test(const PhiSpec& phi, double delta, const IntegralBounds& bounds) {
    if (!(delta > 0.0)) throw DomainError("integral_test: delta must be positive");
    if (!(bounds.u_max >= 64.0)) throw DomainError("integral_test: u_max must be at least 64");
    auto g = [&](double u) { return std::pow(phi.f(std::exp(u)), delta); };
    // t -> phi(e^t) must be slowly varying: checked on the range where its values are representable
    double u_check = std::min(bounds.u_max, 50.0);
    auto chk = slowly_varying_check(
        [&](double u) {
            double v = phi.f(std::exp(u));
            if (!(v > 0.0)) throw DomainError("integral_test: phi is not positive");
            return v;
        },
        0.0, u_check, 501);
    if (!chk.ok) throw DomainError("integral_test: t -> phi(e^t) is not slowly varying");

    const int K = static_cast<int>(bounds.u_max);
    std::vector<double> blocks(K);
    IntegralTestResult res;
    for (int k = 0; k < K; ++k) {
        double b = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, k, k + 1, 15, bounds.tol);
        blocks[k] = b;
        res.partial += b;
    }
    res.value = res.partial;
    if (!std::isfinite(res.partial)) {
        res.verdict = Verdict::diverges;
        res.diverges = true;
        res.method = "geometric";
        res.rate = kInf;
        res.margin = kInf;
        return res;
    }
    for (double b : blocks)
        if (b < 0.0) throw DomainError("integral_test: negative integrand");

    // exponential tail rate of the unit blocks over the second half of the range
    int k0 = K / 2;
    bool zero_tail = false;
    std::vector<double> ks, ls;
    for (int k = k0; k < K; ++k) {
        if (blocks[k] == 0.0) {
            zero_tail = true;
            break;
        }
        ks.push_back(k);
        ls.push_back(std::log(blocks[k]));
    }
    res.method = "geometric";
    if (zero_tail) {
        res.verdict = Verdict::converges;
        res.rate = -kInf;
        res.margin = kInf;
        return res;
    }
    double n = ks.size(), mk = 0, ml = 0;
    for (size_t i = 0; i < ks.size(); ++i) {
        mk += ks[i] / n;
        ml += ls[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < ks.size(); ++i) {
        sxx += (ks[i] - mk) * (ks[i] - mk);
        sxy += (ks[i] - mk) * (ls[i] - ml);
    }
    double slope = sxy / sxx, resid = 0;
    for (size_t i = 0; i < ks.size(); ++i) {
        double e = ls[i] - (ml + slope * (ks[i] - mk));
        resid += e * e / n;
    }
    const double cut_geo = 0.01;
    res.rate = slope;
    if (std::sqrt(resid) > 1.0) {
        res.verdict = Verdict::inconclusive;
        res.margin = 0.0;
        return res;
    }
    if (slope < -cut_geo) {
        res.verdict = Verdict::converges;
        res.margin = -cut_geo - slope;
        double q = std::exp(slope);
        res.value = res.partial + blocks.back() * q / (1.0 - q);
        return res;
    }
    if (slope > cut_geo) {
        res.verdict = Verdict::diverges;
        res.diverges = true;
        res.margin = slope - cut_geo;
        return res;
    }

    // sub-exponential: growth of dyadic block sums
    res.method = "dyadic";
    std::vector<double> dy;
    for (int lo = 1; 2 * lo <= K; lo *= 2) {
        double s = 0;
        for (int k = lo; k < 2 * lo; ++k) s += blocks[k];
        dy.push_back(s);
    }
    double q = std::log2(dy.back() / dy[dy.size() - 2]);
    const double cut_div = -0.05, cut_conv = -0.25;
    res.rate = q;
    if (q > cut_div) {
        res.verdict = Verdict::diverges;
        res.diverges = true;
        res.margin = q - cut_div;
    } else if (q < cut_conv) {
        res.verdict = Verdict::converges;
        res.margin = cut_conv - q;
        double r = std::exp2(q);
        res.value = res.partial + dy.back() * r / (1.0 - r);
    } else {
        res.verdict = Verdict::inconclusive;
        res.margin = std::min(q - cut_conv, cut_div - q);
    }
    return res;
}

PhiSpec intro_to_phi(const std::function<double(double)>& psi) {
    return {"t*psi(2/t)", [psi](double t) { return t * psi(2.0 / t); }};
}

IntegralTestResult integral_test_intro(const std::function<double(double)>& psi, double delta,
                                       const IntegralBounds& bounds) {
    return integral_test(intro_to_phi(psi), delta, bounds);
}

double MonteCarloReport::fraction_below(double threshold) const {
    if (m.empty()) return 0.0;
    long c = std::count_if(m.begin(), m.end(), [&](double v) { return v < threshold; });
    return static_cast<double>(c) / m.size();
}

double weighted_orbit_min(double x, const QuadSurd& alpha0, const GroupSpec& group, const PhiSpec& phi, double h_lo,
                          double h_hi) {
    alpha0.require_irrational("weighted_orbit_min");
    double sqrtD = std::sqrt(BQForm::of(alpha0).disc().get_d());
    double h_floor = std::max(h_lo, 2.0 / sqrtD * (1.0 - 1e-12));  // h = 2|a|/sqrt D
    if (h_floor > h_hi) return kInf;
    auto w = [&](double h) { return h / phi.f(h); };
    // dyadic bands [L, U] covering [h_floor, h_hi]
    std::vector<std::pair<double, double>> bands;
    for (double L = h_floor; L < h_hi;) {
        double U = std::min(h_hi, 2.0 * L);
        bands.push_back({L, U});
        L = U;
    }
    if (bands.empty()) bands.push_back({h_floor, h_hi});
    std::vector<double> w_inf;
    for (auto [L, U] : bands) {
        double m = kInf;
        for (int i = 0; i <= 32; ++i) m = std::min(m, w(L * std::pow(U / L, i / 32.0)));
        w_inf.push_back(m * (1.0 - 1e-9));
    }
    OrbitOptions oo;
    oo.parallel = false;
    oo.witnesses = false;
    for (double B = 1.5; B < 1e9; B *= 4.0) {
        double best = kInf;
        for (size_t k = 0; k < bands.size(); ++k) {
            auto [L, U] = bands[k];
            double radius = std::min(B, best) / w_inf[k];
            auto elems = enumerate_orbit_window(alpha0, group, U * (1.0 + 1e-12), Window::of(x - radius, x + radius), oo);
            for (const auto& e : elems) {
                double h = e.h.value;
                if (h < L * (1.0 - 1e-12) || h < h_lo) continue;
                best = std::min(best, w(h) * std::abs(x - e.x));
            }
        }
        if (best <= B) return best;
    }
    throw NumericInconclusive("weighted_orbit_min: no orbit point found");
}

MonteCarloReport monte_carlo_liminf(const QuadSurd& alpha0, const GroupSpec& group, const PhiSpec& phi, double delta,
                                    long n_points, double h_max, std::uint64_t seed, const MonteCarloOptions& opts) {
    if (delta != 1.0) throw DomainError("monte_carlo_liminf: delta must be 1 for real targets");
    if (!(h_max > 0.0)) throw DomainError("monte_carlo_liminf: h_max must be positive");
    MonteCarloReport rep;
    rep.phi = phi.name;
    rep.delta = delta;
    rep.h_max = h_max;
    rep.seed = seed;
    rep.rng = "mt19937_64 per point, seed_seq(seed_lo, seed_hi, index_lo, index_hi), uniform_real_distribution";
    rep.n_points = std::max(0L, n_points);
    rep.x.resize(rep.n_points);
    rep.m.resize(rep.n_points);
    rep.tail_m.assign(opts.tail_ratio > 0.0 ? rep.n_points : 0, 0.0);
    for (long i = 0; i < rep.n_points; ++i) {
        std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(ss);
        rep.x[i] = opts.window_lo + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads) if (opts.parallel)
    for (long i = 0; i < rep.n_points; ++i) {
        rep.m[i] = weighted_orbit_min(rep.x[i], alpha0, group, phi, 0.0, h_max);
        if (opts.tail_ratio > 0.0)
            rep.tail_m[i] = weighted_orbit_min(rep.x[i], alpha0, group, phi, h_max / opts.tail_ratio, h_max);
    }
    auto cdf = [&](const std::vector<double>& v) {
        std::vector<std::pair<double, double>> out;
        if (v.empty()) return out;
        for (double t : opts.thresholds) {
            long c = std::count_if(v.begin(), v.end(), [&](double y) { return y < t; });
            out.push_back({t, static_cast<double>(c) / v.size()});
        }
        return out;
    };
    auto median = [](std::vector<double> v) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    rep.cdf = cdf(rep.m);
    rep.tail_cdf = cdf(rep.tail_m);
    rep.median = median(rep.m);
    rep.tail_median = median(rep.tail_m);
    return rep;
}

}  // namespace qspec
