#include "qspec/spectrum.hpp"

#include <gmpxx.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>

#include "qspec/forms.hpp"
#include "qspec/hgeom.hpp"

namespace qspec {

namespace {

constexpr unsigned kPrec = 192;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;

mpf_class to_mpf(const mpq_class& q) {
    mpf_class f(0, kPrec);
    f = q;
    return f;
}

// Real target split as n + frac with n integral, frac in [0, 1).
struct Target {
    mpz_class n;
    mpf_class frac{0, kPrec};
};

Target target_of(const QuadSurd& x) {
    Target t;
    t.n = x.floor();
    QuadSurd fr = x - QuadSurd(BaseScalar(t.n));
    mpf_class s(0, kPrec);
    if (fr.is_irrational()) {
        s = to_mpf(mpq_class(fr.delta()));
        s = sqrt(s);
        s *= to_mpf(fr.v().re);
    }
    t.frac = to_mpf(fr.u().re) + s;
    return t;
}

Target target_of(double x) {
    if (!std::isfinite(x)) throw DomainError("target must be finite");
    Target t;
    double fl = std::floor(x);
    t.n = mpz_class(fl);
    t.frac = mpf_class(x - fl, kPrec);
    return t;
}

std::vector<double> normalized_grid(const std::vector<double>& grid, double h_max) {
    std::vector<double> g = grid.empty() ? default_h_grid(h_max) : grid;
    for (double T : g)
        if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("thresholds must be positive");
    if (!std::is_sorted(g.begin(), g.end()) || std::adjacent_find(g.begin(), g.end()) != g.end())
        throw DomainError("thresholds must be strictly increasing");
    if (g.back() > h_max) throw DomainError("thresholds must not exceed h_max");
    return g;
}

ApproxEstimate estimate_core(const Target& t, const QuadSurd& alpha0, const GroupSpec& group, double h_max,
                             const EstimateOptions& opts) {
    if (!(h_max > 0.0) || !std::isfinite(h_max)) throw DomainError("h_max must be a positive real");
    ApproxEstimate est;
    est.h_max = h_max;
    est.thresholds = normalized_grid(opts.h_grid, h_max);
    const double T0 = est.thresholds.front();
    const mpz_class D = BQForm::of(alpha0).disc();
    mpf_class sqrtD(0, kPrec);
    sqrtD = to_mpf(mpq_class(D));
    sqrtD = sqrt(sqrtD);
    const double sqrtDd = std::sqrt(D.get_d());
    OrbitOptions oo = opts.orbit;
    oo.witnesses = false;

    for (double B = opts.initial_bound;; B *= 2.0) {
        mpq_class half(B / T0);
        mpq_class fq(t.frac);
        // window offsets depend on frac only, so x and x + 1 scan translated sets
        Window w{mpq_class(t.n) + fq - half, mpq_class(t.n) + fq + half};
        std::vector<OrbitElement> elems = enumerate_orbit_window(alpha0, group, h_max, w, oo);
        std::vector<double> tails(est.thresholds.size(), kInf);
        mpf_class r(0, kPrec), diff(0, kPrec);
        for (const OrbitElement& e : elems) {
            const mpz_class& a = e.form.a;
            mpz_class bs = e.form.b + 2 * a * t.n;
            // r - n = (-b' + sqrt D) / (2a)
            r = sqrtD - to_mpf(mpq_class(bs));
            r /= to_mpf(mpq_class(2 * a));
            diff = t.frac - r;
            double h = 2.0 * std::abs(a.get_d()) / sqrtDd;
            double val = h * std::abs(diff.get_d());
            for (size_t i = 0; i < tails.size(); ++i)
                if (h >= est.thresholds[i]) tails[i] = std::min(tails[i], val);
        }
        est.tail_infima = tails;
        est.window_bound = B;
        bool complete = std::all_of(tails.begin(), tails.end(), [&](double v) { return v <= B; });
        if (complete || B * 2.0 > opts.max_bound) break;
    }
    return est;
}

struct Arc {
    double xmin, xmax, ymin, ymax;
};

// Euclidean bounding box of the arc of the semicircle (center, radius) between two of its points.
Arc arc_box(const HPoint& p, const HPoint& q, double center, double radius) {
    double pa = std::atan2(p.h, p.z.real() - center), qa = std::atan2(q.h, q.z.real() - center);
    Arc b;
    b.xmin = std::min(p.z.real(), q.z.real());
    b.xmax = std::max(p.z.real(), q.z.real());
    b.ymin = std::min(p.h, q.h);
    b.ymax = std::max(p.h, q.h);
    if (std::min(pa, qa) <= M_PI / 2 && M_PI / 2 <= std::max(pa, qa)) b.ymax = radius;
    return b;
}

// Integral map of determinant one taking p into |Re z| <= 1/2, |z| >= 1.
MoebiusMap to_fundamental_domain(HPoint p) {
    long a = 1, b = 0, c = 0, d = 1;
    for (int guard = 0; guard < 10000; ++guard) {
        double n = std::round(p.z.real());
        if (n != 0.0) {
            long k = static_cast<long>(n);
            p.z -= n;
            a -= k * c;
            b -= k * d;
        }
        double r2 = std::norm(p.z) + p.h * p.h;
        if (r2 >= 1.0 - 1e-12) break;
        // z -> -1/z
        p = {-std::conj(p.z) / r2, p.h / r2};
        long na = -c, nb = -d;
        c = a;
        d = b;
        a = na;
        b = nb;
    }
    return MoebiusMap(BaseScalar(a), BaseScalar(b), BaseScalar(c), BaseScalar(d));
}

}  // namespace

std::vector<double> default_h_grid(double h_max) {
    if (!(h_max > 1.0) || !std::isfinite(h_max)) throw DomainError("h_max must exceed 1");
    std::vector<double> g;
    for (double T = 1.0; T < h_max * (1.0 - 1e-12); T *= 10.0) g.push_back(T);
    return g;
}

bool in_exceptional_set(const QuadSurd& x, const QuadSurd& alpha0, const GroupSpec& group) {
    if (!x.is_irrational() || !x.is_real() || x.m() != 0) return false;
    if (BQForm::of(x).disc() != BQForm::of(alpha0).disc()) return false;
    Complexity h = complexity_h(x);
    double xd = x.to_double();
    double pad = 1e-9 * std::max(1.0, std::abs(xd));
    Window w{mpq_class(xd - pad), mpq_class(xd + pad)};
    OrbitOptions oo;
    oo.parallel = false;
    oo.witnesses = false;
    for (const OrbitElement& e : enumerate_orbit_window(alpha0, group, h.value * (1.0 + 1e-9), w, oo))
        if (e.value == x) return true;
    return false;
}

ApproxEstimate approx_constant_estimate(const QuadSurd& x, const QuadSurd& alpha0, const GroupSpec& group,
                                        double h_max, const EstimateOptions& opts) {
    if (!x.is_irrational()) throw DomainError("approximation constant is undefined at rational points");
    if (!x.is_real() || x.m() != 0) throw DomainError("target must be real");
    if (in_exceptional_set(x, alpha0, group)) throw DomainError("target lies in the orbit of alpha0 or its conjugate");
    return estimate_core(target_of(x), alpha0, group, h_max, opts);
}

ApproxEstimate approx_constant_estimate(double x, const QuadSurd& alpha0, const GroupSpec& group, double h_max,
                                        const EstimateOptions& opts) {
    return estimate_core(target_of(x), alpha0, group, h_max, opts);
}

// ------------------------------------------------------------ periodic points

SpectrumSample approx_constant_periodic(const QuadSurd& xi, const QuadSurd& alpha0, const GroupSpec& group,
                                        const PeriodicOptions& opts) {
    xi.require_irrational("approx_constant_periodic");
    if (!xi.is_real() || xi.m() != 0) throw DomainError("periodic point must be a real quadratic irrational");
    SpectrumSample out;
    out.xi = xi;
    out.disc = BQForm::of(xi).disc();
    if (in_exceptional_set(xi, alpha0, group)) {
        out.exceptional = true;
        return out;
    }

    MoebiusMap g = automorph_of(xi);
    if (group.kind == GroupKind::finite_index) {
        MoebiusMap p = g;
        bool found = false;
        for (int k = 1; k <= group.index && !found; ++k) {
            if (group.member(p)) {
                g = p;
                found = true;
            } else {
                p = p * g;
            }
        }
        if (!found) throw std::logic_error("no power of the automorph lies in the subgroup");
    }
    const double ell_g = classify(g).translation_length;

    const Geodesic A(BoundaryPoint::of(xi.galois()), BoundaryPoint::of(xi));
    const CMoebius M = normalizer(A);  // xi^sigma -> 0, xi -> inf
    const CMoebius Minv = M.inverse();
    const double xd = xi.to_double(), xs = xi.galois().to_double();
    const double s_top = std::log(M.apply(HPoint{0.5 * (xd + xs), 0.5 * std::abs(xd - xs)}).h);
    const double s0 = s_top - 0.5 * ell_g;
    auto on_axis = [&](double s) { return Minv.apply(HPoint{0.0, std::exp(s)}); };
    // the orbit of the full modular group is invariant under PSL2(Z), so each piece can be moved
    // next to the standard fundamental domain before scanning
    const bool can_move = group.kind != GroupKind::finite_index;

    const mpz_class D0 = BQForm::of(alpha0).disc();
    const double rho_max = std::sqrt(D0.get_d()) / 2.0;  // |a| >= 1
    const double h_min = 1.0 / rho_max;
    const int pieces = std::max(1, static_cast<int>(std::ceil(ell_g / opts.piece_length)));
    OrbitOptions oo = opts.orbit;
    oo.witnesses = false;

    double bound = opts.initial_bound;
    double best = kInf;
    for (int it = 0; it <= opts.max_doublings; ++it, bound *= 2.0) {
        const double R = std::acosh(1.0 + bound) + 1e-9;
        const double shR = std::sinh(R), eR = std::exp(R);
        std::set<BQForm> seen;
        double m = kInf;
        try {
            for (int k = 0; k < pieces; ++k) {
                double sa = s0 + ell_g * k / pieces, sb = s0 + ell_g * (k + 1) / pieces;
                HPoint pa = on_axis(sa), pb = on_axis(sb);
                MoebiusMap mv = can_move ? to_fundamental_domain(on_axis(0.5 * (sa + sb))) : MoebiusMap();
                MoebiusMap mv_inv = mv.inverse();
                CMoebius cmv = CMoebius::from(mv);
                QuadSurd e0 = mv.apply(xi.galois()), e1 = mv.apply(xi);
                Geodesic Am(BoundaryPoint::of(e0), BoundaryPoint::of(e1));
                CMoebius Mm = normalizer(Am);
                // the parameter along the moved axis differs from the original one by a constant
                HPoint qa = cmv.apply(pa), qb = cmv.apply(pb);
                double offset = std::log(Mm.apply(qa).h) - sa;
                double c_m = 0.5 * (e0.to_double() + e1.to_double()), r_m = 0.5 * std::abs(e0.to_double() - e1.to_double());
                Arc b = arc_box(qa, qb, c_m, r_m);
                double y_lo = b.ymin / eR * (1.0 - 1e-9);
                double hcap = 1.0 / y_lo;
                if (hcap < h_min) continue;
                double pad = 2.0 * rho_max + 1e-9 * (1.0 + std::abs(b.xmin) + std::abs(b.xmax));
                double X0 = b.xmin - b.ymax * shR - pad;
                double X1 = b.xmax + b.ymax * shR + pad;
                for (const OrbitElement& e : enumerate_orbit_window(alpha0, group, hcap, Window::of(X0, X1), oo)) {
                    Geodesic C(BoundaryPoint::of(e.sigma), BoundaryPoint::of(e.value));
                    ComplexDistance cd = complex_distance(Am, C);
                    if (!(cd.ell < R)) continue;
                    // keep class representatives whose foot lies in the fundamental segment; the slack
                    // may admit both ends of one class, which leaves the minimum unchanged
                    double u = Mm.apply(C.minus).z.real(), v = Mm.apply(C.plus).z.real();
                    double f = 0.5 * std::log(std::abs(u * v)) - offset;
                    if (f < s0 - 1e-9 || f > s0 + ell_g + 1e-9) continue;
                    BQForm key = can_move ? BQForm::of(mv_inv.apply(e.value)).unoriented() : e.form.unoriented();
                    if (!seen.insert(key).second) continue;
                    m = std::min(m, std::cosh(cd.ell) - std::abs(std::cos(cd.theta)));
                }
            }
        } catch (const BudgetExceeded&) {
            out.c_value = std::min(best, m);
            out.certified = false;
            return out;
        }
        best = std::min(best, m);
        out.axes = static_cast<int>(seen.size());
        if (m <= bound - kSlack) {
            out.c_value = m;
            out.certified = true;
            out.cert_radius = R;
            return out;
        }
    }
    out.c_value = best;
    out.certified = false;
    return out;
}

std::vector<SpectrumSample> spectrum_sample(const std::vector<QuadSurd>& points, const QuadSurd& alpha0,
                                            const GroupSpec& group, const PeriodicOptions& opts) {
    std::vector<SpectrumSample> all(points.size());
    std::vector<std::exception_ptr> errs(points.size());
    PeriodicOptions inner = opts;
    inner.orbit.parallel = false;
    int nthreads = opts.orbit.parallel ? (opts.orbit.threads > 0 ? opts.orbit.threads : omp_get_max_threads()) : 1;
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 1)
    for (long i = 0; i < static_cast<long>(points.size()); ++i) {
        try {
            all[i] = approx_constant_periodic(points[i], alpha0, group, inner);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    std::vector<SpectrumSample> out;
    for (auto& s : all)
        if (s.certified && !s.exceptional) out.push_back(std::move(s));
    std::sort(out.begin(), out.end(), [](const SpectrumSample& a, const SpectrumSample& b) {
        if (a.disc != b.disc) return a.disc < b.disc;
        if (a.c_value != b.c_value) return a.c_value < b.c_value;
        return compare(a.xi, b.xi) < 0;
    });
    return out;
}

std::vector<SpectrumSample> spectrum_sample(const QuadSurd& alpha0, const GroupSpec& group, long trace_budget,
                                            const PeriodicOptions& opts) {
    FormCycle excluded = form_reduce_cycle(BQForm::of(alpha0));
    return spectrum_sample(enumerate_hyperbolic_points(group, excluded, trace_budget), alpha0, group, opts);
}

QuadSurd golden_family_point(long n) {
    if (n == 0) throw DomainError("n must be nonzero");
    return QuadSurd(BaseScalar(mpq_class(n, 2)), BaseScalar(mpq_class(1, 2)), mpq_class(n * n + 4));
}

// ------------------------------------------------------------------ catalog

double hurwitz_bounds_catalog(HurwitzCase c, long m) {
    const double s2 = 1.0 + std::sqrt(2.0);
    switch (c) {
        case HurwitzCase::psl2z:
            return s2 * std::sqrt(3.0);  // Delta = log(3) / 2
        case HurwitzCase::modular_torus:
            return s2 * std::exp(0.5 * std::log(3.0) + std::acosh(1.5));
        case HurwitzCase::bianchi: {
            double md = static_cast<double>(m);
            if (m == 1 || m == 2) return s2 * (2.0 + std::sqrt(1.0 + md)) / std::sqrt(3.0 - md);
            if (m == 3 || m == 7 || m == 11)
                return s2 * (4.0 * std::sqrt(md) + md + 1.0) / std::sqrt(14.0 * md - md * md - 1.0);
            throw DomainError("Bianchi bound is catalogued for m in {1, 2, 3, 7, 11}");
        }
        case HurwitzCase::hurwitz_h5:
        case HurwitzCase::eisenstein_picard:
            return s2 * s2 * s2;
        case HurwitzCase::hurwitz_modular:
            return std::pow(s2, 9);
    }
    throw DomainError("unsupported catalog case");
}

HurwitzCase parse_hurwitz_case(const std::string& name, long* m) {
    if (m) *m = 0;
    if (name == "psl2z") return HurwitzCase::psl2z;
    if (name == "modular_torus") return HurwitzCase::modular_torus;
    if (name == "hurwitz_h5") return HurwitzCase::hurwitz_h5;
    if (name == "eisenstein_picard") return HurwitzCase::eisenstein_picard;
    if (name == "hurwitz_modular") return HurwitzCase::hurwitz_modular;
    const std::string pre = "bianchi";
    if (name.rfind(pre, 0) == 0) {
        std::string rest = name.substr(pre.size());
        if (!rest.empty() && (rest.front() == '(' || rest.front() == ':')) rest = rest.substr(1);
        if (!rest.empty() && rest.back() == ')') rest.pop_back();
        try {
            size_t used = 0;
            long v = std::stol(rest, &used);
            if (used == rest.size()) {
                if (m) *m = v;
                return HurwitzCase::bianchi;
            }
        } catch (const std::exception&) {
        }
    }
    throw DomainError("unsupported catalog case: " + name);
}

// --------------------------------------------------------------- Liouville

QuadSurd periodic_continued_fraction(const std::vector<long>& pattern) {
    if (pattern.empty()) throw DomainError("empty continued fraction block");
    mpz_class a = 1, b = 0, c = 0, d = 1;
    for (long q : pattern) {
        if (q <= 0) throw DomainError("partial quotients must be positive");
        // (a b; c d) * (q 1; 1 0)
        mpz_class na = a * q + b, nc = c * q + d;
        b = a;
        d = c;
        a = na;
        c = nc;
    }
    // y = [pattern; y] solves c y^2 + (d - a) y - b = 0, y > 1; the value is 1/y
    mpz_class disc = (a - d) * (a - d) + 4 * b * c;
    QuadSurd y(BaseScalar(mpq_class(a - d, 2 * c)), BaseScalar(mpq_class(1, 2 * c)), mpq_class(disc));
    return inverse(y);
}

LiouvilleResult liouville_construct(const std::vector<long>& pattern, double h_max, const EstimateOptions& opts) {
    if (!pattern.empty() && std::all_of(pattern.begin(), pattern.end(), [](long q) { return q == 1; }))
        throw DomainError("an all-ones block gives a point in the orbit of the golden ratio");
    LiouvilleResult out;
    out.value = periodic_continued_fraction(pattern);
    out.estimate = approx_constant_estimate(out.value, QuadSurd::golden(), GroupSpec::psl2z(), h_max, opts);
    PeriodicOptions po;
    po.orbit = opts.orbit;
    out.periodic = approx_constant_periodic(out.value, QuadSurd::golden(), GroupSpec::psl2z(), po);
    return out;
}

}  // namespace qspec
