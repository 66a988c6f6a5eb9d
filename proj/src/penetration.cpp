#include "qspec/penetration.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>

namespace qspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr unsigned kPrec = 320;
constexpr double kMaxDepth = 120.0;   // 320 bits resolve the ray down to heights e^{-120} with room to spare
constexpr double kPiece = 0.5;
constexpr double kEdge = 1e-7;        // pieces overlap by this much; duplicates are removed by axis

void require_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
}

double f_value(PenetrationMap map, const Geodesic& rho, const Geodesic& L, double eps) {
    switch (map) {
        case PenetrationMap::ell: return penetration_length(rho, L, eps).value_or(kInf);
        case PenetrationMap::ftp: return fellow_traveller(rho, L).value_or(kInf);
        case PenetrationMap::cp: return crossratio_penetration(rho, L).value_or(kInf);
    }
    return 0.0;
}

// Heights y_lo <= y_hi at which the vertical line over 0 crosses the boundary of N_eps of the semicircle
// with endpoints u, v (both finite, nonzero); empty when the line misses the neighbourhood.
bool vertical_crossing(double u, double v, double eps, double* y_lo, double* y_hi) {
    double r = 0.5 * std::abs(v - u), s = std::sinh(eps);
    double disc = r * r * s * s - u * v;
    if (disc < 0.0) return false;
    double sq = std::sqrt(disc);
    *y_hi = sq + r * s;
    // |sq - r s| without cancellation: (sq - rs)(sq + rs) = -uv
    *y_lo = std::abs(u * v) / *y_hi;
    return true;
}

struct RawEvent {
    double t_enter, t_exit;
    bool terminal;
};

// Ray along the vertical line over 0 in some coordinates, time t = log(height) + K. L has endpoints u, v
// there (possibly infinite, meaning L shares the endpoint inf with the line).
std::optional<RawEvent> crossing_event(const BoundaryPoint& u, const BoundaryPoint& v, double eps, double K) {
    if (u.infinite || v.infinite) {
        double w = std::abs((u.infinite ? v : u).z.real());
        return RawEvent{std::log(w / std::sinh(eps)) + K, kInf, true};
    }
    double ylo, yhi;
    if (!vertical_crossing(u.z.real(), v.z.real(), eps, &ylo, &yhi)) return std::nullopt;
    return RawEvent{std::log(ylo) + K, std::log(yhi) + K, false};
}

void finish(std::vector<PenetrationEvent>& ev) {
    std::sort(ev.begin(), ev.end(),
              [](const PenetrationEvent& a, const PenetrationEvent& b) { return a.t_enter < b.t_enter; });
    for (size_t i = 0; i < ev.size(); ++i) {
        if (i > 0 && !(ev[i].t_enter - ev[i - 1].t_enter > 1e-12))
            throw NumericInconclusive("two axes enter the neighbourhoods at the same time");
        if (ev[i].terminal) {
            ev.resize(i + 1);
            break;
        }
    }
}

double threshold(const PenetrationConfig& cfg) {
    return cfg.delta + cfg.kappa.value_or(default_kappa(cfg.map, cfg.eps));
}

struct Reduced {
    mpz_class a{1}, b{0}, c{0}, d{1};
};

// Element of PSL2(Z) taking (x, y) into |Re z| <= 1/2, |z| >= 1 (up to rounding).
Reduced reduce_point(mpf_class x, mpf_class y) {
    Reduced g;
    mpf_class half(0.5, kPrec), r2(0, kPrec), tmp(0, kPrec);
    for (int guard = 0; guard < 100000; ++guard) {
        tmp = x + half;
        tmp = floor(tmp);
        if (sgn(tmp) != 0) {
            mpz_class k(tmp);
            x -= tmp;
            g.a -= k * g.c;
            g.b -= k * g.d;
        }
        r2 = x * x + y * y;
        if (r2 >= 1.0 - 1e-12) return g;
        x = -x / r2;
        y = y / r2;
        mpz_class na = -g.c, nb = -g.d;
        g.c = g.a;
        g.d = g.b;
        g.a = na;
        g.b = nb;
    }
    throw NumericInconclusive("reduction to the fundamental domain did not terminate");
}

mpf_class real_to_mpf(const QuadSurd& x) {
    mpf_class u(0, kPrec), s(0, kPrec);
    u = x.u().re;
    if (x.is_irrational()) {
        s = mpq_class(x.delta());
        s = sqrt(s);
        mpf_class v(0, kPrec);
        v = x.v().re;
        s *= v;
    }
    return u + s;
}

}  // namespace

double default_kappa(PenetrationMap map, double eps) {
    require_eps(eps);
    switch (map) {
        case PenetrationMap::ell: return 0.0;
        case PenetrationMap::ftp: return 2.0 * c1_prime(eps) + 2.0 * eps;
        case PenetrationMap::cp: return 2.0 * c1_prime(eps) + 2.0 * eps + 4.0 * std::log1p(std::sqrt(2.0));
    }
    return 0.0;
}

std::vector<PenetrationEvent> penetration_sequence(const BoundaryPoint& xi, const std::vector<Geodesic>& family,
                                                   const PenetrationConfig& cfg) {
    require_eps(cfg.eps);
    if (xi.infinite || xi.dim != 2) throw DomainError("the ray must end at a finite real point");
    if (!(cfg.t_max >= 0.0)) throw DomainError("t_max must be non-negative");
    Geodesic rho(BoundaryPoint::infinity(), xi);
    double x = xi.z.real(), cut = threshold(cfg);
    std::vector<PenetrationEvent> out;
    for (const Geodesic& L : family) {
        if (L.minus.dim != 2 || L.plus.dim != 2) throw DomainError("family must lie in the upper half-plane");
        // translate xi to 0 and flip so that the ray becomes the vertical line over 0 run upwards: z -> -1/(z - x)
        // sends heights y on the ray to 1/y, so t = log(height).
        auto move = [&](const BoundaryPoint& p) {
            if (p.infinite) return BoundaryPoint::real(0.0);
            if (p.same(xi)) return BoundaryPoint::infinity();
            return BoundaryPoint::real(-1.0 / (p.z.real() - x));
        };
        BoundaryPoint u = move(L.minus), v = move(L.plus);
        if (u.infinite && v.infinite) throw DomainError("family member equals the ray");
        if (!u.infinite && !v.infinite && (u.z.real() == 0.0 || v.z.real() == 0.0))
            throw DomainError("family member shares the ray's starting point");
        auto raw = crossing_event(u, v, cfg.eps, 0.0);
        if (!raw || raw->t_exit < 0.0 || raw->t_enter > cfg.t_max) continue;
        PenetrationEvent e;
        e.t_enter = raw->t_enter;
        e.t_exit = raw->t_exit;
        e.terminal = raw->terminal;
        e.value = e.terminal ? kInf : f_value(cfg.map, rho, L, cfg.eps);
        if (!e.terminal && !(e.value > cut)) continue;
        if (L.plus.exact && L.plus.exact->is_irrational() && L.plus.exact->is_real())
            e.axis_form = BQForm::of(*L.plus.exact).unoriented();
        out.push_back(e);
    }
    finish(out);
    return out;
}

std::vector<PenetrationEvent> penetration_sequence(const QuadSurd& xi, const QuadSurd& alpha0,
                                                   const GroupSpec& group, const PenetrationConfig& cfg) {
    require_eps(cfg.eps);
    if (!xi.is_real()) throw DomainError("the ray must end at a real point");
    if (!(cfg.t_max >= 0.0)) throw DomainError("t_max must be non-negative");
    if (cfg.t_max > kMaxDepth)
        throw DomainError("t_max exceeds the family-generation box");
    alpha0.require_irrational("penetration_sequence");
    const bool can_move = group.kind != GroupKind::finite_index;
    const double cut = threshold(cfg), sh = std::sinh(cfg.eps);
    const double rho_pad = std::sqrt(std::abs(BQForm::of(alpha0).disc().get_d()));
    mpf_class xf = real_to_mpf(xi);
    const ExtPoint xi_ext = ExtPoint::of(xi);

    std::map<std::string, PenetrationEvent> found;
    int pieces = std::max(1, static_cast<int>(std::ceil(cfg.t_max / kPiece)));
    for (int k = 0; k < pieces; ++k) {
        double ta = k * kPiece, tb = std::min(cfg.t_max, (k + 1) * kPiece);
        MoebiusMap g;
        if (can_move) {
            mpf_class y(std::exp(-0.5 * (ta + tb)), kPrec);
            Reduced r = reduce_point(xf, y);
            g = MoebiusMap(BaseScalar(r.a), BaseScalar(r.b), BaseScalar(r.c), BaseScalar(r.d));
        }
        // moved ray: from g(inf) to g(xi); time along it is t = -log Im g^{-1}(z)
        ExtPoint start = g.apply(ExtPoint::infinity());
        QuadSurd end = g.apply(xi_ext).value;
        BoundaryPoint pm = start.infinite ? BoundaryPoint::infinity() : BoundaryPoint::of(start.value);
        BoundaryPoint pp = BoundaryPoint::of(end);
        Geodesic rho(pm, pp);
        double cd = g.c.to_double(), ad = g.a.to_double();
        double pole = start.infinite ? 0.0 : start.value.to_double();
        auto time_at = [&](const HPoint& q) {
            if (start.infinite) return -std::log(q.h) + 2.0 * std::log(std::abs(ad));
            return 2.0 * std::log(std::abs(cd)) + std::log(std::norm(q.z - pole) + q.h * q.h) - std::log(q.h);
        };
        CMoebius N = normalizer(rho), Ni = N.inverse();
        double K = time_at(Ni.apply(HPoint{0.0, 1.0}));
        auto at_time = [&](double t) { return Ni.apply(HPoint{0.0, std::exp(t - K)}); };

        HPoint qa = at_time(ta), qb = at_time(tb);
        double xmin = std::min(qa.z.real(), qb.z.real()), xmax = std::max(qa.z.real(), qb.z.real());
        double ymin = std::min(qa.h, qb.h), ymax = std::max(qa.h, qb.h);
        if (!pm.infinite) {
            double c0 = 0.5 * (pm.z.real() + pp.z.real()), r0 = 0.5 * std::abs(pp.z.real() - pm.z.real());
            double aa = std::atan2(qa.h, qa.z.real() - c0), ab = std::atan2(qb.h, qb.z.real() - c0);
            if (std::min(aa, ab) <= M_PI / 2 && M_PI / 2 <= std::max(aa, ab)) ymax = r0;
        }
        double pad = ymax * sh + rho_pad + 1e-9;
        double hcap = std::exp(cfg.eps) / ymin * (1.0 + 1e-9);
        Window w = Window::of(xmin - pad, xmax + pad);
        auto elems = enumerate_orbit_window(alpha0, group, hcap, w, cfg.orbit);

        MoebiusMap gi = g.inverse();
        for (const OrbitElement& el : elems) {
            bool terminal = el.value == end || el.sigma == end;
            Geodesic L(BoundaryPoint::of(el.sigma), BoundaryPoint::of(el.value));
            std::optional<RawEvent> raw;
            if (terminal) {
                const QuadSurd& other = el.value == end ? el.sigma : el.value;
                raw = crossing_event(BoundaryPoint::infinity(), N.apply(BoundaryPoint::of(other)), cfg.eps, K);
            } else {
                raw = crossing_event(N.apply(L.minus), N.apply(L.plus), cfg.eps, K);
            }
            if (!raw) continue;
            double t_first = std::max(raw->t_enter, 0.0);
            if (raw->t_exit < 0.0 || t_first < ta - kEdge || t_first >= tb + kEdge || raw->t_enter > cfg.t_max)
                continue;
            BQForm form = BQForm::of(gi.apply(el.value)).unoriented();
            std::string key = form.str();
            if (found.count(key)) continue;
            PenetrationEvent e;
            e.t_enter = raw->t_enter;
            e.t_exit = raw->t_exit;
            e.terminal = terminal;
            e.axis_form = form;
            e.value = terminal ? kInf : f_value(cfg.map, rho, L, cfg.eps);
            found.emplace(key, e);
        }
    }
    std::vector<PenetrationEvent> out;
    for (auto& [key, e] : found)
        if (e.terminal || e.value > cut) out.push_back(e);
    finish(out);
    return out;
}

void write_events_csv(std::ostream& os, const std::vector<PenetrationEvent>& events) {
    auto num = [](double v) {
        if (std::isinf(v)) return std::string("inf");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "t_enter,t_exit,a,b,c,value\n";
    for (const auto& e : events)
        os << num(e.t_enter) << ',' << num(e.t_exit) << ',' << e.axis_form.a << ',' << e.axis_form.b << ','
           << e.axis_form.c << ',' << num(e.value) << '\n';
}

// ------------------------------------------------------------------ inequality sampler

namespace {

Geodesic sample_geodesic(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-3.0, 3.0), coin(0.0, 1.0);
    auto pt = [&]() {
        if (coin(rng) < 0.08) return BoundaryPoint::infinity(dim);
        return dim == 2 ? BoundaryPoint::real(u(rng)) : BoundaryPoint::complex({u(rng), u(rng)});
    };
    for (;;) {
        BoundaryPoint a = pt(), b = pt();
        if (!a.same(b) && (a.infinite || b.infinite || std::abs(a.z - b.z) > 1e-3)) return Geodesic(a, b);
    }
}

bool separated(const Geodesic& g, const Geodesic& L) {
    const BoundaryPoint* p[4] = {&g.minus, &g.plus, &L.minus, &L.plus};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (p[i]->infinite && p[j]->infinite) return false;
            if (!p[i]->infinite && !p[j]->infinite && std::abs(p[i]->z - p[j]->z) < 1e-2) return false;
        }
    return true;
}

}  // namespace

InequalityReport check_penetration_inequalities(long samples, double eps, std::uint64_t seed, bool parallel) {
    require_eps(eps);
    InequalityReport rep;
    rep.samples = std::max(0L, samples);
    rep.eps = eps;
    rep.bound_ftp_ell = 2.0 * c1_prime(eps) + 2.0 * eps;
    rep.bound_cp_ftp = 4.0 * std::log1p(std::sqrt(2.0));
    double m1 = 0.0, m2 = 0.0;
    long skipped = 0;
#pragma omp parallel for schedule(static) reduction(max : m1, m2) reduction(+ : skipped) if (parallel)
    for (long i = 0; i < rep.samples; ++i) {
        std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(ss);
        int dim = (i % 2 == 0) ? 2 : 3;
        Geodesic rho = sample_geodesic(rng, dim), L = sample_geodesic(rng, dim);
        if (!separated(rho, L)) {
            ++skipped;
            continue;
        }
        PenetrationValues v = penetration_maps(rho, L, eps);
        double ell = v.ell.value(), ftp = v.ftp.value(), cp = v.cp.value();
        m1 = std::max(m1, std::abs(ftp - ell));
        m2 = std::max(m2, std::abs(cp - ftp));
    }
    rep.max_ftp_minus_ell = m1;
    rep.max_cp_minus_ftp = m2;
    rep.skipped = skipped;
    rep.ok = m1 <= rep.bound_ftp_ell && m2 <= rep.bound_cp_ftp;
    return rep;
}

// ------------------------------------------------------------------ intersection diameter

namespace {

// Point at signed distance eps from L, at parameter s along L (sides +1 / -1).
struct Curve {
    CMoebius to_plane;  // inverse normalizer of L
    double side;
    double sh;
    HPoint at(double s) const { return to_plane.apply(HPoint{side * std::exp(s) * sh, std::exp(s)}); }
};

struct Piece {
    const Curve* curve;
    double lo, hi;
};

constexpr double kSpan = 30.0;
constexpr double kStep = 0.01;

}  // namespace

double neighborhood_intersection_diameter(const Geodesic& L1, const Geodesic& L2, double eps) {
    require_eps(eps);
    for (const Geodesic* L : {&L1, &L2})
        if (L->minus.dim != 2 || L->plus.dim != 2) throw DomainError("geodesics must lie in the upper half-plane");
    if ((L1.minus.same(L2.minus) && L1.plus.same(L2.plus)) || (L1.minus.same(L2.plus) && L1.plus.same(L2.minus)))
        throw DomainError("the geodesics coincide");
    for (const BoundaryPoint* p : {&L1.minus, &L1.plus})
        for (const BoundaryPoint* q : {&L2.minus, &L2.plus})
            if (p->same(*q)) return kInf;

    double sh = std::sinh(eps);
    CMoebius n1 = normalizer(L1).inverse(), n2 = normalizer(L2).inverse();
    Curve curves[4] = {{n1, 1.0, sh}, {n1, -1.0, sh}, {n2, 1.0, sh}, {n2, -1.0, sh}};
    const Geodesic* other[4] = {&L2, &L2, &L1, &L1};

    // parameters where each boundary curve lies inside the other neighbourhood
    std::vector<Piece> pieces;
    for (int k = 0; k < 4; ++k) {
        const Curve& cv = curves[k];
        auto g = [&](double s) { return point_geodesic_distance(cv.at(s), *other[k]) - eps; };
        auto root = [&](double out, double in) {
            for (int it = 0; it < 200 && std::abs(out - in) > 1e-15 * std::max(1.0, std::abs(in)); ++it) {
                double mid = 0.5 * (out + in);
                (g(mid) <= 0.0 ? in : out) = mid;
            }
            return in;
        };
        int n = static_cast<int>(2 * kSpan / kStep);
        double best_s = -kSpan, best_g = kInf, prev = g(-kSpan);
        double start = std::nan("");
        if (prev <= 0.0) start = -kSpan;
        for (int i = 1; i <= n; ++i) {
            double s = -kSpan + i * kStep, cur = g(s);
            if (cur < best_g) {
                best_g = cur;
                best_s = s;
            }
            if (prev > 0.0 && cur <= 0.0) start = root(s - kStep, s);
            if (prev <= 0.0 && cur > 0.0) {
                pieces.push_back({&cv, start, root(s, s - kStep)});
                start = std::nan("");
            }
            prev = cur;
        }
        if (!std::isnan(start)) pieces.push_back({&cv, start, kSpan});
        if (best_g > 0.0) {
            // a crossing narrower than the scan step: look for it near the sampled minimum
            double lo = best_s - kStep, hi = best_s + kStep;
            const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
            for (int it = 0; it < 100; ++it) {
                double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
                (g(a) < g(b) ? hi : lo) = (g(a) < g(b) ? b : a);
            }
            double s0 = 0.5 * (lo + hi);
            if (g(s0) <= 0.0) pieces.push_back({&cv, root(best_s - kStep, s0), root(best_s + kStep, s0)});
        }
    }
    if (pieces.empty()) return 0.0;

    struct Cand {
        int piece;
        double s;
        HPoint p;
    };
    std::vector<Cand> cand;
    for (int k = 0; k < static_cast<int>(pieces.size()); ++k) {
        const Piece& pc = pieces[k];
        int m = std::max(2, static_cast<int>((pc.hi - pc.lo) / (4 * kStep)));
        for (int i = 0; i <= m; ++i) {
            double s = pc.lo + (pc.hi - pc.lo) * i / m;
            cand.push_back({k, s, pc.curve->at(s)});
        }
    }
    size_t bi = 0, bj = 0;
    double best = 0.0;
    for (size_t i = 0; i < cand.size(); ++i)
        for (size_t j = i + 1; j < cand.size(); ++j) {
            double d = point_distance(cand[i].p, cand[j].p);
            if (d > best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    if (best == 0.0) return 0.0;
    // coordinate ascent on the best pair
    double s1 = cand[bi].s, s2 = cand[bj].s;
    const Piece &P1 = pieces[cand[bi].piece], &P2 = pieces[cand[bj].piece];
    auto dist = [&](double a, double b) { return point_distance(P1.curve->at(a), P2.curve->at(b)); };
    auto maximize = [&](auto f, double lo, double hi) {
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 120; ++it) {
            double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
            if (f(a) > f(b))
                hi = b;
            else
                lo = a;
        }
        double m = 0.5 * (lo + hi);
        return m;
    };
    for (int round = 0; round < 20; ++round) {
        double n1s = maximize([&](double a) { return dist(a, s2); }, P1.lo, P1.hi);
        if (dist(n1s, s2) > dist(s1, s2)) s1 = n1s;
        for (double e : {P1.lo, P1.hi})
            if (dist(e, s2) > dist(s1, s2)) s1 = e;
        double n2s = maximize([&](double b) { return dist(s1, b); }, P2.lo, P2.hi);
        if (dist(s1, n2s) > dist(s1, s2)) s2 = n2s;
        for (double e : {P2.lo, P2.hi})
            if (dist(s1, e) > dist(s1, s2)) s2 = e;
    }
    return std::max(best, dist(s1, s2));
}

}  // namespace qspec
