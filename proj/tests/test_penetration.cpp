#include "qspec/penetration.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "qspec/spectrum.hpp"

using namespace qspec;

namespace {

const double kEps5 = 0.5 * std::log(5.0);
const double kDelta5 = 2.0 * std::log(2.0 + std::sqrt(5.0));

QuadSurd Q(long n) { return QuadSurd(n); }

Geodesic axis_of(const QuadSurd& r) { return Geodesic(BoundaryPoint::of(r.galois()), BoundaryPoint::of(r)); }

std::vector<Geodesic> golden_axes(double h_max, double lo, double hi) {
    auto elems = enumerate_orbit_window(QuadSurd::golden(), GroupSpec::psl2z(), h_max, Window::of(lo, hi));
    std::set<std::string> seen;
    std::vector<Geodesic> out;
    for (const auto& e : elems)
        if (seen.insert(e.form.unoriented().str()).second) out.push_back(axis_of(e.value));
    return out;
}

// Largest distance between points of N_eps(L1) n N_eps(L2) found on a polar grid around the foot points.
double brute_diameter(const Geodesic& L1, const Geodesic& L2, double eps) {
    std::vector<HPoint> pts;
    CMoebius back = normalizer(L1).inverse();
    for (int i = -300; i <= 300; ++i)
        for (int j = -30; j <= 30; ++j) {
            double s = i * 0.02, x = j / 30.0 * std::sinh(eps);
            HPoint p = back.apply(HPoint{std::exp(s) * x, std::exp(s)});
            if (point_geodesic_distance(p, L2) <= eps) pts.push_back(p);
        }
    double best = 0.0;
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b) best = std::max(best, point_distance(pts[a], pts[b]));
    return best;
}

}  // namespace

TEST(Kappa, Defaults) {
    EXPECT_EQ(default_kappa(PenetrationMap::ell, 1.0), 0.0);
    EXPECT_NEAR(c1_prime(kEps5), 2.0 * std::asinh(1.5), 1e-14);
    EXPECT_NEAR(default_kappa(PenetrationMap::ftp, kEps5), 4.0 * std::asinh(1.5) + std::log(5.0), 1e-12);
    EXPECT_NEAR(default_kappa(PenetrationMap::cp, kEps5) - default_kappa(PenetrationMap::ftp, kEps5),
                4.0 * std::log(1.0 + std::sqrt(2.0)), 1e-12);
    EXPECT_THROW(default_kappa(PenetrationMap::cp, 0.0), DomainError);
}

TEST(Inequalities, BoundsHoldOnSamples) {
    InequalityReport r = check_penetration_inequalities(4000, 1.0, 11);
    EXPECT_NEAR(r.bound_ftp_ell, 4.0 * std::asinh(1.0 / std::tanh(1.0)) + 2.0, 1e-12);
    EXPECT_NEAR(r.bound_ftp_ell, 6.345, 1e-3);
    EXPECT_TRUE(r.ok);
    EXPECT_GT(r.max_ftp_minus_ell, 0.5);
    EXPECT_LE(r.max_ftp_minus_ell, r.bound_ftp_ell);
    EXPECT_LE(r.max_cp_minus_ftp, r.bound_cp_ftp);
    EXPECT_GT(r.skipped, 0);
    EXPECT_LT(r.skipped, r.samples / 4);

    InequalityReport g = check_penetration_inequalities(2000, kEps5, 3);
    EXPECT_NEAR(g.bound_ftp_ell, 4.0 * std::asinh(1.5) + std::log(5.0), 1e-12);
    EXPECT_TRUE(g.ok);
}

TEST(Inequalities, SerialAndParallelAgree) {
    InequalityReport a = check_penetration_inequalities(1500, 0.7, 5, false);
    InequalityReport b = check_penetration_inequalities(1500, 0.7, 5, true);
    EXPECT_EQ(a.max_ftp_minus_ell, b.max_ftp_minus_ell);
    EXPECT_EQ(a.max_cp_minus_ftp, b.max_cp_minus_ftp);
    EXPECT_EQ(a.skipped, b.skipped);
    InequalityReport c = check_penetration_inequalities(0, 0.7);
    EXPECT_TRUE(c.ok);
    EXPECT_EQ(c.max_ftp_minus_ell, 0.0);
}

TEST(Diameter, GoldenAxisAndTranslate) {
    QuadSurd phi = QuadSurd::golden();
    double d = neighborhood_intersection_diameter(axis_of(phi), axis_of(phi - Q(1)), kEps5);
    EXPECT_NEAR(d, kDelta5, 1e-6);
    EXPECT_LE(d, kDelta5 + 1e-9);
    double r = neighborhood_intersection_diameter(axis_of(phi - Q(1)), axis_of(phi), kEps5);
    EXPECT_NEAR(r, d, 1e-9);
}

TEST(Diameter, DisjointNeighbourhoodsGiveZero) {
    QuadSurd phi = QuadSurd::golden();
    EXPECT_EQ(neighborhood_intersection_diameter(axis_of(phi), axis_of(phi + Q(7)), kEps5), 0.0);
    Geodesic a(BoundaryPoint::real(0.0), BoundaryPoint::real(1.0)), b(BoundaryPoint::real(5.0), BoundaryPoint::real(6.0));
    EXPECT_EQ(neighborhood_intersection_diameter(a, b, 0.3), 0.0);
    EXPECT_THROW(neighborhood_intersection_diameter(a, a.reversed(), 0.3), DomainError);
}

TEST(Diameter, AgreesWithGridOracle) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int done = 0;
    while (done < 6) {
        Geodesic a(BoundaryPoint::real(u(rng)), BoundaryPoint::real(u(rng)));
        Geodesic b(BoundaryPoint::real(u(rng)), BoundaryPoint::real(u(rng)));
        double d = neighborhood_intersection_diameter(a, b, 0.6);
        if (d == 0.0 || d > 6.0) continue;
        double o = brute_diameter(a, b, 0.6);
        EXPECT_LE(o, d + 1e-9);
        EXPECT_NEAR(o, d, 0.03);
        ++done;
    }
}

TEST(Diameter, GoldenOrbitPairsRespectBound) {
    std::vector<Geodesic> axes = golden_axes(200.0, -1.5, 1.5);
    std::vector<std::pair<size_t, size_t>> near;
    for (size_t i = 0; i < axes.size(); ++i)
        for (size_t j = i + 1; j < axes.size(); ++j)
            if (complex_distance(axes[i], axes[j]).ell < 2.0 * kEps5) near.push_back({i, j});
    ASSERT_GE(near.size(), 200u);
    std::mt19937_64 rng(4);
    std::shuffle(near.begin(), near.end(), rng);
    double worst = 0.0;
    for (size_t k = 0; k < 200; ++k) {
        double d = neighborhood_intersection_diameter(axes[near[k].first], axes[near[k].second], kEps5);
        EXPECT_LE(d, kDelta5 + 1e-6);
        worst = std::max(worst, d);
    }
    EXPECT_GT(worst, 2.0);
}

TEST(Sequence, TerminalEventAtGoldenPoint) {
    QuadSurd phi = QuadSurd::golden();
    PenetrationConfig cfg;
    cfg.t_max = 20.0;
    auto ev = penetration_sequence(phi, phi, GroupSpec::psl2z(), cfg);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_TRUE(ev[0].terminal);
    EXPECT_TRUE(std::isinf(ev[0].value));
    EXPECT_TRUE(std::isinf(ev[0].t_exit));
    EXPECT_EQ(ev[0].axis_form, BQForm(1, -1, -1));
    // the neighbourhood of the golden axis already contains rho(0): entry at height 2
    EXPECT_NEAR(ev[0].t_enter, -std::log(2.0), 1e-12);
}

TEST(Sequence, EmptyFamily) {
    PenetrationConfig cfg;
    EXPECT_TRUE(penetration_sequence(BoundaryPoint::real(0.3), {}, cfg).empty());
}

TEST(Sequence, MatchesExplicitFamilyAndHgeom) {
    QuadSurd s2 = QuadSurd::sqrt_of(2);
    PenetrationConfig cfg;
    cfg.t_max = 6.0;
    cfg.delta = 0.0;
    cfg.kappa = 0.0;
    cfg.map = PenetrationMap::ell;
    auto ev = penetration_sequence(s2, QuadSurd::golden(), GroupSpec::psl2z(), cfg);
    // oracle: every orbit axis with h <= e^{t_max + eps} near sqrt 2, handled in the original coordinates
    auto fam = golden_axes(std::exp(cfg.t_max + cfg.eps) + 1.0, 1.41421356 - 4.0, 1.41421356 + 4.0);
    auto ref = penetration_sequence(BoundaryPoint::of(s2), fam, cfg);
    ASSERT_EQ(ev.size(), ref.size());
    ASSERT_GT(ev.size(), 5u);
    Geodesic rho(BoundaryPoint::infinity(), BoundaryPoint::of(s2));
    for (size_t i = 0; i < ev.size(); ++i) {
        EXPECT_EQ(ev[i].axis_form, ref[i].axis_form);
        EXPECT_NEAR(ev[i].t_enter, ref[i].t_enter, 1e-9);
        EXPECT_NEAR(ev[i].t_exit, ref[i].t_exit, 1e-9);
        EXPECT_NEAR(ev[i].value, ev[i].t_exit - ev[i].t_enter, 1e-9);
        Geodesic L = axis_of(ev[i].axis_form.first_root());
        EXPECT_NEAR(ev[i].value, penetration_length(rho, L, cfg.eps).value(), 1e-10);
        EXPECT_NEAR(ref[i].value, ev[i].value, 1e-10);
    }
}

TEST(Sequence, CrossratioValuesRecomputeFromHgeom) {
    QuadSurd x = QuadSurd::sqrt_of(3);
    PenetrationConfig cfg;
    cfg.t_max = 9.0;
    cfg.delta = 0.0;
    cfg.kappa = 0.0;
    auto ev = penetration_sequence(x, QuadSurd::golden(), GroupSpec::psl2z(), cfg);
    ASSERT_FALSE(ev.empty());
    Geodesic rho(BoundaryPoint::infinity(), BoundaryPoint::of(x));
    double xd = x.to_double();
    for (const auto& e : ev) {
        Geodesic L = axis_of(e.axis_form.first_root());
        EXPECT_NEAR(e.value, crossratio_penetration(rho, L).value(), 1e-10);
        // from infinity the crossratio map is -log(h |x - r| / 2) at the nearer root r
        double r1 = e.axis_form.first_root().to_double(), r2 = e.axis_form.second_root().to_double();
        double h = 2.0 / std::abs(r1 - r2);
        double m = h * std::min(std::abs(xd - r1), std::abs(xd - r2));
        EXPECT_NEAR(e.value, std::max(0.0, -std::log(m / 2.0)), 1e-8);
    }
}

TEST(Sequence, PeriodicTargetStabilizes) {
    PenetrationConfig cfg;
    cfg.t_max = 30.0;
    cfg.map = PenetrationMap::ell;
    auto ev = penetration_sequence(QuadSurd::sqrt_of(2), QuadSurd::golden(), GroupSpec::psl2z(), cfg);
    ASSERT_GE(ev.size(), 15u);
    double running = 0.0;
    for (size_t i = 0; i < ev.size(); ++i) {
        EXPECT_GT(ev[i].value, cfg.delta);
        EXPECT_LT(ev[i].t_enter, ev[i].t_exit);
        if (i > 0) EXPECT_GE(ev[i].t_enter, ev[i - 1].t_exit - cfg.delta);
        if (i >= 8) EXPECT_NEAR(ev[i].value, ev[i - 1].value, 1e-5);
        running = std::max(running, ev[i].value);
    }
    EXPECT_NEAR(running, ev.front().value, 1e-12);
}

TEST(Sequence, DeltaSeparationOnSeveralTargets) {
    PenetrationConfig cfg;
    cfg.t_max = 25.0;
    cfg.map = PenetrationMap::ell;
    for (const char* s : {"sqrt(3)", "sqrt(7)/2", "(1+sqrt(13))/3", "(5+sqrt(21))/7"}) {
        auto ev = penetration_sequence(parse_surd(s), QuadSurd::golden(), GroupSpec::psl2z(), cfg);
        for (size_t i = 1; i < ev.size(); ++i) EXPECT_GE(ev[i].t_enter, ev[i - 1].t_exit - cfg.delta) << s;
    }
}

TEST(Sequence, LargerCrossratioMeansSmallerProduct) {
    // ordering of the deepest crossratio event against the envelope of h|x - r|
    PenetrationConfig cfg;
    cfg.t_max = std::log(1e4);
    cfg.delta = 0.0;
    cfg.kappa = 0.0;
    std::vector<std::pair<double, double>> pairs;
    for (const char* s : {"sqrt(2)", "sqrt(3)", "sqrt(7)", "(1+sqrt(17))/4", "sqrt(11)/3"}) {
        QuadSurd x = parse_surd(s);
        auto ev = penetration_sequence(x, QuadSurd::golden(), GroupSpec::psl2z(), cfg);
        double best = 0.0;
        for (const auto& e : ev)
            if (e.t_enter >= 0.0) best = std::max(best, e.value);
        ApproxEstimate est = approx_constant_estimate(x, QuadSurd::golden(), GroupSpec::psl2z(), 1e4, {{1.0}});
        pairs.push_back({best, est.value()});
    }
    std::sort(pairs.begin(), pairs.end());
    for (size_t i = 1; i < pairs.size(); ++i) EXPECT_LE(pairs[i].second, pairs[i - 1].second + 1e-9);
}

TEST(Sequence, Errors) {
    PenetrationConfig cfg;
    cfg.t_max = 500.0;
    EXPECT_THROW(penetration_sequence(QuadSurd::sqrt_of(2), QuadSurd::golden(), GroupSpec::psl2z(), cfg),
                 DomainError);
    cfg.t_max = 40.0;
    cfg.orbit.a_budget = 10'000;
    EXPECT_THROW(penetration_sequence(QuadSurd::sqrt_of(2), QuadSurd::golden(), GroupSpec::gamma0(2), cfg),
                 BudgetExceeded);
    cfg.eps = 0.0;
    EXPECT_THROW(penetration_sequence(BoundaryPoint::real(0.2), {}, cfg), DomainError);
}

TEST(Sequence, CsvLog) {
    PenetrationConfig cfg;
    cfg.t_max = 3.0;
    auto ev = penetration_sequence(QuadSurd::golden(), QuadSurd::golden(), GroupSpec::psl2z(), cfg);
    std::ostringstream os;
    write_events_csv(os, ev);
    EXPECT_EQ(os.str(), "t_enter,t_exit,a,b,c,value\n-0.69314718055994518,inf,1,-1,-1,inf\n");
}
