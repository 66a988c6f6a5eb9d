#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qspec/forms.hpp"
#include "qspec/spectrum.hpp"

using namespace qspec;

namespace {

const double kGoldenBound = 1.0 - 1.0 / std::sqrt(5.0);

// Independent oracle: two real geodesics are semicircles (centre c, radius r); with
// Q = (r1^2 + r2^2 - d^2) / (2 r1 r2), cosh l - |cos theta| equals | |Q| - 1 |.
double circle_value(double a1, double b1, double a2, double b2) {
    double c1 = 0.5 * (a1 + b1), r1 = 0.5 * std::abs(a1 - b1);
    double c2 = 0.5 * (a2 + b2), r2 = 0.5 * std::abs(a2 - b2);
    double d = c1 - c2;
    double Q = (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2);
    return std::abs(std::abs(Q) - 1.0);
}

// Minimum over all golden-orbit axes in a generous box around the axis of xi; every class of
// axes modulo the automorph has a representative there.
double brute_periodic(const QuadSurd& xi, double h_cap) {
    double x = xi.to_double(), y = xi.galois().to_double();
    double lo = std::min(x, y) - 3.0, hi = std::max(x, y) + 3.0;
    OrbitOptions oo;
    oo.witnesses = false;
    double best = 1e300;
    for (const OrbitElement& e : enumerate_orbit_window(QuadSurd::golden(), GroupSpec::psl2z(), h_cap,
                                                        Window::of(lo, hi), oo))
        best = std::min(best, circle_value(x, y, e.value.to_double(), e.sigma.to_double()));
    return best;
}

}  // namespace

TEST(Catalog, ClosedForms) {
    const double s2 = 1.0 + std::sqrt(2.0);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::psl2z), s2 * std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::bianchi, 1), s2 * s2, 1e-13);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::bianchi, 2), s2 * (2.0 + std::sqrt(3.0)), 1e-13);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::bianchi, 3), s2 * (4.0 * std::sqrt(3.0) + 4.0) / std::sqrt(32.0),
                1e-13);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::modular_torus), s2 * std::sqrt(3.0) * (1.5 + std::sqrt(1.25)),
                1e-12);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::hurwitz_h5), s2 * s2 * s2, 1e-12);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::eisenstein_picard), s2 * s2 * s2, 1e-12);
    EXPECT_NEAR(hurwitz_bounds_catalog(HurwitzCase::hurwitz_modular), std::pow(s2, 9), 1e-9);
    EXPECT_THROW(hurwitz_bounds_catalog(HurwitzCase::bianchi, 5), DomainError);
}

TEST(Catalog, PrintedEnclosures) {
    // each printed bound encloses the exact one and is its round-up in the last printed digit
    struct Row {
        const char* name;
        double printed, unit;
    };
    for (const Row& r : {Row{"psl2z", 4.19, 0.01}, Row{"bianchi(1)", 5.83, 0.01}, Row{"bianchi(2)", 9.01, 0.01},
                         Row{"bianchi(3)", 4.664, 0.001}, Row{"modular_torus", 10.95, 0.01},
                         Row{"hurwitz_h5", 14.08, 0.01}, Row{"eisenstein_picard", 14.08, 0.01},
                         Row{"hurwitz_modular", 2787.0, 1.0}}) {
        long m = 0;
        HurwitzCase c = parse_hurwitz_case(r.name, &m);
        double v = hurwitz_bounds_catalog(c, m);
        EXPECT_LE(v, r.printed) << r.name;
        EXPECT_GT(v, r.printed - r.unit) << r.name;
    }
    EXPECT_THROW(parse_hurwitz_case("psl3z", nullptr), DomainError);
}

TEST(Periodic, GoldenFamilyFrozen) {
    // values of the constant at the fixed points of (n^2+1, n; n, 1), frozen from the oracle below
    const double frozen[] = {0.0513167019, 0.1163126113, 0.2, 0.2456821978, 0.2727922061, 0.2900197454, 0.3015827469};
    double prev = -1.0;
    for (long n = 2; n <= 8; ++n) {
        SpectrumSample s = approx_constant_periodic(golden_family_point(n), QuadSurd::golden(), GroupSpec::psl2z());
        ASSERT_TRUE(s.certified) << n;
        EXPECT_NEAR(s.c_value, frozen[n - 2], 1e-9) << n;
        EXPECT_NEAR(s.c_value, brute_periodic(golden_family_point(n), 60.0), 1e-9) << n;
        EXPECT_LE(s.c_value, kGoldenBound + 1e-9);
        EXPECT_GT(s.c_value, prev);
        EXPECT_GE(s.cert_radius, std::acosh(1.0 + s.c_value));
        prev = s.c_value;
    }
}

TEST(Periodic, EvenMembersMatchVertexAngles) {
    // for even n the minimum is the crossing at the orbit of i: 1 - (4+n)/(sqrt5 sqrt(4+n^2))
    for (long n : {2, 4}) {
        SpectrumSample s = approx_constant_periodic(golden_family_point(n), QuadSurd::golden(), GroupSpec::psl2z());
        double dn = static_cast<double>(n);
        EXPECT_NEAR(s.c_value, 1.0 - (4.0 + dn) / (std::sqrt(5.0) * std::sqrt(4.0 + dn * dn)), 1e-12);
    }
}

TEST(Periodic, FamilyLimitIsDisjointTranslate) {
    // the translate of the golden axis centred at 3/2 stays at cosh l = 3/sqrt5 from near-vertical axes
    const double limit = 3.0 / std::sqrt(5.0) - 1.0;
    SpectrumSample s = approx_constant_periodic(golden_family_point(200), QuadSurd::golden(), GroupSpec::psl2z());
    ASSERT_TRUE(s.certified);
    EXPECT_LT(s.c_value, limit);
    EXPECT_NEAR(s.c_value, limit, 1e-3);
}

TEST(Periodic, RandomClassesAgainstOracle) {
    FormCycle golden = form_reduce_cycle(BQForm::of(QuadSurd::golden()));
    std::vector<QuadSurd> pts = enumerate_hyperbolic_points(GroupSpec::psl2z(), golden, 30);
    std::mt19937 rng(5);
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(std::min<size_t>(pts.size(), 25));
    for (const QuadSurd& xi : pts) {
        SpectrumSample s = approx_constant_periodic(xi, QuadSurd::golden(), GroupSpec::psl2z());
        ASSERT_TRUE(s.certified) << xi.str();
        EXPECT_NEAR(s.c_value, brute_periodic(xi, 80.0), 1e-9) << xi.str();
    }
}

TEST(Periodic, ExceptionalPointsFlagged) {
    SpectrumSample s = approx_constant_periodic(QuadSurd::golden(), QuadSurd::golden(), GroupSpec::psl2z());
    EXPECT_TRUE(s.exceptional);
    EXPECT_FALSE(s.certified);
    EXPECT_EQ(s.c_value, 0.0);
    // a translate of the conjugate is still exceptional
    QuadSurd y = QuadSurd::golden().galois() + QuadSurd(5);
    EXPECT_TRUE(in_exceptional_set(y, QuadSurd::golden(), GroupSpec::psl2z()));
    EXPECT_FALSE(in_exceptional_set(QuadSurd::sqrt_of(5), QuadSurd::golden(), GroupSpec::psl2z()));
}

TEST(Periodic, PerpendicularAxisContributesOne) {
    // the imaginary axis meets the unit circle at a right angle: cosh 0 - |cos(pi/2)| = 1
    EXPECT_NEAR(circle_value(0.0, 1e12, -1.0, 1.0), 1.0, 1e-9);
}

TEST(Estimate, AgreesWithPeriodicValue) {
    for (long n : {2, 3}) {
        QuadSurd xi = golden_family_point(n);
        ApproxEstimate e = approx_constant_estimate(xi, QuadSurd::golden(), GroupSpec::psl2z(), 1e5);
        SpectrumSample s = approx_constant_periodic(xi, QuadSurd::golden(), GroupSpec::psl2z());
        EXPECT_NEAR(e.value(), s.c_value, 1e-3) << n;
    }
}

TEST(Estimate, SqrtTwoUnderGoldenBound) {
    ApproxEstimate e = approx_constant_estimate(QuadSurd::sqrt_of(2), QuadSurd::golden(), GroupSpec::psl2z(), 1e4);
    ASSERT_EQ(e.thresholds.size(), 4u);
    EXPECT_GT(e.value(), 0.0);
    EXPECT_LE(e.value(), kGoldenBound + 0.01);
    for (size_t i = 1; i < e.tail_infima.size(); ++i) EXPECT_GE(e.tail_infima[i], e.tail_infima[i - 1]);
}

TEST(Estimate, NonincreasingInBudget) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    EstimateOptions o;
    o.h_grid = {1.0, 10.0, 100.0};
    for (int i = 0; i < 10; ++i) {
        double x = U(rng);
        ApproxEstimate a = approx_constant_estimate(x, QuadSurd::golden(), GroupSpec::psl2z(), 1e3, o);
        ApproxEstimate b = approx_constant_estimate(x, QuadSurd::golden(), GroupSpec::psl2z(), 1e4, o);
        for (size_t k = 0; k < o.h_grid.size(); ++k) EXPECT_LE(b.tail_infima[k], a.tail_infima[k]);
    }
}

TEST(Estimate, MatchesDirectScan) {
    // oracle: every orbit point of the unit window with h <= h_max, scanned without a target window
    OrbitOptions oo;
    oo.witnesses = false;
    auto all = enumerate_orbit_window(QuadSurd::golden(), GroupSpec::psl2z(), 2000.0, Window::of(-1.0, 2.0), oo);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        double x = U(rng);
        ApproxEstimate e = approx_constant_estimate(x, QuadSurd::golden(), GroupSpec::psl2z(), 2000.0);
        for (size_t k = 0; k < e.thresholds.size(); ++k) {
            double best = 1e300;
            for (const OrbitElement& r : all)
                if (r.h.value >= e.thresholds[k]) best = std::min(best, r.h.value * std::abs(x - r.value.to_double()));
            if (best <= e.window_bound) EXPECT_NEAR(e.tail_infima[k], best, 1e-9 * std::max(1.0, best));
        }
    }
}

TEST(Estimate, TranslationInvariance) {
    QuadSurd x = QuadSurd::sqrt_of(3);
    QuadSurd y = x + QuadSurd(1);
    ApproxEstimate a = approx_constant_estimate(x, QuadSurd::golden(), GroupSpec::psl2z(), 3000.0);
    ApproxEstimate b = approx_constant_estimate(y, QuadSurd::golden(), GroupSpec::psl2z(), 3000.0);
    EXPECT_EQ(a.tail_infima, b.tail_infima);
}

TEST(Estimate, DomainErrors) {
    const QuadSurd phi = QuadSurd::golden();
    EXPECT_THROW(approx_constant_estimate(phi, phi, GroupSpec::psl2z(), 100.0), DomainError);
    EXPECT_THROW(approx_constant_estimate(phi.galois() - QuadSurd(2), phi, GroupSpec::psl2z(), 100.0), DomainError);
    EXPECT_THROW(approx_constant_estimate(QuadSurd(BaseScalar(mpq_class(1, 3))), phi, GroupSpec::psl2z(), 100.0),
                 DomainError);
    EstimateOptions bad;
    bad.h_grid = {10.0, 5.0};
    EXPECT_THROW(approx_constant_estimate(0.3, phi, GroupSpec::psl2z(), 100.0, bad), DomainError);
}

TEST(SpectrumSample, GoldenSamples) {
    const QuadSurd phi = QuadSurd::golden();
    std::vector<SpectrumSample> s = spectrum_sample(phi, GroupSpec::psl2z(), 40);
    ASSERT_GT(s.size(), 50u);
    double mn = 1e300;
    for (size_t i = 0; i < s.size(); ++i) {
        EXPECT_TRUE(s[i].certified);
        EXPECT_LE(s[i].c_value, kGoldenBound + 1e-9);
        EXPECT_LE(s[i].c_value, hurwitz_bounds_catalog(HurwitzCase::psl2z));
        mn = std::min(mn, s[i].c_value);
        if (i > 0) EXPECT_LE(s[i - 1].disc, s[i].disc);
    }
    EXPECT_LE(mn, 0.1);
}

TEST(SpectrumSample, ExplicitPointsSkipExceptional) {
    const QuadSurd phi = QuadSurd::golden();
    std::vector<SpectrumSample> s =
        spectrum_sample({golden_family_point(3), phi, golden_family_point(2)}, phi, GroupSpec::psl2z());
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].disc, 8);
    EXPECT_EQ(s[1].disc, 13);
}

TEST(Liouville, BlocksAndErrors) {
    EXPECT_EQ(periodic_continued_fraction({2}), QuadSurd::sqrt_of(2) - QuadSurd(1));
    EXPECT_EQ(periodic_continued_fraction({1, 2}), (QuadSurd::sqrt_of(3) - QuadSurd(1)));
    LiouvilleResult r = liouville_construct({2}, 1e3);
    EXPECT_GT(r.estimate.value(), 0.0);
    EXPECT_THROW(liouville_construct({1, 1, 1}, 1e3), DomainError);
    EXPECT_THROW(periodic_continued_fraction({}), DomainError);
    EXPECT_THROW(periodic_continued_fraction({3, 0}), DomainError);
}

TEST(Liouville, LongerOneRunsApproximateBetter) {
    double prev = 1e300;
    for (int k = 2; k <= 10; ++k) {
        std::vector<long> block(static_cast<size_t>(k), 1);
        block.push_back(2);
        LiouvilleResult r = liouville_construct(block, 1e3);
        ASSERT_TRUE(r.periodic.certified);
        EXPECT_LT(r.periodic.c_value, prev) << k;
        prev = r.periodic.c_value;
    }
    std::vector<long> four{1, 1, 1, 1, 2}, twelve(12, 1);
    twelve.push_back(2);
    EXPECT_LT(liouville_construct(twelve, 1e3).periodic.c_value, liouville_construct(four, 1e3).periodic.c_value);
}
