#include "qspec/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qspec/chc.hpp"
#include "qspec/exactnum.hpp"
#include "qspec/forms.hpp"
#include "qspec/hgeom.hpp"
#include "qspec/khintchine.hpp"
#include "qspec/orbit.hpp"
#include "qspec/penetration.hpp"
#include "qspec/spectrum.hpp"

namespace qspec {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
    std::string format = "text";
    std::uint64_t seed = 42;
    std::optional<double> h_max;
    std::string window;
    std::optional<double> eps;
    std::string out;
    std::string cache;
    std::string plot;
    int threads = 1;
};

// ---------------------------------------------------------------- parsing helpers

QuadSurd surd_arg(const std::string& s) {
    if (s == "golden") return QuadSurd::golden();
    if (s == "sqrt2") return QuadSurd::sqrt_of(2);
    return parse_surd(s);
}

double number(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("not a number: " + s);
}

GroupSpec group_arg(const std::string& s) {
    if (s == "psl2z") return GroupSpec::psl2z();
    if (s == "pgl2z") return GroupSpec::pgl2z();
    if (s.rfind("gamma0:", 0) == 0) {
        double N = number(s.substr(7));
        if (N < 1 || N > 1e6 || N != std::floor(N)) throw ParseError("gamma0 level must be an integer in [1, 1e6]");
        return GroupSpec::gamma0(static_cast<long>(N));
    }
    throw ParseError("unknown group " + s + " (psl2z, pgl2z, gamma0:N)");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

std::pair<double, double> window_arg(const std::string& s, std::pair<double, double> fallback) {
    if (s.empty()) return fallback;
    auto p = split(s, ':');
    if (p.size() != 2) throw ParseError("window must be a:b");
    double a = number(p[0]), b = number(p[1]);
    if (!(a < b)) throw ParseError("window must satisfy a < b");
    return {a, b};
}

BoundaryPoint endpoint_arg(const std::string& s) {
    if (s == "inf") return BoundaryPoint::infinity();
    return BoundaryPoint::of(surd_arg(s));
}

Geodesic geodesic_arg(const std::string& s) {
    auto p = split(s, ':');
    if (p.size() != 2) throw ParseError("geodesic must be given as p:q");
    return Geodesic(endpoint_arg(p[0]), endpoint_arg(p[1]));
}

// "v" or "v:re,im[;re,im...]" for the point (|w|^2/2 + i v, w); n = 2 when w is omitted
HeisPoint heis_arg(const std::string& s) {
    auto p = split(s, ':');
    if (p.empty() || p.size() > 2) throw ParseError("Heisenberg point must be v or v:re,im[;re,im]");
    std::vector<cplx> w;
    if (p.size() == 2) {
        for (const auto& c : split(p[1], ';')) {
            auto xy = split(c, ',');
            if (xy.size() != 2) throw ParseError("Heisenberg coordinate must be re,im");
            w.push_back({number(xy[0]), number(xy[1])});
        }
    } else {
        w.push_back(0.0);
    }
    return HeisPoint::from(w, number(p[0]));
}

HeisPairing pairing_arg(const std::string& s) {
    if (s == "conj_second") return HeisPairing::conj_second;
    if (s == "conj_first") return HeisPairing::conj_first;
    if (s == "bilinear") return HeisPairing::bilinear;
    throw ParseError("pairing must be conj_second, conj_first or bilinear");
}

PenetrationMap map_arg(const std::string& s) {
    if (s == "ell") return PenetrationMap::ell;
    if (s == "ftp") return PenetrationMap::ftp;
    if (s == "cp") return PenetrationMap::cp;
    throw ParseError("map must be ell, ftp or cp");
}

// ---------------------------------------------------------------- output helpers

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json integer(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

json form_json(const BQForm& f) { return json::array({integer(f.a), integer(f.b), integer(f.c)}); }

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
    return buf;
}

json sample_json(const SpectrumSample& s) {
    return json{{"xi", s.xi.str()},          {"disc", integer(s.disc)},     {"c", s.c_value},
                {"certified", s.certified},  {"radius", s.cert_radius},     {"exceptional", s.exceptional},
                {"axes", s.axes}};
}

class Emitter {
public:
    Emitter(const Globals& g, std::ostream& out) : g_(g), out_(out) {}
    void emit(const std::string& text) {
        if (g_.out.empty()) {
            out_ << text;
            return;
        }
        std::ofstream os(g_.out);
        if (!os) throw ParseError("cannot write " + g_.out);
        os << text;
    }
    void plot(const std::vector<std::pair<double, double>>& series) {
        if (g_.plot.empty()) return;
        std::ofstream os(g_.plot);
        if (!os) throw ParseError("cannot write " + g_.plot);
        for (auto [x, y] : series) os << fmt(x) << ' ' << fmt(y) << '\n';
    }

private:
    const Globals& g_;
    std::ostream& out_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Orbit approximation, spectra and penetration experiments"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--h-max", g.h_max, "Complexity budget");
    app.add_option("--window", g.window, "Window a:b");
    app.add_option("--epsilon", g.eps, "Neighbourhood radius");
    app.add_option("--out", g.out, "Write output to FILE");
    app.add_option("--cache", g.cache, "Orbit cache file (reused when its header matches)");
    app.add_option("--emit-plot-data", g.plot, "Write an (x, y) series to FILE");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string alpha = "golden", group = "psl2z", xi, xs, matrix, grid, case_name, l1, l2, ha, hb, op = "mul",
                pairing = "conj_second", map = "cp", mode = "mc", phi = "1";
    long trace_budget = 30, eis = 0, n_points = 500, samples = 1001;
    double t_max = 10.0, delta = -1.0, lo = 0.0, hi = 10.0, B = 1.0, A_cap = 1e3, tail_ratio = 100.0;
    std::optional<double> kappa;
    bool all = false, intro = false;

    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto* orbit = sub("orbit", "Orbit points in a complexity/window box");
    orbit->add_option("--alpha", alpha, "Base point (surd, golden, sqrt2)");
    orbit->add_option("--group", group, "psl2z, pgl2z or gamma0:N");

    auto* fix = sub("fix", "Fixed points of an integral map, or the automorph of a point");
    fix->add_option("--matrix", matrix, "a,b,c,d");
    fix->add_option("--xi", xi, "Quadratic irrational");

    auto* approx = sub("approx", "Finite-budget envelope of h(r)|x - r|");
    approx->add_option("--xi", xi, "Target surd");
    approx->add_option("--x", xs, "Target real number");
    approx->add_option("--alpha", alpha, "Base point");
    approx->add_option("--group", group, "Group");
    approx->add_option("--grid", grid, "Thresholds T, comma separated");

    auto* periodic = sub("periodic", "Certified approximation constant at a periodic point");
    periodic->add_option("--xi", xi, "Target surd")->required();
    periodic->add_option("--alpha", alpha, "Base point");
    periodic->add_option("--group", group, "Group");

    auto* spectrum = sub("spectrum", "Certified spectrum samples over hyperbolic classes");
    spectrum->add_option("--alpha", alpha, "Base point");
    spectrum->add_option("--group", group, "Group");
    spectrum->add_option("--trace-budget", trace_budget, "Largest automorph trace");

    auto* hurwitz = sub("hurwitz", "Catalog of Hurwitz-type upper bounds");
    hurwitz->add_option("--case", case_name, "psl2z, modular_torus, bianchi(m), hurwitz_h5, eisenstein_picard, "
                                             "hurwitz_modular");
    hurwitz->add_flag("--all", all, "Print the whole catalog");

    auto* penetrate = sub("penetrate", "Penetration sequence of the ray from infinity");
    penetrate->add_option("--xi", xi, "Ray endpoint")->required();
    penetrate->add_option("--alpha", alpha, "Axis base point");
    penetrate->add_option("--group", group, "Group");
    penetrate->add_option("--t-max", t_max, "Time horizon");
    penetrate->add_option("--map", map, "ell, ftp or cp");
    penetrate->add_option("--delta", delta, "Separation constant (default 2 log(2 + sqrt 5))");
    penetrate->add_option("--kappa", kappa, "Comparison constant (default per map)");

    auto* intersect = sub("intersect", "Diameter of the intersection of two neighbourhoods");
    intersect->add_option("--l1", l1, "p:q")->required();
    intersect->add_option("--l2", l2, "p:q")->required();

    auto* cygan = sub("cygan", "Cygan distances and horoball depth of two Heisenberg points");
    cygan->add_option("--a", ha, "v or v:re,im[;re,im]")->required();
    cygan->add_option("--b", hb, "v or v:re,im[;re,im]")->required();
    cygan->add_option("--pairing", pairing, "conj_second, conj_first or bilinear");

    auto* heis = sub("heis", "Heisenberg group law; Eisenstein-Picard objects");
    heis->add_option("--a", ha, "v or v:re,im[;re,im]");
    heis->add_option("--b", hb, "v or v:re,im[;re,im]");
    heis->add_option("--op", op, "mul or inv")->check(CLI::IsMember({"mul", "inv"}));
    heis->add_option("--pairing", pairing, "conj_second, conj_first or bilinear");
    heis->add_option("--eisenstein", eis, "Squarefree m: echo the Eisenstein-Picard objects");

    auto* khin = sub("khintchine", "Slowly varying check, integral test, Monte-Carlo minima");
    khin->add_option("--mode", mode, "mc, integral or slowly")->check(CLI::IsMember({"mc", "integral", "slowly"}));
    khin->add_option("--phi", phi, "1, c, power:a or t^a");
    khin->add_option("--delta", delta, "Exponent (default 1)");
    khin->add_option("--n", n_points, "Monte-Carlo targets");
    khin->add_option("--alpha", alpha, "Base point");
    khin->add_option("--group", group, "Group");
    khin->add_option("--tail-ratio", tail_ratio, "Tail statistic over [h_max / ratio, h_max]");
    khin->add_flag("--intro", intro, "Integral test: read phi as psi in the integral of psi(t)/t^2 over (0, 1]");
    khin->add_option("--lo", lo, "Slowly varying check: range start");
    khin->add_option("--hi", hi, "Slowly varying check: range end");
    khin->add_option("--samples", samples, "Slowly varying check: grid size");
    khin->add_option("--B", B, "Slowly varying check: shift");
    khin->add_option("--A-cap", A_cap, "Slowly varying check: ratio cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    omp_set_num_threads(g.threads);
    Emitter em(g, out);
    const double eps = g.eps.value_or(0.5 * std::log(5.0));

    try {
        if (orbit->parsed()) {
            QuadSurd a0 = surd_arg(alpha);
            GroupSpec gs = group_arg(group);
            double h_max = g.h_max.value_or(100.0);
            auto [wlo, whi] = window_arg(g.window, {0.0, 1.0});
            Window w = Window::of(wlo, whi);
            std::vector<std::string> header = {"alpha " + a0.str(), "group " + group, "h_max " + fmt(h_max),
                                               "window " + w.lo.get_str() + ":" + w.hi.get_str()};
            std::vector<OrbitElement> elems;
            bool cached = false;
            if (!g.cache.empty()) {
                std::ifstream probe(g.cache);
                if (probe) {
                    std::vector<std::string> h;
                    auto e = read_orbit_cache(g.cache, &h);
                    if (h == header) {
                        elems = std::move(e);
                        cached = true;
                    }
                }
            }
            if (!cached) {
                OrbitOptions oo;
                oo.threads = g.threads;
                oo.witnesses = false;
                elems = enumerate_orbit_window(a0, gs, h_max, w, oo);
                if (!g.cache.empty()) write_orbit_cache(g.cache, elems, header);
            }
            std::ostringstream os;
            if (g.format == "json") {
                json recs = json::array();
                for (const auto& e : elems)
                    recs.push_back({{"h", e.h.value}, {"value", e.value.str()}, {"form", form_json(e.form)}, {"x", e.x}});
                os << dump({{"alpha", a0.str()}, {"group", group}, {"h_max", h_max}, {"window", {wlo, whi}},
                            {"count", elems.size()}, {"records", recs}});
            } else if (g.format == "csv") {
                os << "h,value,a,b,c,x\n";
                for (const auto& e : elems)
                    os << fmt(e.h.value) << ',' << e.value.str() << ',' << e.form.a << ',' << e.form.b << ','
                       << e.form.c << ',' << fmt(e.x) << '\n';
            } else {
                for (const auto& e : elems) os << fmt(e.h.value) << '\t' << e.value.str() << '\t' << e.form.str() << '\n';
            }
            em.emit(os.str());
            std::vector<std::pair<double, double>> pts;
            for (const auto& e : elems) pts.push_back({e.x, e.h.value});
            em.plot(pts);
            return kExitOk;
        }

        if (fix->parsed()) {
            MoebiusMap m;
            if (!matrix.empty()) {
                auto p = split(matrix, ',');
                if (p.size() != 4) throw ParseError("matrix must be a,b,c,d");
                m = MoebiusMap(BaseScalar(mpz_class(p[0])), BaseScalar(mpz_class(p[1])), BaseScalar(mpz_class(p[2])),
                               BaseScalar(mpz_class(p[3])));
            } else if (!xi.empty()) {
                m = automorph_of(surd_arg(xi));
            } else {
                throw ParseError("fix needs --matrix or --xi");
            }
            Classification c = classify(m);
            const char* kind = c.kind == MapKind::hyperbolic ? "hyperbolic"
                               : c.kind == MapKind::parabolic ? "parabolic"
                                                               : "elliptic";
            json j{{"matrix", {m.a.str(), m.b.str(), m.c.str(), m.d.str()}}, {"kind", kind}};
            if (c.fixed_points) {
                j["attracting"] = c.fixed_points->first.str();
                j["repelling"] = c.fixed_points->second.str();
                j["translation_length"] = c.translation_length;
            }
            std::ostringstream os;
            if (g.format == "json") {
                os << dump(j);
            } else if (g.format == "csv") {
                os << "a,b,c,d,kind,attracting,repelling,translation_length\n"
                   << m.a.str() << ',' << m.b.str() << ',' << m.c.str() << ',' << m.d.str() << ',' << kind;
                if (c.fixed_points)
                    os << ',' << c.fixed_points->first.str() << ',' << c.fixed_points->second.str() << ','
                       << fmt(c.translation_length);
                else
                    os << ",,,";
                os << '\n';
            } else {
                os << "matrix " << m.str() << "\nkind " << kind << '\n';
                if (c.fixed_points)
                    os << "attracting " << c.fixed_points->first.str() << "\nrepelling " << c.fixed_points->second.str()
                       << "\ntranslation_length " << fmt(c.translation_length) << '\n';
            }
            em.emit(os.str());
            return kExitOk;
        }

        if (approx->parsed()) {
            QuadSurd a0 = surd_arg(alpha);
            GroupSpec gs = group_arg(group);
            double h_max = g.h_max.value_or(1e4);
            EstimateOptions eo;
            eo.orbit.threads = g.threads;
            eo.orbit.witnesses = false;
            for (const auto& t : split(grid, ',')) eo.h_grid.push_back(number(t));
            ApproxEstimate est;
            std::string target;
            if (!xi.empty()) {
                QuadSurd x = surd_arg(xi);
                est = approx_constant_estimate(x, a0, gs, h_max, eo);
                target = x.str();
            } else if (!xs.empty()) {
                est = approx_constant_estimate(number(xs), a0, gs, h_max, eo);
                target = xs;
            } else {
                throw ParseError("approx needs --xi or --x");
            }
            std::vector<std::pair<double, double>> env;
            for (size_t i = 0; i < est.thresholds.size(); ++i) env.push_back({est.thresholds[i], est.tail_infima[i]});
            std::ostringstream os;
            if (g.format == "json") {
                json e = json::array();
                for (auto [T, v] : env) e.push_back({T, finite_or_null(v)});
                os << dump({{"xi", target}, {"alpha", a0.str()}, {"h_max", h_max}, {"envelope", e},
                            {"value", finite_or_null(est.value())}, {"window_bound", est.window_bound}});
            } else if (g.format == "csv") {
                os << "T,tail_infimum\n";
                for (auto [T, v] : env) os << fmt(T) << ',' << fmt(v) << '\n';
            } else {
                for (auto [T, v] : env) os << "T " << fmt(T) << "\ttail " << fmt(v) << '\n';
                os << "value " << fmt(est.value()) << '\n';
            }
            em.emit(os.str());
            em.plot(env);
            return kExitOk;
        }

        if (periodic->parsed()) {
            PeriodicOptions po;
            po.orbit.threads = g.threads;
            po.orbit.witnesses = false;
            SpectrumSample s = approx_constant_periodic(surd_arg(xi), surd_arg(alpha), group_arg(group), po);
            std::ostringstream os;
            if (g.format == "csv")
                os << "xi,disc,c,certified,radius\n"
                   << s.xi.str() << ',' << s.disc << ',' << fmt(s.c_value) << ',' << s.certified << ','
                   << fmt(s.cert_radius) << '\n';
            else
                os << dump(sample_json(s));
            em.emit(os.str());
            return s.certified || s.exceptional ? kExitOk : kExitInconclusive;
        }

        if (spectrum->parsed()) {
            PeriodicOptions po;
            po.orbit.parallel = false;
            po.orbit.witnesses = false;
            auto samples_out = spectrum_sample(surd_arg(alpha), group_arg(group), trace_budget, po);
            std::ostringstream os;
            std::vector<std::pair<double, double>> pts;
            for (const auto& s : samples_out) pts.push_back({s.disc.get_d(), s.c_value});
            if (g.format == "csv") {
                os << "xi,disc,c,certified,radius\n";
                for (const auto& s : samples_out)
                    os << s.xi.str() << ',' << s.disc << ',' << fmt(s.c_value) << ',' << s.certified << ','
                       << fmt(s.cert_radius) << '\n';
            } else if (g.format == "text") {
                for (const auto& s : samples_out) os << s.disc << '\t' << fmt(s.c_value) << '\t' << s.xi.str() << '\n';
            } else {
                json arr = json::array();
                for (const auto& s : samples_out) arr.push_back(sample_json(s));
                os << dump({{"alpha", surd_arg(alpha).str()}, {"trace_budget", trace_budget}, {"samples", arr}});
            }
            em.emit(os.str());
            em.plot(pts);
            return kExitOk;
        }

        if (hurwitz->parsed()) {
            std::vector<std::string> names;
            if (all)
                names = {"psl2z",      "modular_torus", "bianchi(1)", "bianchi(2)",        "bianchi(3)",
                         "bianchi(7)", "bianchi(11)",   "hurwitz_h5", "eisenstein_picard", "hurwitz_modular"};
            else if (!case_name.empty())
                names = {case_name};
            else
                throw ParseError("hurwitz needs --case or --all");
            std::vector<std::pair<std::string, double>> vals;
            for (const auto& n : names) {
                long m = 0;
                HurwitzCase c = parse_hurwitz_case(n, &m);
                vals.push_back({n, hurwitz_bounds_catalog(c, m)});
            }
            std::ostringstream os;
            if (g.format == "json") {
                json arr = json::array();
                for (auto& [n, v] : vals) arr.push_back({{"case", n}, {"value", v}});
                os << dump(all ? json{{"catalog", arr}} : arr[0]);
            } else if (g.format == "csv") {
                os << "case,value\n";
                for (auto& [n, v] : vals) os << n << ',' << fmt(v) << '\n';
            } else {
                for (auto& [n, v] : vals) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.9f", v);
                    os << (all ? n + "\t" : std::string()) << buf << '\n';
                }
            }
            em.emit(os.str());
            return kExitOk;
        }

        if (penetrate->parsed()) {
            PenetrationConfig cfg;
            cfg.eps = eps;
            if (delta >= 0.0) cfg.delta = delta;
            cfg.kappa = kappa;
            cfg.map = map_arg(map);
            cfg.t_max = t_max;
            auto ev = penetration_sequence(surd_arg(xi), surd_arg(alpha), group_arg(group), cfg);
            std::ostringstream os;
            if (g.format == "json") {
                json arr = json::array();
                for (const auto& e : ev)
                    arr.push_back({{"t_enter", e.t_enter},
                                   {"t_exit", finite_or_null(e.t_exit)},
                                   {"form", form_json(e.axis_form)},
                                   {"value", finite_or_null(e.value)},
                                   {"terminal", e.terminal}});
                os << dump({{"xi", surd_arg(xi).str()}, {"eps", cfg.eps}, {"delta", cfg.delta},
                            {"kappa", cfg.kappa.value_or(default_kappa(cfg.map, cfg.eps))}, {"map", map},
                            {"t_max", t_max}, {"events", arr}});
            } else {
                write_events_csv(os, ev);
            }
            em.emit(os.str());
            std::vector<std::pair<double, double>> pts;
            for (const auto& e : ev) pts.push_back({e.t_enter, e.value});
            em.plot(pts);
            return kExitOk;
        }

        if (intersect->parsed()) {
            double d = neighborhood_intersection_diameter(geodesic_arg(l1), geodesic_arg(l2), eps);
            std::ostringstream os;
            if (g.format == "json")
                os << dump({{"l1", l1}, {"l2", l2}, {"eps", eps}, {"diameter", finite_or_null(d)},
                            {"bound", 2.0 * std::log(2.0 + std::sqrt(5.0))}});
            else if (g.format == "csv")
                os << "diameter\n" << fmt(d) << '\n';
            else
                os << fmt(d) << '\n';
            em.emit(os.str());
            return kExitOk;
        }

        if (cygan->parsed()) {
            HeisPairing p = pairing_arg(pairing);
            HeisPoint a = heis_arg(ha), b = heis_arg(hb);
            CyganDistances cd = cygan_distances(a, b, p);
            json j{{"d_cyg", cd.d_cyg}, {"d_cyg_mod", cd.d_cyg_mod},
                   {"h_prime", cd.d_cyg > 0.0 ? json(1.0 / cd.d_cyg) : json(nullptr)}};
            if (cd.d_cyg > 0.0) {
                CCDepth dd = horoball_depth_cc(a, b, p);
                j["depth"] = {{"D", dd.D}, {"s_star", dd.s_star}, {"t_star", dd.t_star + 0.0}, {"D_from_s", dd.D_from_s}};
            }
            std::ostringstream os;
            if (g.format == "json") {
                os << dump(j);
            } else if (g.format == "csv") {
                os << "d_cyg,d_cyg_mod\n" << fmt(cd.d_cyg) << ',' << fmt(cd.d_cyg_mod) << '\n';
            } else {
                os << "d_cyg " << fmt(cd.d_cyg) << "\nd_cyg_mod " << fmt(cd.d_cyg_mod) << '\n';
                if (j.contains("depth")) os << "D " << fmt(j["depth"]["D"].get<double>()) << '\n';
            }
            em.emit(os.str());
            return kExitOk;
        }

        if (heis->parsed()) {
            std::ostringstream os;
            if (eis > 0) {
                EisensteinObjects e = eisenstein_objects(eis);
                json mat = json::array();
                for (const auto& row : e.gamma0) {
                    json r = json::array();
                    for (const auto& x : row) r.push_back(x.str());
                    mat.push_back(r);
                }
                os << dump({{"m", e.m},
                            {"alpha0", e.alpha0.str()},
                            {"alpha0_sigma", e.alpha0_sigma.str()},
                            {"gamma0", mat},
                            {"kamiya_parker", e.kamiya_parker},
                            {"preserves_form", e.preserves_form},
                            {"fixes_alpha0", e.fixes_alpha0},
                            {"fixes_alpha0_sigma", e.fixes_alpha0_sigma},
                            {"is_root", e.is_root},
                            {"check", e.check}});
                em.emit(os.str());
                return e.check ? kExitOk : kExitInconclusive;
            }
            if (ha.empty()) throw ParseError("heis needs --a (and --b for mul) or --eisenstein");
            HeisPairing p = pairing_arg(pairing);
            HeisPoint a = heis_arg(ha);
            if (op == "mul" && hb.empty()) throw ParseError("mul needs --b");
            HeisPoint r = op == "inv" ? heis_inv(a, p) : heis_mul(a, heis_arg(hb), p);
            json w = json::array();
            for (const auto& z : r.w) w.push_back({z.real() + 0.0, z.imag() + 0.0});
            if (g.format == "json") {
                os << dump({{"w0", {r.w0.real() + 0.0, r.w0.imag() + 0.0}}, {"w", w}});
            } else {
                os << "w0 " << fmt(r.w0.real()) << ' ' << fmt(r.w0.imag()) << "\nw";
                for (const auto& z : r.w) os << ' ' << fmt(z.real()) << ' ' << fmt(z.imag());
                os << '\n';
            }
            em.emit(os.str());
            return kExitOk;
        }

        if (khin->parsed()) {
            double dlt = delta >= 0.0 ? delta : 1.0;
            std::ostringstream os;
            if (mode == "slowly") {
                PhiSpec f = PhiSpec::parse(phi);
                auto r = slowly_varying_check(f.f, lo, hi, static_cast<int>(samples), {B, A_cap});
                os << dump({{"phi", f.name}, {"range", {lo, hi}}, {"ok", r.ok}, {"A", r.A}, {"B", r.B}});
                em.emit(os.str());
                return kExitOk;
            }
            if (mode == "integral") {
                PhiSpec f = PhiSpec::parse(phi);
                IntegralTestResult r = intro ? integral_test_intro(f.f, dlt) : integral_test(f, dlt);
                os << dump({{"phi", intro ? "t*psi(2/t), psi = " + f.name : f.name}, {"delta", dlt},
                            {"verdict", verdict_name(r.verdict)}, {"method", r.method}, {"rate", finite_or_null(r.rate)},
                            {"margin", finite_or_null(r.margin)}, {"partial", finite_or_null(r.partial)},
                            {"value", finite_or_null(r.value)}});
                em.emit(os.str());
                return r.verdict == Verdict::inconclusive ? kExitInconclusive : kExitOk;
            }
            PhiSpec f = PhiSpec::parse(phi);
            MonteCarloOptions mo;
            mo.threads = g.threads;
            mo.tail_ratio = tail_ratio;
            double h_max = g.h_max.value_or(1e4);
            auto rep = monte_carlo_liminf(surd_arg(alpha), group_arg(group), f, dlt, n_points, h_max, g.seed, mo);
            auto pairs = [](const std::vector<std::pair<double, double>>& v) {
                json a = json::array();
                for (auto [t, fr] : v) a.push_back({t, fr});
                return a;
            };
            if (g.format == "csv") {
                os << "x,m,tail_m\n";
                for (size_t i = 0; i < rep.m.size(); ++i)
                    os << fmt(rep.x[i]) << ',' << fmt(rep.m[i]) << ',' << (rep.tail_m.empty() ? "" : fmt(rep.tail_m[i]))
                       << '\n';
            } else {
                os << dump({{"phi", rep.phi},
                            {"delta", rep.delta},
                            {"h_max", rep.h_max},
                            {"seed", rep.seed},
                            {"rng", rep.rng},
                            {"n", rep.n_points},
                            {"cdf", pairs(rep.cdf)},
                            {"median", rep.median},
                            {"tail", {{"ratio", tail_ratio}, {"cdf", pairs(rep.tail_cdf)}, {"median", rep.tail_median}}}});
            }
            em.emit(os.str());
            em.plot(rep.cdf);
            return kExitOk;
        }
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const NumericInconclusive& e) {
        err << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace qspec
