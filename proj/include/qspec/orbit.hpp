#pragma once

// Certified enumeration of Gamma-orbits of quadratic irrationals in (complexity, window) boxes.

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qspec/exactnum.hpp"
#include "qspec/forms.hpp"

namespace qspec {

enum class GroupKind { psl2z, pgl2z, finite_index };

struct GroupSpec {
    GroupKind kind = GroupKind::psl2z;
    // finite_index only: membership test for integral det 1 maps, generators for word searches,
    // and an upper bound on the index used to scan cosets of the stabilizer.
    std::function<bool(const MoebiusMap&)> member;
    std::vector<MoebiusMap> generators;
    int index = 0;

    static GroupSpec psl2z() { return {}; }
    static GroupSpec pgl2z() {
        GroupSpec g;
        g.kind = GroupKind::pgl2z;
        return g;
    }
    static GroupSpec finite_index(std::function<bool(const MoebiusMap&)> member,
                                  std::vector<MoebiusMap> generators, int index);
    // Gamma_0(N) inside PSL2(Z): c = 0 mod N.
    static GroupSpec gamma0(long N);
};

struct Window {
    mpq_class lo, hi;
    static Window of(double lo, double hi);
    bool contains(const QuadSurd& x) const;
};

struct OrbitElement {
    QuadSurd value;
    QuadSurd sigma;
    Complexity h;
    BQForm form;  // oriented primitive form with value as first root
    double x = 0.0;
    bool from_sigma = false;  // reached from alpha0^sigma rather than alpha0
    std::optional<MoebiusMap> witness;  // witness(alpha0 or alpha0^sigma) == value
};

struct OrbitOptions {
    bool parallel = true;
    bool witnesses = true;
    long a_budget = 1'000'000;
    int threads = 0;  // 0: OpenMP default
};

// Elements r of Gamma.{alpha0, alpha0^sigma} with h(r) <= h_max and r in the window,
// sorted by (h, value), each exactly once.
std::vector<OrbitElement> enumerate_orbit_window(const QuadSurd& alpha0, const GroupSpec& group, double h_max,
                                                 const Window& window, const OrbitOptions& opts = {});

// Reference scan in arbitrary precision over every integer b in range (no residue sieve, no threads).
std::vector<OrbitElement> enumerate_orbit_window_reference(const QuadSurd& alpha0, const GroupSpec& group,
                                                           double h_max, const Window& window);

struct Depth {
    double D;
    bool meets_horoball;  // D <= 0
};
Depth depth_D(const OrbitElement& r);

// One fixed point per PSL2(Z) form class of discriminant D with fundamental automorph trace <= trace_budget,
// excluding the classes of `excluded` and of its negation; classes are taken up to negation
// (and up to x -> -x for PGL2(Z)).
std::vector<QuadSurd> enumerate_hyperbolic_points(const GroupSpec& group, const FormCycle& excluded,
                                                  long trace_budget);

// Orbit cache: '#' header lines, then "h<TAB>value<TAB>(a,b,c)" sorted by h.
void write_orbit_cache(const std::string& path, const std::vector<OrbitElement>& elems,
                       const std::vector<std::string>& header);
std::vector<OrbitElement> read_orbit_cache(const std::string& path, std::vector<std::string>* header = nullptr);

}  // namespace qspec
