#pragma once

// Penetration sequences of a geodesic ray from infinity through the eps-neighbourhoods of an axis orbit,
// the comparison inequalities between the penetration maps, and intersection diameters of neighbourhoods.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "qspec/forms.hpp"
#include "qspec/hgeom.hpp"
#include "qspec/orbit.hpp"

namespace qspec {

enum class PenetrationMap { ell, ftp, cp };

struct PenetrationConfig {
    double eps = 0.8047189562170501;    // log(5)/2
    double delta = 2.8872709503576206;  // 2 log(2 + sqrt 5)
    std::optional<double> kappa;        // unset: default_kappa(map, eps)
    PenetrationMap map = PenetrationMap::cp;
    double t_max = 10.0;
    OrbitOptions orbit{false, false};
};

// Comparison constant between the chosen map and the penetration length:
// 0 for ell, 2c'1 + 2eps for ftp, 2c'1 + 2eps + 4 log(1 + sqrt 2) for cp.
double default_kappa(PenetrationMap map, double eps);

struct PenetrationEvent {
    double t_enter = 0.0;
    double t_exit = 0.0;   // +inf for a terminal event
    BQForm axis_form;      // unoriented primitive form of the axis
    double value = 0.0;    // f(rho, L); +inf for a terminal event
    bool terminal = false; // rho(+inf) is an endpoint of the axis
};

// Ray rho(t) = (xi, e^{-t}) against the orbit of the alpha0-axis; events with 0 <= t_enter <= t_max
// and value > delta + kappa, sorted by t_enter. A terminal event ends the sequence.
std::vector<PenetrationEvent> penetration_sequence(const QuadSurd& xi, const QuadSurd& alpha0,
                                                   const GroupSpec& group, const PenetrationConfig& cfg);

// Same against an explicit family of geodesics of the upper half-plane; axis_form is set only for
// family members with exact quadratic endpoints.
std::vector<PenetrationEvent> penetration_sequence(const BoundaryPoint& xi, const std::vector<Geodesic>& family,
                                                   const PenetrationConfig& cfg);

void write_events_csv(std::ostream& os, const std::vector<PenetrationEvent>& events);

struct InequalityReport {
    long samples = 0;
    double eps = 0.0;
    double max_ftp_minus_ell = 0.0;  // max |ftp - ell|
    double max_cp_minus_ftp = 0.0;   // max |cp - ftp|
    double bound_ftp_ell = 0.0;      // 2c'1(eps) + 2eps
    double bound_cp_ftp = 0.0;       // 4 log(1 + sqrt 2)
    long skipped = 0;                // pairs sharing or nearly sharing an endpoint
    bool ok = false;
};

// Random pairs (rho, L) in dimensions 2 and 3; sample i uses its own generator seeded from (seed, i),
// so the report does not depend on the thread count.
InequalityReport check_penetration_inequalities(long samples, double eps, std::uint64_t seed = 1,
                                                bool parallel = true);

// Diameter of N_eps(L1) n N_eps(L2) for distinct geodesics of the upper half-plane; 0 when empty.
double neighborhood_intersection_diameter(const Geodesic& L1, const Geodesic& L2, double eps);

}  // namespace qspec
