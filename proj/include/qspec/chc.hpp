#pragma once

// Complex hyperbolic space in Siegel coordinates: Heisenberg group law, Cygan metrics, horoball depth of a
// geodesic, and the arithmetic objects of the Eisenstein-Picard examples.

#include <array>
#include <complex>
#include <vector>

#include "qspec/exactnum.hpp"

namespace qspec {

using cplx = std::complex<double>;

// Point of the Siegel domain 2 Re w0 - |w|^2 > 0 in C^n, n = 1 + w.size().
struct SiegelPoint {
    cplx w0;
    std::vector<cplx> w;
    double height() const;  // 2 Re w0 - |w|^2
    bool interior(double tol = 1e-12) const { return height() > tol; }
    bool boundary(double tol = 1e-12) const;
};

// Boundary point: 2 Re w0 = |w|^2.
struct HeisPoint {
    cplx w0;
    std::vector<cplx> w;

    static HeisPoint identity(int n = 2) { return {0.0, std::vector<cplx>(n - 1, 0.0)}; }
    // (|w|^2/2 + i v, w)
    static HeisPoint from(const std::vector<cplx>& w, double v);
    double closure_defect() const;  // |2 Re w0 - |w|^2|
};

// Pairing term in (w0, w)(w0', w') = (w0 + w0' + p(w', w), w + w').
enum class HeisPairing {
    conj_second,  // p = sum w'_i conj(w_i)
    conj_first,   // p = sum conj(w'_i) w_i
    bilinear      // p = sum w'_i w_i, the law read without conjugation; not closed
};

constexpr double kHeisTol = 1e-12;

enum class HeisOp { mul, inv };

// Throws DomainError if an input or the result leaves the boundary beyond tolerance.
HeisPoint heis_group(const HeisPoint& a, const HeisPoint& b, HeisOp op = HeisOp::mul,
                     HeisPairing pairing = HeisPairing::conj_second);
HeisPoint heis_mul(const HeisPoint& a, const HeisPoint& b, HeisPairing pairing = HeisPairing::conj_second);
HeisPoint heis_inv(const HeisPoint& a, HeisPairing pairing = HeisPairing::conj_second);

struct CyganDistances {
    double d_cyg;      // sqrt(2|w0|) at inv(b) a
    double d_cyg_mod;  // sqrt(2|w0| + |w|^2) at inv(b) a
};
CyganDistances cygan_distances(const HeisPoint& a, const HeisPoint& b,
                               HeisPairing pairing = HeisPairing::conj_second);

struct CCDepth {
    double D;        // -log(d_cyg^2 / (2 d_cyg_mod))
    double s_star;   // max_t 2 e^t |w0|^2 / |1 + e^t w0|^2 = |w0|^2 / (|w0| + |w|^2/2)
    double t_star;   // argmax, -log|w0|
    double D_from_s; // log(2 / s_star) / 2
};

// Depth of the geodesic with endpoints gm, gp under the horoball centred at infinity of height 1.
CCDepth horoball_depth_cc(const HeisPoint& gm, const HeisPoint& gp, HeisPairing pairing = HeisPairing::conj_second);

// s(t) for the normalized pair (inv(gm) gp), as used by numeric cross-checks.
double horoball_profile(const HeisPoint& gm, const HeisPoint& gp, double t,
                        HeisPairing pairing = HeisPairing::conj_second);

using Matrix3K = std::array<std::array<BaseScalar, 3>, 3>;

struct EisensteinObjects {
    long m = 0;
    QuadSurd alpha0;        // i/2 (sqrt(m+4) - sqrt m)
    QuadSurd alpha0_sigma;  // i/2 (-sqrt(m+4) - sqrt m)
    Matrix3K gamma0;        // (m+1, 0, -i sqrt m; 0, 1, 0; i sqrt m, 0, 1)
    double kamiya_parker = 0.0;  // horoball parameter 2 sqrt m
    bool preserves_form = false; // gamma0^* J gamma0 = J for q = -z0 conj(z2) - z2 conj(z0) + |z1|^2
    bool fixes_alpha0 = false;
    bool fixes_alpha0_sigma = false;
    bool is_root = false;   // alpha0^2 + i sqrt m alpha0 + 1 = 0
    bool unimodular = false;
    bool loxodromic = false;  // real trace > 3
    bool check = false;
};

// m squarefree positive.
EisensteinObjects eisenstein_objects(long m);

}  // namespace qspec
