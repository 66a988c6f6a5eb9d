#include "qspec/chc.hpp"

#include <cmath>
#include <string>

namespace qspec {

namespace {

double norm2(const std::vector<cplx>& w) {
    double s = 0.0;
    for (const cplx& z : w) s += std::norm(z);
    return s;
}

void require_same_dim(const HeisPoint& a, const HeisPoint& b) {
    if (a.w.size() != b.w.size()) throw DomainError("Heisenberg points of different dimensions");
    if (a.w.size() > 3) throw DomainError("dimension above 4 is not supported");
}

void require_closed(const HeisPoint& a, const char* what) {
    double scale = 1.0 + std::abs(a.w0) + norm2(a.w);
    if (a.closure_defect() > kHeisTol * scale)
        throw DomainError(std::string(what) + ": point is off the Heisenberg group (2 Re w0 != |w|^2)");
}

cplx pairing_term(const std::vector<cplx>& wp, const std::vector<cplx>& w, HeisPairing p) {
    cplx s = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        switch (p) {
            case HeisPairing::conj_second: s += wp[i] * std::conj(w[i]); break;
            case HeisPairing::conj_first: s += std::conj(wp[i]) * w[i]; break;
            case HeisPairing::bilinear: s += wp[i] * w[i]; break;
        }
    }
    return s;
}

}  // namespace

double SiegelPoint::height() const { return 2.0 * w0.real() - norm2(w); }

bool SiegelPoint::boundary(double tol) const {
    return std::abs(height()) <= tol * (1.0 + std::abs(w0) + norm2(w));
}

HeisPoint HeisPoint::from(const std::vector<cplx>& w, double v) { return {cplx(0.5 * norm2(w), v), w}; }

double HeisPoint::closure_defect() const { return std::abs(2.0 * w0.real() - norm2(w)); }

HeisPoint heis_mul(const HeisPoint& a, const HeisPoint& b, HeisPairing pairing) {
    require_same_dim(a, b);
    require_closed(a, "heis_mul");
    require_closed(b, "heis_mul");
    HeisPoint r;
    r.w0 = a.w0 + b.w0 + pairing_term(b.w, a.w, pairing);
    r.w.resize(a.w.size());
    for (size_t i = 0; i < a.w.size(); ++i) r.w[i] = a.w[i] + b.w[i];
    require_closed(r, "heis_mul");
    return r;
}

HeisPoint heis_inv(const HeisPoint& a, HeisPairing pairing) {
    require_closed(a, "heis_inv");
    HeisPoint r;
    r.w.resize(a.w.size());
    for (size_t i = 0; i < a.w.size(); ++i) r.w[i] = -a.w[i];
    // a (x, -w) = (w0 + x + p(-w, w), 0) = identity
    r.w0 = -a.w0 - pairing_term(r.w, a.w, pairing);
    require_closed(r, "heis_inv");
    return r;
}

HeisPoint heis_group(const HeisPoint& a, const HeisPoint& b, HeisOp op, HeisPairing pairing) {
    return op == HeisOp::mul ? heis_mul(a, b, pairing) : heis_inv(a, pairing);
}

CyganDistances cygan_distances(const HeisPoint& a, const HeisPoint& b, HeisPairing pairing) {
    HeisPoint g = heis_mul(heis_inv(b, pairing), a, pairing);
    double n0 = 2.0 * std::abs(g.w0);
    return {std::sqrt(n0), std::sqrt(n0 + norm2(g.w))};
}

double horoball_profile(const HeisPoint& gm, const HeisPoint& gp, double t, HeisPairing pairing) {
    HeisPoint g = heis_mul(heis_inv(gm, pairing), gp, pairing);
    double e = std::exp(t);
    return 2.0 * e * std::norm(g.w0) / std::norm(1.0 + e * g.w0);
}

CCDepth horoball_depth_cc(const HeisPoint& gm, const HeisPoint& gp, HeisPairing pairing) {
    HeisPoint g = heis_mul(heis_inv(gm, pairing), gp, pairing);
    double a0 = std::abs(g.w0), w2 = norm2(g.w);
    if (a0 == 0.0) throw DomainError("horoball_depth_cc: coincident endpoints");
    CyganDistances cd = cygan_distances(gm, gp, pairing);
    CCDepth r;
    r.D = -std::log(0.5 * cd.d_cyg * cd.d_cyg / cd.d_cyg_mod);
    r.s_star = a0 * a0 / (a0 + 0.5 * w2);
    r.t_star = -std::log(a0);
    r.D_from_s = 0.5 * std::log(2.0 / r.s_star);
    if (std::abs(r.D - r.D_from_s) > 1e-12 * (1.0 + std::abs(r.D)))
        throw NumericInconclusive("horoball_depth_cc: depth identity failed");
    return r;
}

namespace {

BaseScalar K(long re, long im, long m) { return BaseScalar(mpq_class(re), mpq_class(im), m); }

Matrix3K conj_transpose(const Matrix3K& a) {
    Matrix3K r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[j][i].conj();
    return r;
}

Matrix3K mul(const Matrix3K& a, const Matrix3K& b) {
    Matrix3K r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            BaseScalar s = K(0, 0, a[0][0].m);
            for (int k = 0; k < 3; ++k) s = s + a[i][k] * b[k][j];
            r[i][j] = s;
        }
    return r;
}

BaseScalar det3(const Matrix3K& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// gamma applied to (x, 0, 1) is proportional to (x, 0, 1)
bool fixes(const Matrix3K& g, const QuadSurd& x) {
    QuadSurd y0 = QuadSurd(g[0][0]) * x + QuadSurd(g[0][2]);
    QuadSurd y1 = QuadSurd(g[1][0]) * x + QuadSurd(g[1][2]);
    QuadSurd y2 = QuadSurd(g[2][0]) * x + QuadSurd(g[2][2]);
    return y1 == QuadSurd(K(0, 0, g[0][0].m)) && y0 == y2 * x;
}

}  // namespace

EisensteinObjects eisenstein_objects(long m) {
    if (m <= 0) throw DomainError("m must be a positive squarefree integer");
    if (squarefree_split(mpz_class(m)).first != 1) throw DomainError("m must be squarefree");
    EisensteinObjects e;
    e.m = m;
    // i/2 sqrt(m+4) = (i sqrt m) sqrt(m (m+4)) / (2m)
    BaseScalar u(mpq_class(0), mpq_class(-1, 2), m), v(mpq_class(0), mpq_class(1, 2 * m), m);
    e.alpha0 = QuadSurd(u, v, mpq_class(m * (m + 4)));
    e.alpha0_sigma = e.alpha0.galois();
    BaseScalar zero = K(0, 0, m), one = K(1, 0, m), is = K(0, 1, m);
    e.gamma0 = {{{K(m + 1, 0, m), zero, -is}, {zero, one, zero}, {is, zero, one}}};
    e.kamiya_parker = 2.0 * std::sqrt(static_cast<double>(m));

    Matrix3K J = {{{zero, zero, -one}, {zero, one, zero}, {-one, zero, zero}}};
    Matrix3K lhs = mul(conj_transpose(e.gamma0), mul(J, e.gamma0));
    e.preserves_form = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (lhs[i][j] != J[i][j]) e.preserves_form = false;
    e.fixes_alpha0 = fixes(e.gamma0, e.alpha0);
    e.fixes_alpha0_sigma = fixes(e.gamma0, e.alpha0_sigma);
    QuadSurd poly = e.alpha0 * e.alpha0 + QuadSurd(is) * e.alpha0 + QuadSurd(one);
    e.is_root = poly == QuadSurd(zero);
    e.unimodular = det3(e.gamma0) == one;
    BaseScalar tr = e.gamma0[0][0] + e.gamma0[1][1] + e.gamma0[2][2];
    e.loxodromic = tr.is_rational() && tr.re > 3;
    e.check = e.preserves_form && e.fixes_alpha0 && e.fixes_alpha0_sigma && e.is_root && e.unimodular && e.loxodromic;
    return e;
}

}  // namespace qspec
