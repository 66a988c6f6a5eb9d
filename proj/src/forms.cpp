#include "qspec/forms.hpp"

#include <algorithm>

namespace qspec {

namespace {

mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

mpz_class fmod_pos(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

void require_indefinite(const mpz_class& D) {
    if (sgn(D) <= 0 || mpz_perfect_square_p(D.get_mpz_t()))
        throw DomainError("form must have positive non-square discriminant");
}

// Normalization shift k with f o (1 k; 0 1) normal.
BQForm normalize_with(const BQForm& f, const mpz_class& s, mpz_class& k) {
    mpz_class A = abs(f.a), twoA = 2 * A, bp;
    if (A > s) {
        bp = fmod_pos(f.b, twoA);
        if (bp > A) bp -= twoA;
    } else {
        bp = s - fmod_pos(s - f.b, twoA);
    }
    k = (bp - f.b) / (2 * f.a);
    mpz_class c = f.a * k * k + f.b * k + f.c;
    return BQForm(f.a, bp, c);
}

bool reduced_with(const BQForm& f, const mpz_class& s) {
    mpz_class A2 = 2 * abs(f.a);
    return sgn(f.b) > 0 && f.b <= s && A2 - f.b <= s && f.b + A2 >= s + 1;
}

struct Mat {
    mpz_class a{1}, b{0}, c{0}, d{1};
    Mat operator*(const Mat& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat inv() const { return {d, -b, -c, a}; }  // det 1
};

}  // namespace

// ------------------------------------------------------------------ BQForm

BQForm BQForm::of(const QuadSurd& x) {
    x.require_irrational("BQForm::of");
    if (x.m() != 0 || !x.u().is_rational() || !x.v().is_rational())
        throw DomainError("BQForm::of: needs a quadratic irrational over Q");
    mpq_class u = x.u().re, v = x.v().re;
    mpq_class B = -2 * u, C = u * u - v * v * x.delta();
    mpz_class L;
    mpz_lcm(L.get_mpz_t(), B.get_den().get_mpz_t(), C.get_den().get_mpz_t());
    BQForm f(L, mpz_class(B * L), mpz_class(C * L));
    f = f.primitive();
    if (sgn(f.a) < 0) f = f.negated();
    return sgn(v) > 0 ? f : f.negated();
}

mpz_class BQForm::content() const {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

BQForm BQForm::primitive() const {
    mpz_class g = content();
    if (g == 0) throw DomainError("zero form");
    return BQForm(a / g, b / g, c / g);
}

BQForm BQForm::unoriented() const {
    BQForm f = primitive();
    if (sgn(f.a) < 0 || (sgn(f.a) == 0 && sgn(f.b) < 0)) f = f.negated();
    return f;
}

QuadSurd BQForm::first_root() const {
    if (sgn(a) == 0) throw DomainError("degenerate form (a = 0)");
    return QuadSurd(BaseScalar(mpq_class(-b, 2 * a)), BaseScalar(mpq_class(1, 2 * a)), mpq_class(disc()));
}

QuadSurd BQForm::second_root() const { return first_root().galois(); }

QuadSurd BQForm::eval(const QuadSurd& x) const {
    return QuadSurd(BaseScalar(mpq_class(a))) * x * x + QuadSurd(BaseScalar(mpq_class(b))) * x +
           QuadSurd(BaseScalar(mpq_class(c)));
}

BQForm BQForm::compose(const mpz_class& p, const mpz_class& q, const mpz_class& r, const mpz_class& s) const {
    // f(pX + qY, rX + sY)
    mpz_class A = a * p * p + b * p * r + c * r * r;
    mpz_class B = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
    mpz_class C = a * q * q + b * q * s + c * s * s;
    return BQForm(A, B, C);
}

BQForm BQForm::moved_by(const MoebiusMap& M) const { return BQForm::of(M.apply(first_root())); }

std::string BQForm::str() const { return "(" + a.get_str() + "," + b.get_str() + "," + c.get_str() + ")"; }

bool BQForm::operator<(const BQForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

bool FormCycle::contains(const BQForm& f) const { return std::find(forms.begin(), forms.end(), f) != forms.end(); }

// --------------------------------------------------------------- reduction

BQForm form_normalize(const BQForm& f) {
    mpz_class D = f.disc();
    require_indefinite(D);
    mpz_class k;
    return normalize_with(f, isqrt(D), k);
}

BQForm form_rho(const BQForm& f) { return form_normalize(BQForm(f.c, -f.b, f.a)); }

bool form_is_reduced(const BQForm& f) {
    mpz_class D = f.disc();
    require_indefinite(D);
    return reduced_with(f, isqrt(D));
}

ReductionTrace form_reduce(const BQForm& f) {
    mpz_class D = f.disc();
    require_indefinite(D);
    mpz_class s = isqrt(D), k;
    Mat N;
    BQForm g = normalize_with(f, s, k);
    N = N * Mat{1, k, 0, 1};
    size_t guard = 0;
    const size_t limit = 64 * (mpz_sizeinbase(f.a.get_mpz_t(), 2) + mpz_sizeinbase(f.b.get_mpz_t(), 2) +
                               mpz_sizeinbase(f.c.get_mpz_t(), 2)) +
                         10000;
    while (!reduced_with(g, s)) {
        g = normalize_with(BQForm(g.c, -g.b, g.a), s, k);
        N = N * Mat{0, -1, 1, k};
        if (++guard > limit) throw std::logic_error("form reduction failed to terminate");
    }
    ReductionTrace t;
    t.reduced = g;
    t.n11 = N.a;
    t.n12 = N.b;
    t.n21 = N.c;
    t.n22 = N.d;
    return t;
}

FormCycle form_reduce_cycle(const BQForm& f) {
    mpz_class D = f.disc();
    require_indefinite(D);
    mpz_class s = isqrt(D), k;
    BQForm start = form_reduce(f).reduced;
    FormCycle cyc;
    cyc.disc = D;
    BQForm g = start;
    do {
        cyc.forms.push_back(g);
        g = normalize_with(BQForm(g.c, -g.b, g.a), s, k);
        if (cyc.forms.size() > 50'000'000) throw BudgetExceeded("reduction cycle too long");
    } while (g != start);
    auto it = std::min_element(cyc.forms.begin(), cyc.forms.end());
    std::rotate(cyc.forms.begin(), it, cyc.forms.end());
    return cyc;
}

std::optional<MoebiusMap> form_transporter(const BQForm& from, const BQForm& to) {
    if (from.disc() != to.disc()) return std::nullopt;
    ReductionTrace rf = form_reduce(from), rt = form_reduce(to);
    mpz_class s = isqrt(from.disc()), k;
    Mat C;
    BQForm g = rf.reduced;
    size_t steps = 0;
    while (g != rt.reduced) {
        g = normalize_with(BQForm(g.c, -g.b, g.a), s, k);
        C = C * Mat{0, -1, 1, k};
        if (g == rf.reduced || ++steps > 50'000'000) return std::nullopt;
    }
    Mat Nf{rf.n11, rf.n12, rf.n21, rf.n22}, Nt{rt.n11, rt.n12, rt.n21, rt.n22};
    // to o Nt = from o Nf C, so roots(to) = (Nf C Nt^-1)^-1 roots(from)
    Mat M = Nt * C.inv() * Nf.inv();
    return MoebiusMap(BaseScalar(M.a), BaseScalar(M.b), BaseScalar(M.c), BaseScalar(M.d));
}

}  // namespace qspec
