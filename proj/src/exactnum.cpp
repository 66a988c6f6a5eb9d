#include "qspec/exactnum.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "qspec/forms.hpp"

namespace qspec {

namespace {

long common_m(const BaseScalar& a, const BaseScalar& b) {
    if (a.m == b.m) return a.m;
    if (a.is_rational() && b.is_rational()) return std::max(a.m, b.m);
    if (a.is_rational()) return b.m;
    if (b.is_rational()) return a.m;
    throw DomainError("operands live in different imaginary quadratic fields");
}

mpz_class lcm_z(const mpz_class& x, const mpz_class& y) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// a + b*sqrt(D) in double without cancellation; D > 0.
double stable_sum(const mpq_class& a, const mpq_class& b, const mpz_class& D) {
    if (sgn(b) == 0) return a.get_d();
    double root = std::sqrt(D.get_d());
    if (sgn(a) * sgn(b) >= 0) return a.get_d() + b.get_d() * root;
    mpq_class num = a * a - b * b * D;
    return num.get_d() / (a.get_d() - b.get_d() * root);
}

std::string signed_piece(const mpz_class& coeff, const std::string& suffix, bool first) {
    std::string out;
    if (sgn(coeff) < 0)
        out = "-";
    else if (!first)
        out = "+";
    mpz_class mag = abs(coeff);
    out += mag.get_str();
    if (!suffix.empty()) out += "*" + suffix;
    return out;
}

}  // namespace

// ---------------------------------------------------------------- BaseScalar

BaseScalar::BaseScalar(const mpq_class& r, const mpq_class& i, long m_) : re(r), im(i), m(m_) {
    re.canonicalize();
    im.canonicalize();
    if (m < 0) throw DomainError("m must be non-negative");
    if (m == 0 && sgn(im) != 0) throw DomainError("imaginary part requires m > 0");
    if (m > 0 && squarefree_split(mpz_class(m)).first != 1)
        throw DomainError("m must be squarefree");
}

bool BaseScalar::is_integral() const {
    if (m == 0 || m % 4 != 3) return re.get_den() == 1 && im.get_den() == 1;
    // O_K = Z[(1 + i sqrt m)/2] when m = 3 mod 4
    mpq_class r2 = 2 * re, i2 = 2 * im;
    if (r2.get_den() != 1 || i2.get_den() != 1) return false;
    mpz_class diff = r2.get_num() - i2.get_num();
    return mpz_even_p(diff.get_mpz_t()) != 0;
}

BaseScalar BaseScalar::conj() const {
    BaseScalar r = *this;
    r.im = -im;
    return r;
}

mpq_class BaseScalar::norm() const { return re * re + m * im * im; }

std::complex<double> BaseScalar::to_complex() const {
    return {re.get_d(), im.get_d() * std::sqrt(static_cast<double>(m))};
}

double BaseScalar::to_double() const {
    if (!is_rational()) throw DomainError("non-real scalar");
    return re.get_d();
}

int BaseScalar::sign() const {
    if (!is_rational()) throw DomainError("sign of a non-real scalar");
    return sgn(re);
}

std::string BaseScalar::str() const {
    if (is_rational()) return re.get_str();
    return "(" + re.get_str() + (sgn(im) < 0 ? "-" : "+") + mpq_class(abs(im)).get_str() +
           "*isqrt(" + std::to_string(m) + "))";
}

BaseScalar operator+(const BaseScalar& a, const BaseScalar& b) {
    BaseScalar r;
    r.m = common_m(a, b);
    r.re = a.re + b.re;
    r.im = a.im + b.im;
    return r;
}

BaseScalar operator-(const BaseScalar& a, const BaseScalar& b) { return a + (-b); }

BaseScalar operator-(const BaseScalar& a) {
    BaseScalar r = a;
    r.re = -a.re;
    r.im = -a.im;
    return r;
}

BaseScalar operator*(const BaseScalar& a, const BaseScalar& b) {
    BaseScalar r;
    r.m = common_m(a, b);
    r.re = a.re * b.re - r.m * a.im * b.im;
    r.im = a.re * b.im + a.im * b.re;
    return r;
}

BaseScalar operator/(const BaseScalar& a, const BaseScalar& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    BaseScalar num = a * b.conj();
    mpq_class n = b.norm();
    num.re /= n;
    num.im /= n;
    return num;
}

bool operator==(const BaseScalar& a, const BaseScalar& b) {
    if (a.re != b.re || a.im != b.im) return false;
    return a.m == b.m || a.is_rational();
}

// ------------------------------------------------------------ squarefree

std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n) {
    if (sgn(n) == 0) throw DomainError("squarefree part of zero");
    mpz_class rem = abs(n);
    mpz_class s = 1, core = sgn(n) < 0 ? -1 : 1;
    if (mpz_sizeinbase(rem.get_mpz_t(), 2) > 90)
        throw BudgetExceeded("squarefree decomposition beyond 90 bits");
    auto strip = [&](unsigned long p) {
        unsigned count = 0;
        while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
            mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
            ++count;
        }
        for (unsigned i = 0; i < count / 2; ++i) s *= p;
        if (count % 2) core *= p;
    };
    strip(2);
    for (unsigned long p = 3;; p += 2) {
        mpz_class cube = mpz_class(p) * p * p;
        if (cube > rem) break;
        strip(p);
    }
    if (rem > 1) {
        if (mpz_perfect_square_p(rem.get_mpz_t())) {
            s *= isqrt(rem);
        } else {
            core *= rem;
        }
    }
    return {s, core};
}

// ------------------------------------------------------------- QuadSurd

QuadSurd::QuadSurd(const BaseScalar& u) : u_(u), v_(0), delta_(0), m_(u.m) {}

QuadSurd::QuadSurd(const BaseScalar& u, const BaseScalar& v, const mpq_class& delta)
    : u_(u), v_(v) {
    m_ = common_m(u, v);
    canonicalize(delta);
}

void QuadSurd::canonicalize(mpq_class delta) {
    delta.canonicalize();
    u_.m = m_;
    v_.m = m_;
    if (v_.is_zero()) {
        delta_ = 0;
        return;
    }
    if (sgn(delta) == 0) throw DomainError("sqrt of zero in a surd");
    mpz_class num = delta.get_num() * delta.get_den();
    v_ = v_ / BaseScalar(mpq_class(delta.get_den()));
    auto [s, core] = squarefree_split(num);
    v_ = v_ * BaseScalar(mpq_class(s));
    if (m_ > 0 && sgn(core) < 0) {
        // sqrt(core) = i*sqrt(m) * sqrt(m*|core|) / m
        v_ = v_ * BaseScalar(0, mpq_class(1, m_), m_);
        auto [s2, core2] = squarefree_split(mpz_class(-core * m_));
        v_ = v_ * BaseScalar(mpq_class(s2));
        core = core2;
    }
    if (core == 1) {
        u_ = u_ + v_;
        v_ = BaseScalar(0);
        v_.m = m_;
        delta_ = 0;
        return;
    }
    delta_ = core;
    u_.m = m_;
    v_.m = m_;
}

QuadSurd QuadSurd::from_canonical(const BaseScalar& u, const BaseScalar& v, const mpz_class& delta) {
    QuadSurd r;
    r.m_ = common_m(u, v);
    r.u_ = u;
    r.v_ = v;
    r.u_.m = r.m_;
    r.v_.m = r.m_;
    if (r.v_.is_zero()) {
        r.delta_ = 0;
        r.v_ = BaseScalar(0);
        r.v_.m = r.m_;
    } else {
        r.delta_ = delta;
    }
    return r;
}

QuadSurd QuadSurd::sqrt_of(const mpq_class& d) { return QuadSurd(BaseScalar(0), BaseScalar(1), d); }

QuadSurd QuadSurd::golden() {
    return QuadSurd(BaseScalar(mpq_class(1, 2)), BaseScalar(mpq_class(1, 2)), 5);
}

bool QuadSurd::is_real() const {
    if (!u_.is_rational() || !v_.is_rational()) return false;
    return sgn(delta_) >= 0;
}

void QuadSurd::require_irrational(const char* what) const {
    if (!is_irrational()) throw DomainError(std::string(what) + ": argument is not a quadratic irrational");
}

QuadSurd QuadSurd::galois() const {
    QuadSurd r = *this;
    r.v_ = -v_;
    return r;
}

QuadSurd QuadSurd::complex_conj() const {
    QuadSurd r = *this;
    r.u_ = u_.conj();
    r.v_ = v_.conj();
    if (sgn(delta_) < 0) r.v_ = -r.v_;
    return r;
}

BaseScalar QuadSurd::as_base() const {
    if (is_irrational()) throw DomainError("surd is irrational");
    return u_;
}

int QuadSurd::sign() const {
    if (!is_real()) throw DomainError("sign of a non-real surd");
    int su = sgn(u_.re), sv = sgn(v_.re);
    if (sv == 0) return su;
    if (su == 0 || su == sv) return sv;
    mpq_class lhs = u_.re * u_.re, rhs = v_.re * v_.re * delta_;
    return lhs > rhs ? su : sv;
}

mpz_class QuadSurd::floor() const {
    if (!is_real()) throw DomainError("floor of a non-real surd");
    mpz_class r = lcm_z(u_.re.get_den(), v_.re.get_den());
    mpz_class p = u_.re.get_num() * (r / u_.re.get_den());
    mpz_class q = v_.re.get_num() * (r / v_.re.get_den());
    mpz_class fl;
    if (sgn(q) == 0) {
        fl = 0;
    } else if (sgn(q) > 0) {
        fl = isqrt(q * q * delta_);
    } else {
        fl = -isqrt(q * q * delta_) - 1;
    }
    mpz_class out, tmp = p + fl;
    mpz_fdiv_q(out.get_mpz_t(), tmp.get_mpz_t(), r.get_mpz_t());
    return out;
}

double QuadSurd::to_double() const {
    if (!is_real()) throw DomainError("non-real surd has no real embedding");
    if (!is_irrational()) return u_.re.get_d();
    return stable_sum(u_.re, v_.re, delta_);
}

std::complex<double> QuadSurd::to_complex() const {
    if (!is_irrational()) return u_.to_complex();
    if (sgn(delta_) < 0) {
        // only possible with m == 0
        return {u_.re.get_d(), v_.re.get_d() * std::sqrt(-delta_.get_d())};
    }
    double re = stable_sum(u_.re, v_.re, delta_);
    double im = stable_sum(u_.im, v_.im, delta_) * std::sqrt(static_cast<double>(m_));
    return {re, im};
}

std::string QuadSurd::str() const {
    if (m_ == 0 || (u_.is_rational() && v_.is_rational())) {
        if (!is_irrational()) {
            mpq_class x = u_.re;
            return x.get_num().get_str() + "/" + x.get_den().get_str();
        }
        mpz_class r = lcm_z(u_.re.get_den(), v_.re.get_den());
        mpz_class p = u_.re.get_num() * (r / u_.re.get_den());
        mpz_class q = v_.re.get_num() * (r / v_.re.get_den());
        return "(" + p.get_str() + signed_piece(q, "sqrt(" + delta_.get_str() + ")", false) + ")/" +
               r.get_str();
    }
    mpz_class r = lcm_z(lcm_z(u_.re.get_den(), u_.im.get_den()), lcm_z(v_.re.get_den(), v_.im.get_den()));
    auto scaled = [&](const mpq_class& x) { return mpz_class(x.get_num() * (r / x.get_den())); };
    std::string is = "isqrt(" + std::to_string(m_) + ")";
    std::string out = "(" + scaled(u_.re).get_str() + signed_piece(scaled(u_.im), is, false);
    if (is_irrational()) {
        out += "+(" + scaled(v_.re).get_str() + signed_piece(scaled(v_.im), is, false) + ")*sqrt(" +
               delta_.get_str() + ")";
    }
    return out + ")/" + r.get_str();
}

namespace {

QuadSurd lift(const QuadSurd& x, long m) {
    if (x.m() == m) return x;
    BaseScalar u = x.u(), v = x.v();
    u.m = m;
    v.m = m;
    if (!x.is_irrational()) return QuadSurd(u);
    if (sgn(x.delta()) < 0) return QuadSurd(u, v, mpq_class(x.delta()));
    return QuadSurd::from_canonical(u, v, x.delta());
}

long pair_m(const QuadSurd& a, const QuadSurd& b) {
    if (a.m() == b.m()) return a.m();
    bool ar = a.u().is_rational() && a.v().is_rational();
    bool br = b.u().is_rational() && b.v().is_rational();
    if (ar && br) return std::max(a.m(), b.m());
    if (ar) return b.m();
    if (br) return a.m();
    throw DomainError("operands live in different imaginary quadratic fields");
}

mpz_class shared_delta(const QuadSurd& a, const QuadSurd& b) {
    if (!a.is_irrational()) return b.delta();
    if (!b.is_irrational()) return a.delta();
    if (a.delta() != b.delta()) throw DomainError("incompatible square roots");
    return a.delta();
}

}  // namespace

QuadSurd operator+(const QuadSurd& x, const QuadSurd& y) {
    long m = pair_m(x, y);
    QuadSurd a = lift(x, m), b = lift(y, m);
    mpz_class D = shared_delta(a, b);
    if (sgn(D) == 0) return QuadSurd(a.u_ + b.u_);
    return QuadSurd::from_canonical(a.u_ + b.u_, a.v_ + b.v_, D);
}

QuadSurd operator*(const QuadSurd& x, const QuadSurd& y) {
    long m = pair_m(x, y);
    QuadSurd a = lift(x, m), b = lift(y, m);
    mpz_class D = shared_delta(a, b);
    if (sgn(D) == 0) return QuadSurd(a.u_ * b.u_);
    BaseScalar Db{mpq_class(D)};
    Db.m = m;
    return QuadSurd::from_canonical(a.u_ * b.u_ + a.v_ * b.v_ * Db, a.u_ * b.v_ + a.v_ * b.u_, D);
}

bool operator==(const QuadSurd& a, const QuadSurd& b) {
    if (a.delta_ != b.delta_) return false;
    return a.u_ == b.u_ && a.v_ == b.v_;
}

QuadSurd operator-(const QuadSurd& a) { return a * QuadSurd(BaseScalar(-1)); }
QuadSurd operator-(const QuadSurd& a, const QuadSurd& b) { return a + (-b); }

QuadSurd inverse(const QuadSurd& a) {
    if (!a.is_irrational()) {
        if (a.u().is_zero()) throw DomainError("division by zero");
        return QuadSurd(BaseScalar(1) / a.u());
    }
    // (u - v sqrt D) / (u^2 - v^2 D); the denominator is nonzero since D is not a square in K
    BaseScalar D{mpq_class(a.delta())};
    D.m = a.m();
    BaseScalar den = a.u() * a.u() - a.v() * a.v() * D;
    return QuadSurd::from_canonical(a.u() / den, -(a.v() / den), a.delta());
}

QuadSurd operator/(const QuadSurd& a, const QuadSurd& b) { return a * inverse(b); }

int compare(const QuadSurd& a, const QuadSurd& b) { return (a - b).sign(); }

// --------------------------------------------------------------- parsing

namespace {

struct SurdParser {
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(const char* tok) {
        skip();
        size_t n = std::char_traits<char>::length(tok);
        if (s.compare(pos, n, tok) == 0) {
            pos += n;
            return true;
        }
        return false;
    }
    void expect(const char* tok) {
        if (!accept(tok)) fail(std::string("expected '") + tok + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("cannot parse surd \"" + s + "\" at " + std::to_string(pos) + ": " + msg);
    }
    mpz_class integer() {
        skip();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected integer");
        return mpz_class(s.substr(start, pos - start));
    }
    QuadSurd expr() {
        QuadSurd x = term();
        for (;;) {
            if (accept("+"))
                x = x + term();
            else if (accept("-"))
                x = x - term();
            else
                return x;
        }
    }
    QuadSurd term() {
        QuadSurd x = unary();
        for (;;) {
            if (accept("*"))
                x = x * unary();
            else if (accept("/"))
                x = x / unary();
            else
                return x;
        }
    }
    QuadSurd unary() {
        if (accept("-")) return -unary();
        if (accept("+")) return unary();
        return atom();
    }
    QuadSurd atom() {
        if (accept("(")) {
            QuadSurd x = expr();
            expect(")");
            return x;
        }
        if (accept("isqrt")) {
            expect("(");
            mpz_class m = integer();
            expect(")");
            if (!m.fits_slong_p() || m <= 0) fail("isqrt argument out of range");
            return QuadSurd(BaseScalar::i_sqrt(m.get_si()));
        }
        if (accept("sqrt")) {
            expect("(");
            QuadSurd arg = expr();
            expect(")");
            if (arg.is_irrational() || !arg.u().is_rational()) fail("sqrt of a non-rational");
            if (sgn(arg.u().re) == 0) return QuadSurd(0);
            QuadSurd r = QuadSurd::sqrt_of(arg.u().re);
            return r;
        }
        return QuadSurd(BaseScalar(mpq_class(integer())));
    }
};

}  // namespace

QuadSurd parse_surd(const std::string& text) {
    SurdParser p{text};
    QuadSurd x = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing characters");
    return x;
}

// ---------------------------------------------------------- heights

Complexity complexity_h(const QuadSurd& x) {
    x.require_irrational("complexity_h");
    mpq_class h2 = 1 / (x.v().norm() * mpq_class(abs(x.delta())));
    return {h2, std::sqrt(h2.get_d())};
}

mpz_class naive_height_H(const QuadSurd& x) {
    x.require_irrational("naive_height_H");
    if (x.m() != 0) throw DomainError("naive height is defined over Q only");
    BQForm f = BQForm::of(x);
    mpz_class H = abs(f.a);
    if (abs(f.b) > H) H = abs(f.b);
    if (abs(f.c) > H) H = abs(f.c);
    return H;
}

// ---------------------------------------------------------- ExtPoint / Moebius

bool ExtPoint::operator==(const ExtPoint& o) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return value == o.value;
}

MoebiusMap::MoebiusMap(BaseScalar a_, BaseScalar b_, BaseScalar c_, BaseScalar d_, bool anti_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)), anti(anti_) {
    BaseScalar D = det();
    if (!(D == BaseScalar(1) || D == BaseScalar(-1)))
        throw DomainError("Moebius map must have determinant +-1, got " + D.str());
}

bool MoebiusMap::is_integral_real() const {
    for (const BaseScalar* e : {&a, &b, &c, &d})
        if (!e->is_rational() || e->re.get_den() != 1) return false;
    return true;
}

QuadSurd MoebiusMap::apply(const QuadSurd& x0) const {
    QuadSurd x = anti ? x0.complex_conj() : x0;
    QuadSurd den = QuadSurd(c) * x + QuadSurd(d);
    if (!den.is_irrational() && den.u().is_zero()) throw DomainError("point is the pole of the map");
    return (QuadSurd(a) * x + QuadSurd(b)) / den;
}

ExtPoint MoebiusMap::apply(const ExtPoint& x) const {
    if (x.infinite) {
        if (c.is_zero()) return ExtPoint::infinity();
        return ExtPoint::of(QuadSurd(a / c));
    }
    QuadSurd y = anti ? x.value.complex_conj() : x.value;
    QuadSurd den = QuadSurd(c) * y + QuadSurd(d);
    if (!den.is_irrational() && den.u().is_zero()) return ExtPoint::infinity();
    return ExtPoint::of((QuadSurd(a) * y + QuadSurd(b)) / den);
}

MoebiusMap MoebiusMap::inverse() const {
    BaseScalar D = det();
    MoebiusMap r;
    r.a = d / D;
    r.b = -b / D;
    r.c = -c / D;
    r.d = a / D;
    r.anti = anti;
    if (anti) {
        r.a = r.a.conj();
        r.b = r.b.conj();
        r.c = r.c.conj();
        r.d = r.d.conj();
    }
    return r;
}

bool MoebiusMap::projectively_equal(const MoebiusMap& o) const {
    if (anti != o.anti) return false;
    if (a == o.a && b == o.b && c == o.c && d == o.d) return true;
    return a == -o.a && b == -o.b && c == -o.c && d == -o.d;
}

std::string MoebiusMap::str() const {
    std::string s = "(" + a.str() + "," + b.str() + ";" + c.str() + "," + d.str() + ")";
    return anti ? s + "*" : s;
}

MoebiusMap operator*(const MoebiusMap& g, const MoebiusMap& h) {
    BaseScalar ha = g.anti ? h.a.conj() : h.a, hb = g.anti ? h.b.conj() : h.b;
    BaseScalar hc = g.anti ? h.c.conj() : h.c, hd = g.anti ? h.d.conj() : h.d;
    MoebiusMap r;
    r.a = g.a * ha + g.b * hc;
    r.b = g.a * hb + g.b * hd;
    r.c = g.c * ha + g.d * hc;
    r.d = g.c * hb + g.d * hd;
    r.anti = g.anti != h.anti;
    return r;
}

Classification classify(const MoebiusMap& g) {
    if (g.b.is_zero() && g.c.is_zero() && g.a == g.d) throw DomainError("classify: identity map");
    if (g.det() != BaseScalar(1)) throw DomainError("classify: determinant must be +1");
    Classification out;
    BaseScalar tr = g.trace();
    if (!tr.is_rational()) {
        out.kind = MapKind::hyperbolic;
        std::complex<double> t = tr.to_complex();
        out.translation_length = 2.0 * std::acosh(t / 2.0).real();
        return out;
    }
    mpq_class t = tr.re, at = abs(t);
    if (at < 2) {
        out.kind = MapKind::elliptic;
        return out;
    }
    if (at == 2) {
        out.kind = MapKind::parabolic;
        if (g.c.is_zero())
            out.fixes_infinity = true;
        else
            out.finite_fixed = (g.a - g.d) / (g.c * BaseScalar(2));
        return out;
    }
    out.kind = MapKind::hyperbolic;
    out.translation_length = 2.0 * std::acosh(at.get_d() / 2.0);
    if (g.c.is_zero() || !(g.a.is_rational() && g.b.is_rational() && g.c.is_rational() && g.d.is_rational()))
        return out;
    // fixed points are the roots of c x^2 + (d - a) x - b; use its primitive integral form
    mpq_class fc = g.c.re, fb = g.d.re - g.a.re, fa = -g.b.re;
    mpz_class L;
    mpz_lcm(L.get_mpz_t(), fc.get_den().get_mpz_t(), fb.get_den().get_mpz_t());
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), fa.get_den().get_mpz_t());
    mpz_class A(fc * L), B(fb * L), C(fa * L), content;
    mpz_gcd(content.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), C.get_mpz_t());
    A /= content;
    B /= content;
    C /= content;
    QuadSurd root = QuadSurd::sqrt_of(mpq_class(B * B - 4 * A * C));
    QuadSurd base(BaseScalar(mpq_class(-B, 2 * A)));
    QuadSurd step = root / QuadSurd(BaseScalar(mpq_class(2 * A)));
    QuadSurd plus = base + step, minus = base - step;
    // derivative at z is 1/(cz+d)^2 and cz+d = (t +- sqrt D)/2
    if (sgn(t) > 0)
        out.fixed_points = std::make_pair(plus, minus);
    else
        out.fixed_points = std::make_pair(minus, plus);
    return out;
}

PellSolution pell_fundamental(const mpz_class& D, unsigned bit_budget) {
    if (sgn(D) <= 0 || mpz_perfect_square_p(D.get_mpz_t()))
        throw DomainError("Pell: discriminant must be positive and non-square");
    mpz_class r4 = D % 4;
    if (r4 != 0 && r4 != 1) throw DomainError("Pell: discriminant must be 0 or 1 mod 4");
    mpz_class s = isqrt(D);
    // expansion of (P + sqrt D)/Q starting from (D mod 2 + sqrt D)/2
    mpz_class P = D % 2, Q = 2;
    auto step = [&](mpz_class& a) {
        mpz_class num = P + s;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        P = a * Q - P;
        Q = (D - P * P) / Q;
    };
    mpz_class a;
    step(a);
    const mpz_class P1 = P, Q1 = Q;
    mpz_class m11 = 1, m12 = 0, m21 = 0, m22 = 1;
    unsigned long L = 0;
    do {
        step(a);
        mpz_class n11 = m11 * a + m12, n21 = m21 * a + m22;
        m12 = m11;
        m22 = m21;
        m11 = n11;
        m21 = n21;
        ++L;
        if (mpz_sizeinbase(m11.get_mpz_t(), 2) > bit_budget)
            throw BudgetExceeded("Pell solver exceeded bit budget of " + std::to_string(bit_budget));
    } while (!(P == P1 && Q == Q1));
    mpz_class t = m11 + m22;
    if (L % 2 == 1) t = t * t + 2;
    mpz_class u2 = (t * t - 4) / D;
    mpz_class u = isqrt(u2);
    if (u * u != u2 || t * t - D * u * u != 4) throw std::logic_error("Pell solver produced an invalid unit");
    return {t, u};
}

MoebiusMap automorph_of(const QuadSurd& x, unsigned bit_budget) {
    x.require_irrational("automorph_of");
    if (!x.is_real() || x.m() != 0 || sgn(x.delta()) < 0)
        throw DomainError("automorph_of: needs a real quadratic irrational over Q");
    BQForm f = BQForm::of(x);
    PellSolution p = pell_fundamental(f.disc(), bit_budget);
    mpz_class a = (p.t - f.b * p.u) / 2, b = -f.c * p.u, c = f.a * p.u, d = (p.t + f.b * p.u) / 2;
    MoebiusMap g{BaseScalar(a), BaseScalar(b), BaseScalar(c), BaseScalar(d)};
    if (g.apply(x) != x) throw std::logic_error("automorph does not fix its input");
    return g;
}

}  // namespace qspec
