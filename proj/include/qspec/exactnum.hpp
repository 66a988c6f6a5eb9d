#pragma once

// Exact arithmetic in K(sqrt(D)) where K is Q or Q(i*sqrt(m)).

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "qspec/errors.hpp"

namespace qspec {

// re + im * i*sqrt(m); m == 0 means the base field is Q.
struct BaseScalar {
    mpq_class re{0};
    mpq_class im{0};
    long m = 0;

    BaseScalar() = default;
    BaseScalar(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
    BaseScalar(const mpz_class& v) : re(v) {}  // NOLINT
    BaseScalar(const mpq_class& v) : re(v) { re.canonicalize(); }  // NOLINT
    BaseScalar(const mpq_class& r, const mpq_class& i, long m_);

    static BaseScalar i_sqrt(long m_) { return BaseScalar(0, 1, m_); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_rational() const { return sgn(im) == 0; }
    bool is_integral() const;  // member of O_K
    BaseScalar conj() const;
    mpq_class norm() const;  // |x|^2 = re^2 + m im^2
    std::complex<double> to_complex() const;
    double to_double() const;  // requires rational
    int sign() const;          // requires rational
    std::string str() const;
};

BaseScalar operator+(const BaseScalar& a, const BaseScalar& b);
BaseScalar operator-(const BaseScalar& a, const BaseScalar& b);
BaseScalar operator*(const BaseScalar& a, const BaseScalar& b);
BaseScalar operator/(const BaseScalar& a, const BaseScalar& b);
BaseScalar operator-(const BaseScalar& a);
bool operator==(const BaseScalar& a, const BaseScalar& b);
inline bool operator!=(const BaseScalar& a, const BaseScalar& b) { return !(a == b); }

// u + v*sqrt(delta). delta is a squarefree integer != 1, positive whenever m > 0.
// A rational element is stored with v == 0 and delta == 0.
class QuadSurd {
public:
    QuadSurd() = default;
    QuadSurd(const BaseScalar& u);  // NOLINT(google-explicit-constructor)
    QuadSurd(long v) : QuadSurd(BaseScalar(v)) {}  // NOLINT
    QuadSurd(const BaseScalar& u, const BaseScalar& v, const mpq_class& delta);

    // No normalization: delta must already be squarefree (and positive when m > 0).
    static QuadSurd from_canonical(const BaseScalar& u, const BaseScalar& v, const mpz_class& delta);
    static QuadSurd sqrt_of(const mpq_class& d);
    static QuadSurd golden();  // (1+sqrt 5)/2

    const BaseScalar& u() const { return u_; }
    const BaseScalar& v() const { return v_; }
    const mpz_class& delta() const { return delta_; }
    long m() const { return m_; }

    bool is_irrational() const { return sgn(delta_) != 0; }
    bool is_real() const;
    void require_irrational(const char* what) const;

    QuadSurd galois() const;        // sqrt(D) -> -sqrt(D)
    QuadSurd complex_conj() const;  // i -> -i
    BaseScalar as_base() const;     // requires !is_irrational()

    int sign() const;  // real only
    mpz_class floor() const;  // real only
    double to_double() const;  // real only
    std::complex<double> to_complex() const;

    // Canonical text "(p+q*sqrt(D))/r"; complex case uses isqrt(m) for i*sqrt(m).
    std::string str() const;

    friend QuadSurd operator+(const QuadSurd& a, const QuadSurd& b);
    friend QuadSurd operator*(const QuadSurd& a, const QuadSurd& b);
    friend bool operator==(const QuadSurd& a, const QuadSurd& b);

private:
    BaseScalar u_, v_;
    mpz_class delta_{0};
    long m_ = 0;
    void canonicalize(mpq_class delta);
};

QuadSurd operator-(const QuadSurd& a);
QuadSurd operator-(const QuadSurd& a, const QuadSurd& b);
QuadSurd inverse(const QuadSurd& a);
QuadSurd operator/(const QuadSurd& a, const QuadSurd& b);
inline bool operator!=(const QuadSurd& a, const QuadSurd& b) { return !(a == b); }
int compare(const QuadSurd& a, const QuadSurd& b);  // real only
inline bool operator<(const QuadSurd& a, const QuadSurd& b) { return compare(a, b) < 0; }

// Parses expressions over integers, sqrt(N), isqrt(M), + - * / and parentheses,
// e.g. "(1+1*sqrt(5))/2", "sqrt(2)", "(0-1*isqrt(1)+(1)*sqrt(5))/2".
QuadSurd parse_surd(const std::string& text);

// Squarefree decomposition n = s^2 * core (sign kept in core).
std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n);

struct Complexity {
    mpq_class h_squared;  // exact h^2
    double value;         // h
};

Complexity complexity_h(const QuadSurd& x);
mpz_class naive_height_H(const QuadSurd& x);

// Projective point of K(sqrt D) u {inf}.
struct ExtPoint {
    bool infinite = false;
    QuadSurd value;
    static ExtPoint infinity() { return ExtPoint{true, QuadSurd()}; }
    static ExtPoint of(const QuadSurd& x) { return ExtPoint{false, x}; }
    bool operator==(const ExtPoint& o) const;
};

class MoebiusMap {
public:
    BaseScalar a{1}, b{0}, c{0}, d{1};
    bool anti = false;

    MoebiusMap() = default;
    MoebiusMap(BaseScalar a_, BaseScalar b_, BaseScalar c_, BaseScalar d_, bool anti_ = false);
    static MoebiusMap S() { return MoebiusMap(0, -1, 1, 0); }
    static MoebiusMap T() { return MoebiusMap(1, 1, 0, 1); }
    static MoebiusMap Tinv() { return MoebiusMap(1, -1, 0, 1); }

    BaseScalar det() const { return a * d - b * c; }
    BaseScalar trace() const { return a + d; }
    bool is_integral_real() const;

    QuadSurd apply(const QuadSurd& x) const;  // x must not be the pole
    ExtPoint apply(const ExtPoint& x) const;
    MoebiusMap inverse() const;
    bool projectively_equal(const MoebiusMap& o) const;
    std::string str() const;
};

MoebiusMap operator*(const MoebiusMap& g, const MoebiusMap& h);  // g after h

enum class MapKind { elliptic, parabolic, hyperbolic };

struct Classification {
    MapKind kind;
    std::optional<std::pair<QuadSurd, QuadSurd>> fixed_points;  // (attracting, repelling)
    bool fixes_infinity = false;
    std::optional<BaseScalar> finite_fixed;  // parabolic with c != 0
    double translation_length = 0.0;
};

Classification classify(const MoebiusMap& g);

struct PellSolution {
    mpz_class t, u;  // t^2 - D u^2 = 4, minimal with u > 0
};

PellSolution pell_fundamental(const mpz_class& D, unsigned bit_budget = 4096);

class BQForm;
MoebiusMap automorph_of(const QuadSurd& x, unsigned bit_budget = 4096);

}  // namespace qspec
