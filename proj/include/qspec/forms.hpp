#pragma once

// Integral binary quadratic forms a X^2 + b XY + c Y^2 and their reduction theory.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "qspec/exactnum.hpp"

namespace qspec {

class BQForm {
public:
    mpz_class a, b, c;

    BQForm() = default;
    BQForm(mpz_class a_, mpz_class b_, mpz_class c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}

    // Oriented primitive form of x: x = (-b + sqrt(D)) / (2a).
    static BQForm of(const QuadSurd& x);

    mpz_class disc() const { return b * b - 4 * a * c; }
    mpz_class content() const;
    BQForm primitive() const;
    bool is_primitive() const { return content() == 1; }
    BQForm negated() const { return BQForm(-a, -b, -c); }
    // Sign-normalized primitive form (a > 0): identifies the unoriented axis.
    BQForm unoriented() const;

    QuadSurd first_root() const;   // (-b + sqrt D)/(2a)
    QuadSurd second_root() const;  // (-b - sqrt D)/(2a)
    QuadSurd eval(const QuadSurd& x) const;  // a x^2 + b x + c

    // f o M : (X,Y) -> f(aX + bY, cX + dY) for an integral matrix.
    BQForm compose(const mpz_class& ma, const mpz_class& mb, const mpz_class& mc,
                   const mpz_class& md) const;
    // Form whose first root is M applied to this form's first root (det M = +-1).
    BQForm moved_by(const MoebiusMap& M) const;

    std::string str() const;
    bool operator==(const BQForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const BQForm& o) const { return !(*this == o); }
    bool operator<(const BQForm& o) const;
};

struct FormCycle {
    mpz_class disc;
    std::vector<BQForm> forms;  // reduced forms in rho order, starting at the minimal one

    const BQForm& key() const { return forms.front(); }
    bool contains(const BQForm& f) const;
    bool operator==(const FormCycle& o) const { return disc == o.disc && forms == o.forms; }
};

// One reduction step result with the accumulated right factor N: reduced = f o N.
struct ReductionTrace {
    BQForm reduced;
    mpz_class n11{1}, n12{0}, n21{0}, n22{1};
};

BQForm form_normalize(const BQForm& f);
BQForm form_rho(const BQForm& f);
bool form_is_reduced(const BQForm& f);
ReductionTrace form_reduce(const BQForm& f);
FormCycle form_reduce_cycle(const BQForm& f);
// Transporter M in PSL2(Z) with M(first_root(from)) = first_root(to), if properly equivalent.
std::optional<MoebiusMap> form_transporter(const BQForm& from, const BQForm& to);

}  // namespace qspec
