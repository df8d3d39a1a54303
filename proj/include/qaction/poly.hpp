#pragma once

// Commutative multivariate polynomials over Q in the symbol q and declared
// parameters. Used as numerator/denominator storage for Scalar.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qa {

using Var = std::uint32_t;

// Process-wide symbol registry. Id 0 is q. Ids are handed out in first
// declaration order, which fixes the monomial order used for canonical forms.
class Symbols {
public:
    static constexpr Var q = 0;
    static Var intern(const std::string& name);
    static std::optional<Var> lookup(const std::string& name);
    static std::string name(Var v);
};

struct PMono {
    std::vector<std::pair<Var, int>> e;  // sorted by var, exponents > 0
    int deg = 0;

    static PMono var(Var v, int k = 1);
    bool is_one() const { return e.empty(); }
    int exponent(Var v) const;
    bool operator==(const PMono& o) const { return e == o.e; }
    bool operator!=(const PMono& o) const { return e != o.e; }
};

// graded lex, q first: >0 when a is larger
int grlex_cmp(const PMono& a, const PMono& b);
PMono operator*(const PMono& a, const PMono& b);
bool mono_divides(const PMono& d, const PMono& m);
PMono mono_quotient(const PMono& m, const PMono& d);
PMono mono_gcd(const PMono& a, const PMono& b);
PMono mono_without(const PMono& m, Var v);

class Poly {
public:
    struct Term {
        PMono m;
        mpq_class c;
    };

    Poly() = default;
    explicit Poly(const mpq_class& c);
    explicit Poly(long c) : Poly(mpq_class(c)) {}
    static Poly var(Var v, int k = 1);
    static Poly monomial(const PMono& m, const mpq_class& c);

    bool is_zero() const { return t_.empty(); }
    bool is_const() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
    bool is_monomial() const { return t_.size() == 1; }
    mpq_class const_value() const;
    const std::vector<Term>& terms() const { return t_; }
    const Term& lead() const { return t_.front(); }
    int total_degree() const { return t_.empty() ? -1 : t_.front().m.deg; }
    int degree_in(Var v) const;
    std::set<Var> vars() const;
    bool contains(Var v) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const mpq_class& c) const;
    Poly times_mono(const PMono& m) const;
    Poly pow(unsigned k) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // coefficient view in one variable: exponent -> coefficient poly
    std::map<int, Poly> coeffs_in(Var v) const;
    static Poly from_coeffs(const std::map<int, Poly>& cs, Var v);

    // rational content with the sign of the leading coefficient
    mpq_class content() const;
    Poly primitive() const;
    Poly monic() const;
    PMono min_mono() const;

    // exact division, nullopt when b does not divide *this
    std::optional<Poly> divide(const Poly& b) const;
    Poly exact_div(const Poly& b) const;

    // partial evaluation at rational points
    Poly eval(const std::map<Var, mpq_class>& at) const;

    std::string str() const;

    static Poly from_terms(std::vector<Term> ts);  // sorts and merges

private:
    std::vector<Term> t_;
};

Poly poly_gcd(const Poly& a, const Poly& b);

}  // namespace qa
