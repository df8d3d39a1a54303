#pragma once

// Exact elements of Q(q, p1, ..., pn) kept in canonical fraction form.

#include "qaction/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace qa {

class ParamSet {
public:
    ParamSet() = default;
    explicit ParamSet(std::vector<std::string> names);
    const std::vector<std::string>& names() const { return names_; }
    bool declares(const std::string& n) const;
    ParamSet with(const std::vector<std::string>& more) const;

private:
    std::vector<std::string> names_;
};

class Scalar {
public:
    Scalar() : num_(), den_(1) {}
    Scalar(long c) : num_(c), den_(1) {}
    explicit Scalar(const mpq_class& c) : num_(c), den_(1) {}
    explicit Scalar(const Poly& p) : num_(p), den_(1) {}
    Scalar(const Poly& num, const Poly& den);  // canonicalizes

    static Scalar q() { return Scalar(Poly::var(Symbols::q)); }
    static Scalar symbol(const std::string& name);
    static Scalar symbol(Var v) { return Scalar(Poly::var(v)); }
    static Scalar q_pow(int k);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_const() && num_ == Poly(1); }
    bool is_const() const { return num_.is_const() && den_.is_const(); }
    mpq_class const_value() const;
    bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }
    std::set<Var> vars() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inv() const;
    Scalar pow(int k) const;
    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // evaluation; symbols not in the map stay symbolic
    Scalar specialize(const std::map<Var, mpq_class>& at) const;
    Scalar specialize(const std::map<std::string, mpq_class>& at) const;
    // substitution of symbols by scalars
    Scalar substitute(const std::map<Var, Scalar>& at) const;

    std::string str() const;

private:
    Poly num_, den_;
};

Scalar parse_scalar(const std::string& text, const ParamSet& params);

// evaluate a polynomial with scalar values for (some of) its symbols
Scalar eval_poly(const Poly& p, const std::map<Var, Scalar>& at);

}  // namespace qa
