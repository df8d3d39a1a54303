#pragma once

// The quantum polynomial algebra C_q[x,y,z] with yx = qxy, zy = qyz, zx = qxz.
// Monomials are stored in the normal form x^a y^b z^c.

#include "qaction/scalar.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qa {

struct Monomial {
    int a = 0, b = 0, c = 0;
    int degree() const { return a + b + c; }
    auto operator<=>(const Monomial&) const = default;
    std::string str() const;
};

// product of normal-form words: returns (q-exponent, normal form)
std::pair<int, Monomial> mono_mul(const Monomial& m1, const Monomial& m2);

// all monomials of total degree <= d, ordered by degree then (a,b,c)
std::vector<Monomial> monomials_up_to(int d);
std::vector<Monomial> monomials_of_degree(int d);

class QPoly {
public:
    using Terms = std::map<Monomial, Scalar>;

    QPoly() = default;
    explicit QPoly(const Scalar& c);
    QPoly(const Monomial& m, const Scalar& c);
    static QPoly x() { return QPoly(Monomial{1, 0, 0}, 1); }
    static QPoly y() { return QPoly(Monomial{0, 1, 0}, 1); }
    static QPoly z() { return QPoly(Monomial{0, 0, 1}, 1); }
    static QPoly generator(int i);  // 0:x 1:y 2:z

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Scalar coeff(const Monomial& m) const;
    int degree() const;      // -1 for zero
    int low_degree() const;  // -1 for zero

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator-() const;
    QPoly operator*(const QPoly& o) const;
    QPoly& operator+=(const QPoly& o);
    QPoly& operator-=(const QPoly& o);
    QPoly scaled(const Scalar& s) const;
    bool operator==(const QPoly& o) const { return t_ == o.t_; }
    bool operator!=(const QPoly& o) const { return !(t_ == o.t_); }

    QPoly homogeneous_component(int s) const;
    QPoly specialize(const std::map<Var, mpq_class>& at) const;
    QPoly substitute(const std::map<Var, Scalar>& at) const;
    void add_term(const Monomial& m, const Scalar& c);

    std::string str() const;

private:
    Terms t_;
};

QPoly operator*(const Scalar& s, const QPoly& p);

QPoly parse_qpoly(const std::string& text, const ParamSet& params);

}  // namespace qa
