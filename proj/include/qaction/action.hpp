#pragma once

// X_q(A_1) acting on C_q[x,y,z]: automorphisms for K1, K2, twisted Leibniz
// extension of E and F, and the module-algebra verifier.

#include "qaction/qpoly.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace qa {

// x -> alpha x, y -> beta y + t xz, z -> gamma z
struct Automorphism {
    Scalar alpha{1}, beta{1}, gamma{1}, t{0};

    static Automorphism identity() { return {}; }
    static Automorphism diagonal(const Scalar& a, const Scalar& b, const Scalar& c) {
        return {a, b, c, Scalar(0)};
    }
    bool operator==(const Automorphism& o) const {
        return alpha == o.alpha && beta == o.beta && gamma == o.gamma && t == o.t;
    }
    bool is_diagonal() const { return t.is_zero(); }
    Automorphism specialize(const std::map<Var, mpq_class>& at) const;
    Automorphism substitute(const std::map<Var, Scalar>& at) const;
    std::string str() const;
};

QPoly apply_automorphism(const Automorphism& psi, const QPoly& p);
QPoly apply_automorphism(const Automorphism& psi, const Monomial& m);
Automorphism invert_automorphism(const Automorphism& psi);
// f after g
Automorphism compose_automorphisms(const Automorphism& f, const Automorphism& g);

struct ActionMatrix {
    Automorphism K1, K2;
    std::array<QPoly, 3> E, F;  // images of x, y, z

    ActionMatrix specialize(const std::map<Var, mpq_class>& at) const;
    ActionMatrix substitute(const std::map<Var, Scalar>& at) const;
    bool operator==(const ActionMatrix& o) const {
        return K1 == o.K1 && K2 == o.K2 && E == o.E && F == o.F;
    }
    // K2 K1^{-1} and K2^{-1} K1
    Automorphism sigma() const;
    Automorphism sigma_prime() const;
};

// Caches automorphism images of monomials.
class AutoCache {
public:
    explicit AutoCache(Automorphism psi) : psi_(std::move(psi)) {}
    const QPoly& on(const Monomial& m);
    QPoly on(const QPoly& p);
    const Automorphism& map() const { return psi_; }

private:
    Automorphism psi_;
    std::map<Monomial, QPoly> cache_;
    std::vector<QPoly> ypow_;
};

// Extends generator images of a twisted derivation to all of C_q[x,y,z].
// Left twist (E): D(ab) = D(a) b + s(a) D(b).
// Right twist (F): D(ab) = a D(b) + D(a) s(b).
class Extender {
public:
    enum class Side { Left, Right };
    Extender(std::array<QPoly, 3> images, const Automorphism& twist, Side side)
        : img_(std::move(images)), tw_(twist), side_(side) {}
    const QPoly& on(const Monomial& m);
    QPoly on(const QPoly& p);
    // value on a word of generator letters (0:x 1:y 2:z), folded left to right
    QPoly on_word(const std::vector<int>& letters);

private:
    std::array<QPoly, 3> img_;
    AutoCache tw_;
    Side side_;
    std::map<Monomial, QPoly> cache_;
};

Extender make_E(const ActionMatrix& act);
Extender make_F(const ActionMatrix& act);
QPoly extend_E(const ActionMatrix& act, const QPoly& p);
QPoly extend_F(const ActionMatrix& act, const QPoly& p);

struct Residual {
    std::string relation;
    Monomial witness;
    QPoly residual;
};

struct VerificationReport {
    bool verified = true;
    std::vector<Residual> failures;
    int degree_bound = 0;
};

// the defining relations yx-qxy, zy-qyz, zx-qxz pushed through E then F
std::vector<Residual> leibniz_residuals(const ActionMatrix& act);
std::vector<Residual> check_leibniz_consistency(const ActionMatrix& act);  // nonzero only
VerificationReport check_operator_relations(const ActionMatrix& act, int degree_bound);
VerificationReport verify_module_algebra(const ActionMatrix& act, int degree_bound);
// verdict with q evaluated at a rational; coefficients may still involve q
VerificationReport verify_module_algebra_at(const ActionMatrix& act, int degree_bound, const mpq_class& q);

// relation identifiers in report order
extern const std::vector<std::string> kRelationOrder;

// right-hand side of EF - FE on p
QPoly ef_rhs(const ActionMatrix& act, const QPoly& p);

// residual of one relation (an entry of kRelationOrder other than "unit")
// evaluated at m; Leibniz relations ignore m
QPoly relation_residual(const ActionMatrix& act, const std::string& relation, const Monomial& m);

}  // namespace qa
