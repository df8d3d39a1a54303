#pragma once

// Weight calculus for the K1/K2 eigen-structure: weight words, the partial
// match relation, a lattice solver for multiplicative weight equations and
// derivation of the low-degree case tables.

#include "qaction/action.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qa {

// weight symbols in fixed order
enum WeightSym { kAlpha1 = 0, kBeta1, kGamma1, kAlpha2, kBeta2, kGamma2 };
constexpr int kNumWeightSyms = 6;

const char* weight_sym_name(int s);
Var weight_sym_var(int s);
// t1, t2 (off-diagonal parts of K1, K2), i = 1 or 2
Var shear_var(int i);

enum class TMode { Zero, NonZero };
enum class WhichK { K1, K2 };

// sign * q^qexp * prod sym^exp
struct WeightWord {
    std::array<int, kNumWeightSyms> exp{};
    int sign = 1;
    int qexp = 0;

    static WeightWord identity() { return {}; }
    static WeightWord sym(int s, int k = 1);
    static WeightWord scalar(int sign, int qexp);

    bool is_identity() const;
    bool is_pure() const;  // no weight symbols
    WeightWord operator*(const WeightWord& o) const;
    WeightWord inverse() const;
    WeightWord pow(int k) const;
    auto operator<=>(const WeightWord&) const = default;
    Scalar to_scalar() const;
    std::string str() const;
};

WeightWord parse_weight_word(const std::string& text);

struct WeightConstraint {
    WeightWord lhs, rhs;
    // lhs * rhs^{-1}, to be read as "= 1"
    WeightWord normalized() const { return lhs * rhs.inverse(); }
    bool operator==(const WeightConstraint& o) const { return normalized() == o.normalized(); }
    std::string str() const;
};

// "lhs = rhs", both sides products of alpha1..gamma2, q, integer powers, leading '-'
WeightConstraint parse_weight_constraint(const std::string& text);

struct ConstraintOutcome {
    enum class Status { Consistent, Contradiction };
    Status status = Status::Consistent;
    // Hermite basis of the relation lattice, one constraint per pivot row,
    // written as "pivot-part = sign q^k"
    std::vector<WeightConstraint> basis;
    // pivot symbol -> expression in the free symbols (unit pivots only)
    std::map<int, WeightWord> values;
    std::vector<int> free_symbols;
    bool unit_pivots = true;
    std::optional<WeightWord> witness;  // pure word w with "w = 1" impossible

    bool consistent() const { return status == Status::Consistent; }
    // value of w forced by the relations, if any
    std::optional<WeightWord> evaluate(const WeightWord& w) const;
    // canonical representative of w modulo the relations
    WeightWord reduce(const WeightWord& w) const;
    // weight symbol vars -> Scalar expressions, for the unit pivot symbols
    std::map<Var, Scalar> substitution() const;
    bool same_lattice(const ConstraintOutcome& o) const;

    // raw Hermite rows: 6 exponents, q exponent, sign bit
    struct Row {
        std::array<long long, kNumWeightSyms + 1> v{};
        int s = 0;
    };
    std::vector<Row> rows;
};

ConstraintOutcome solve_constraints(const std::vector<WeightConstraint>& cs);

WeightWord weight_of_monomial(const Monomial& m, WhichK which, TMode mode = TMode::Zero);

using WeightMatrix = std::vector<std::vector<std::optional<WeightWord>>>;
bool partial_weight_match(const WeightMatrix& a, const WeightMatrix& b);

std::vector<Monomial> admissible_support(const WeightWord& target_k1, const WeightWord& target_k2,
                                         const std::vector<WeightConstraint>& fixed,
                                         int max_degree, TMode mode = TMode::Zero);

// one coefficient slot of the E/F image matrix
struct Slot {
    int row = 0;  // 0: E, 1: F
    int col = 0;  // 0: x, 1: y, 2: z
    Monomial m;
    auto operator<=>(const Slot&) const = default;
    std::string str() const;  // e.g. "E(y)[xz]"
};

// weight the image of a generator must carry: E scales by +-q^-1, F by +-q
WeightWord slot_target_weight(int row, int col, WhichK which);
// whether the slot is subject to the eigen-weight rule in this mode
bool slot_is_eigen(const Slot& s, TMode mode);
// coefficient name for a slot, e.g. "b2", "a1p"
std::string slot_label(const Slot& s, TMode mode);
// slots considered at a given degree
std::vector<Slot> slot_layout(int degree, TMode mode);

struct SeriesCase {
    int degree = 0;
    TMode tmode = TMode::Zero;
    std::vector<Slot> context;  // lower-degree slots assumed nonzero
    std::vector<Slot> support;
    std::vector<WeightConstraint> implied;
    std::map<Slot, Scalar> coefficient_formulas;
    std::vector<Scalar> side_conditions;  // must vanish, not expressible as weight equations
    // support slots forced to vanish by the projected equations
    std::vector<Slot> forced_zero;

    std::string label() const;
};

// Symbolic coefficient variable of a slot.
Var slot_var(const Slot& s, TMode mode);

SeriesCase derive_case_constraints(const SeriesCase& c);
std::vector<SeriesCase> enumerate_cases(int degree, TMode mode);

}  // namespace qa
