#pragma once

// Branching solver for the polynomial systems of one series, and the graded
// block engine that sets those systems up.

#include "qaction/classify.hpp"

#include <set>
#include <string>
#include <vector>

namespace qa::detail {

class Budget {
public:
    Budget(std::string series, std::size_t limit) : series_(std::move(series)), limit_(limit) {}
    void spend();
    std::size_t used() const { return used_; }

private:
    std::string series_;
    std::size_t limit_;
    std::size_t used_ = 0;
};

struct SolveProblem {
    std::string label;
    ActionMatrix base;  // images carry the unknowns; K rows already reduced
    std::vector<Var> unknowns;
    std::vector<std::vector<Var>> nonzero_groups;  // each group must not vanish entirely
    std::vector<WeightConstraint> weights;
    std::vector<Scalar> side_conditions;
    std::set<Var> maybe_zero;  // parameters that are not known to be nonzero
    bool commute_with_delta = false;
    int degree_bound = 6;
};

struct Survivor {
    ActionMatrix matrix;
    std::vector<WeightConstraint> weights;
    std::vector<Var> free_unknowns;
    std::vector<Scalar> nonzero;  // genericity conditions
};

struct SolveResult {
    std::vector<BranchRecord> dead;
    std::vector<Survivor> alive;
};

SolveResult solve_problem(const SolveProblem& p, Budget& budget);

// residual of a solver equation: relation names of the action module plus
// "[d,E]", "[d,F]" (commutator with the derivation y -> xz on a generator)
// and "side#k"
QPoly equation_residual(const ActionMatrix& act, const std::string& relation, const Monomial& witness,
                        const std::vector<Scalar>& side);

// rewrites weight monomials to their canonical representatives when the
// lattice has non-unit pivots (the substitution alone does not reduce them)
Scalar reduce_weights(const Scalar& c, const ConstraintOutcome& lat);
QPoly reduce_weights(const QPoly& p, const ConstraintOutcome& lat);
ActionMatrix reduce_weights(const ActionMatrix& m, const ConstraintOutcome& lat);

// whether the polynomial is certainly nonzero as a function of the
// parameters: a monomial avoiding the maybe-zero parameters times a nonzero
// polynomial in q alone
bool surely_nonzero(const Poly& p, const std::set<Var>& maybe_zero);

struct EngineInput {
    std::string label;
    bool jordan = false;  // Z^2 grading, E and F commute with y -> xz
    std::vector<WeightConstraint> weights;
    Automorphism K1, K2;
    std::map<Slot, Scalar> low;
    std::vector<Scalar> side_conditions;
    std::set<Var> maybe_zero;
    int degree_bound = 6;
};

struct EngineOutput {
    std::vector<BranchRecord> dead;
    std::vector<Survivor> alive;
    std::vector<std::string> notes;
};

EngineOutput run_engine(const EngineInput& in, Budget& budget);

}  // namespace qa::detail
