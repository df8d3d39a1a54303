#pragma once

// Helpers shared between the weight and classification sources.

#include "qaction/weights.hpp"

#include <optional>

namespace qa::detail {

// monomial in q and weight symbols as a weight word; nullopt if other symbols occur
std::optional<WeightWord> word_of_mono(const PMono& m);

// Classifies "f = 0" for f a polynomial in q and weight symbols.
//   Constraint: f is a binomial with +-1 coefficient ratio
//   Impossible: f cannot vanish
//   Opaque: anything else
struct Vanishing {
    enum Kind { Constraint, Impossible, Opaque } kind;
    WeightConstraint c;
};
Vanishing analyze_vanishing(const Poly& f);

}  // namespace qa::detail
