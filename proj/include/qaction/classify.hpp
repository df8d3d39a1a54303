#pragma once

// Classification of module-algebra structures series by series: every
// pairing of a degree-0 case with a degree-1 case is either certified empty
// by a replayable contradiction log or turned into explicit families.

#include "qaction/weights.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qa {

struct ClassifyOptions {
    int degree_bound = 6;
    std::size_t max_branches = 0;  // 0: QACTION_MAX_BRANCHES or 65536
};

std::size_t default_branch_limit();

struct CertStep {
    enum class Kind { Assume, Constraint, Forced, Contradiction, Note };
    Kind kind = Kind::Note;
    std::string text;
    // Assume / Forced: the unknown and its value; Assume with nonzero set
    // records u != 0 instead of a value
    std::optional<Var> unknown;
    Scalar value;
    bool nonzero = false;
    // Constraint: the weight equation added; Contradiction: an impossible
    // pure weight equation when residual is unused
    std::optional<WeightConstraint> constraint;
    // Forced / Contradiction: relation, witness monomial and residual;
    // Forced also records the coefficient position it clears
    std::string relation;
    Monomial witness;
    Monomial at;
    QPoly residual;
    // Contradiction of a block assumed nonzero: its unknowns, all forced to 0
    std::vector<Var> vanishing;
};

// One dead branch, replayable from its starting matrix and weight equations.
struct BranchRecord {
    std::string label;
    ActionMatrix base;
    std::vector<WeightConstraint> weights;
    std::vector<Scalar> side_conditions;
    std::vector<CertStep> steps;
};

struct SeriesCandidate {
    SeriesCase degree0, degree1;
    TMode tmode = TMode::Zero;
    ConstraintOutcome merged;
    std::vector<WeightConstraint> constraints;
    std::map<Slot, Scalar> low;            // nonzero low slots with coefficients
    std::vector<Scalar> side_conditions;   // must vanish
    std::optional<std::string> dead;       // reason the pairing is contradictory
    std::vector<WeightConstraint> dead_constraints;
    std::array<std::vector<Monomial>, 6> supports;  // E(x..z), F(x..z) admissible monomials of degree >= 2

    std::string label() const;
};

SeriesCandidate build_series(const SeriesCase& degree0, const SeriesCase& degree1,
                             int degree_bound = 6);

struct EmptinessCertificate {
    std::string series;
    TMode tmode = TMode::Zero;
    std::vector<BranchRecord> branches;
    std::vector<std::string> notes;
};

struct ModuleAlgebraStructure {
    std::string family;
    std::string series;
    ActionMatrix matrix;
    std::vector<std::string> params;      // free symbols of the family
    std::array<int, 3> signs{1, 1, 1};    // K2 = sign * K1 on generator eigenvalues
    std::vector<std::string> conditions;  // genericity conditions on the params
};

struct SeriesOutcome {
    std::optional<EmptinessCertificate> certificate;
    std::vector<ModuleAlgebraStructure> structures;
};

SeriesOutcome certify_or_construct(const SeriesCandidate& s, const ClassifyOptions& opt = {});

// recomputes every recorded contradiction; true when all match exactly
bool replay_certificate(const EmptinessCertificate& c);

struct ShearConsistency {
    bool consistent = false;
    std::optional<Scalar> t;  // common shear when some beta_i != alpha_i gamma_i
};
ShearConsistency lemma31_consistency(const Automorphism& K1, const Automorphism& K2);

struct FamilyConstruction {
    std::vector<ModuleAlgebraStructure> members;  // verified sign patterns
    std::vector<std::string> excluded;            // sign patterns that fail
};
FamilyConstruction construct_theorem_families(TMode tmode, int degree_bound = 6);

// tag plus eigen data; for t != 0 also the ratio t2 : t1
struct IsoInvariant {
    std::string family;
    std::array<Scalar, 6> eigen;
    std::optional<Scalar> shear_ratio;
    bool operator==(const IsoInvariant& o) const = default;
    std::string str() const;
};

// family tag of a concrete or symbolic structure; throws UnclassifiedStructure
std::string identify_family(const ActionMatrix& m);
IsoInvariant isomorphism_invariant(const ModuleAlgebraStructure& s);

struct FamilySummary {
    std::string tag;
    bool printed = false;  // one of the families of the published theorems
    std::vector<std::string> params;
    std::vector<std::array<int, 3>> signs;
    std::vector<ModuleAlgebraStructure> members;
};

struct ClassificationReport {
    TMode tmode = TMode::Zero;
    int degree_bound = 6;
    std::size_t total_series = 0;
    std::vector<SeriesCandidate> series;
    std::vector<EmptinessCertificate> certificates;
    std::vector<std::string> nonempty;  // labels of series with structures
    std::vector<ModuleAlgebraStructure> structures;
    std::vector<FamilySummary> families;
    FamilyConstruction printed;
};

ClassificationReport run_classification(TMode tmode, int degree_bound = 6,
                                        const ClassifyOptions& opt = {});

}  // namespace qa
