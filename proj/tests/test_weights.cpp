#include <doctest.h>

#include "qaction/errors.hpp"
#include "qaction/weights.hpp"

#include <algorithm>
#include <random>

using namespace qa;

namespace {

WeightWord W(const std::string& s) { return parse_weight_word(s); }
WeightConstraint C(const std::string& s) { return parse_weight_constraint(s); }

std::vector<WeightConstraint> Cs(const std::vector<std::string>& ss) {
    std::vector<WeightConstraint> out;
    for (const auto& s : ss) out.push_back(C(s));
    return out;
}

bool same_lattice(const std::vector<WeightConstraint>& a, const std::vector<WeightConstraint>& b) {
    return solve_constraints(a).same_lattice(solve_constraints(b));
}

constexpr Monomial kOne{0, 0, 0}, kX{1, 0, 0}, kY{0, 1, 0}, kZ{0, 0, 1};

Slot E(int col, Monomial m) { return {0, col, m}; }
Slot F(int col, Monomial m) { return {1, col, m}; }

// value of a weight word with q = 2 and the given symbol values
mpq_class eval_word(const WeightWord& w, const std::array<mpq_class, kNumWeightSyms>& v) {
    mpq_class r = w.sign;
    auto pw = [](mpq_class b, int e) {
        mpq_class r = 1;
        if (e < 0) {
            b = 1 / b;
            e = -e;
        }
        while (e-- > 0) r *= b;
        return r;
    };
    r *= pw(2, w.qexp);
    for (int i = 0; i < kNumWeightSyms; ++i) r *= pw(v[i], w.exp[i]);
    return r;
}

bool holds(const WeightConstraint& c, const std::array<mpq_class, kNumWeightSyms>& v) {
    return eval_word(c.normalized(), v) == 1;
}

WeightWord random_word(std::mt19937& rng) {
    std::uniform_int_distribution<int> e(-2, 2), k(-3, 3);
    WeightWord w;
    for (int i = 0; i < kNumWeightSyms; ++i) w.exp[i] = (rng() % 3 == 0) ? e(rng) : 0;
    w.sign = rng() % 2 ? 1 : -1;
    w.qexp = k(rng);
    return w;
}

std::vector<WeightConstraint> random_system(std::mt19937& rng) {
    std::vector<WeightConstraint> cs;
    int n = 1 + rng() % 5;
    for (int i = 0; i < n; ++i) cs.push_back({random_word(rng), WeightWord::identity()});
    return cs;
}

// printed table: support -> implied constraints
struct Printed {
    std::vector<Slot> support;
    std::vector<std::string> implied;
};

void check_against_printed(const std::vector<SeriesCase>& derived, std::vector<Printed> printed) {
    REQUIRE(derived.size() == printed.size());
    for (auto& p : printed) std::sort(p.support.begin(), p.support.end());
    for (const SeriesCase& c : derived) {
        std::vector<Slot> s = c.support;
        std::sort(s.begin(), s.end());
        auto it = std::find_if(printed.begin(), printed.end(), [&](const Printed& p) { return p.support == s; });
        INFO(c.label());
        REQUIRE(it != printed.end());
        CHECK(same_lattice(c.implied, Cs(it->implied)));
    }
}

}  // namespace

TEST_CASE("weights of monomials") {
    CHECK(weight_of_monomial(kX, WhichK::K1) == W("alpha1"));
    CHECK(weight_of_monomial(kOne, WhichK::K2) == WeightWord::identity());
    CHECK(weight_of_monomial(Monomial{2, 1, 3}, WhichK::K2) == W("alpha2^2*beta2*gamma2^3"));
    CHECK(weight_of_monomial(Monomial{2, 0, 3}, WhichK::K1, TMode::NonZero) == W("alpha1^2*gamma1^3"));
    CHECK_THROWS_AS(weight_of_monomial(kY, WhichK::K1, TMode::NonZero), NotAWeightVector);
}

TEST_CASE("weight words parse and print") {
    CHECK(W("-q^-1*alpha1").str() == "-q^-1*alpha1");
    CHECK(W("alpha2/alpha1") == W("alpha1^-1*alpha2"));
    CHECK(W("1") == WeightWord::identity());
    CHECK(C("beta1^-1*beta2 = q").normalized() == W("q^-1*beta1^-1*beta2"));
    CHECK_THROWS_AS(W("alpha1 + beta1"), SyntaxError);
    CHECK_THROWS_AS(W("delta"), SyntaxError);
    CHECK_THROWS_AS(C("alpha1"), SyntaxError);
}

TEST_CASE("weight multiplicativity up to degree 3") {
    auto monos = monomials_up_to(3);
    for (WhichK k : {WhichK::K1, WhichK::K2})
        for (const auto& m1 : monos)
            for (const auto& m2 : monos) {
                Monomial p = mono_mul(m1, m2).second;
                CHECK(weight_of_monomial(p, k) == weight_of_monomial(m1, k) * weight_of_monomial(m2, k));
            }
}

TEST_CASE("partial weight match") {
    WeightMatrix a = {{W("alpha1"), W("q*beta1")}, {std::nullopt, W("gamma2")}};
    WeightMatrix b = a;
    CHECK(partial_weight_match(a, b));
    b[1][0] = W("alpha2");
    CHECK(partial_weight_match(a, b));
    b[0][1] = W("beta1");
    CHECK_FALSE(partial_weight_match(a, b));
    WeightMatrix c = {{W("alpha1")}};
    CHECK_THROWS_AS(partial_weight_match(a, c), ShapeMismatch);
}

TEST_CASE("solve constraints examples") {
    auto sign_clash = solve_constraints(Cs({"alpha2*alpha1^-1 = -q", "alpha2*alpha1^-1 = q"}));
    CHECK(sign_clash.status == ConstraintOutcome::Status::Contradiction);
    REQUIRE(sign_clash.witness);
    CHECK(*sign_clash.witness == WeightWord::scalar(-1, 0));

    // q^m beta1^n gamma1^l = 1 and its K2 analog with (m,n,l) = (0,1,1)
    auto lemma = solve_constraints(Cs({"beta1*gamma1 = 1", "beta2*gamma2 = 1", "beta2 = q*beta1", "gamma2 = q*gamma1"}));
    CHECK(lemma.status == ConstraintOutcome::Status::Contradiction);
    REQUIRE(lemma.witness);
    CHECK(*lemma.witness == W("q^2"));

    auto ok = solve_constraints(Cs({"alpha1 = q", "alpha2 = -q", "beta1^-1*beta2 = q", "gamma1^-1*gamma2 = q"}));
    CHECK(ok.consistent());
    CHECK(ok.free_symbols == std::vector<int>{kBeta1, kGamma1});
    CHECK(ok.unit_pivots);
    CHECK(ok.values.at(kAlpha1) == W("q"));
    CHECK(ok.values.at(kBeta2) == W("q*beta1"));
    CHECK(*ok.evaluate(W("alpha1*alpha2^-1")) == WeightWord::scalar(-1, 0));
    CHECK_FALSE(ok.evaluate(W("beta1")));

    auto empty = solve_constraints({});
    CHECK(empty.consistent());
    CHECK(empty.free_symbols.size() == 6);

    // square roots stay unresolved: alpha1^2 = 1 is consistent, alpha1 not determined
    auto root = solve_constraints(Cs({"alpha1^2 = 1"}));
    CHECK(root.consistent());
    CHECK_FALSE(root.unit_pivots);
    CHECK_FALSE(root.evaluate(W("alpha1")));
    CHECK(*root.evaluate(W("alpha1^4")) == WeightWord::identity());
}

TEST_CASE("solve constraints is order independent") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        auto cs = random_system(rng);
        auto base = solve_constraints(cs);
        for (int p = 0; p < 4; ++p) {
            std::shuffle(cs.begin(), cs.end(), rng);
            auto other = solve_constraints(cs);
            CHECK(other.status == base.status);
            CHECK(other.same_lattice(base));
        }
    }
}

TEST_CASE("contradictions are sound and parameterizations satisfy the system") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> k(-3, 3);
    int contradictions = 0, parameterized = 0;
    for (int trial = 0; trial < 400; ++trial) {
        auto cs = random_system(rng);
        auto out = solve_constraints(cs);
        if (!out.consistent()) {
            ++contradictions;
            REQUIRE(out.witness);
            CHECK(out.witness->is_pure());
            CHECK_FALSE(out.witness->is_identity());
            for (int s = 0; s < 100; ++s) {
                std::array<mpq_class, kNumWeightSyms> v;
                for (auto& x : v) x = mpq_class((rng() % 2 ? 1 : -1)) * (k(rng) >= 0 ? mpq_class(1 << (rng() % 4)) : mpq_class(1, 1 << (rng() % 4)));
                CHECK_FALSE(std::all_of(cs.begin(), cs.end(), [&](const WeightConstraint& c) { return holds(c, v); }));
            }
        } else if (out.unit_pivots) {
            ++parameterized;
            std::array<mpq_class, kNumWeightSyms> v;
            for (int f : out.free_symbols) v[f] = mpq_class(rng() % 2 ? 3 : -5, 1 + rng() % 4);
            for (const auto& [s, w] : out.values) v[s] = eval_word(w, v);
            for (const auto& c : cs) CHECK(holds(c, v));
        }
    }
    CHECK(contradictions > 20);
    CHECK(parameterized > 20);
}

TEST_CASE("admissible support") {
    auto fixed = Cs({"alpha1 = q", "alpha2 = -q", "beta2 = q*beta1", "gamma2 = q*gamma1"});
    auto ex = admissible_support(slot_target_weight(0, 0, WhichK::K1), slot_target_weight(0, 0, WhichK::K2), fixed, 6);
    CHECK(ex == std::vector<Monomial>{kOne});
    auto fx = admissible_support(slot_target_weight(1, 0, WhichK::K1), slot_target_weight(1, 0, WhichK::K2), fixed, 6);
    CHECK(fx == std::vector<Monomial>{Monomial{2, 0, 0}});
    CHECK(admissible_support(W("q^5"), W("-q^-7"), Cs({"alpha1 = 1", "beta1 = 1", "gamma1 = 1"}), 4).empty());
}

TEST_CASE("derive case constraints") {
    SeriesCase a0;
    a0.degree = 0;
    a0.support = {E(0, kOne)};
    auto d = derive_case_constraints(a0);
    CHECK(same_lattice(d.implied, Cs({"alpha1 = q", "alpha2 = -q", "beta1^-1*beta2 = q", "gamma1^-1*gamma2 = q"})));

    SeriesCase none;
    none.degree = 1;
    CHECK(derive_case_constraints(none).implied.empty());

    SeriesCase cond;
    cond.degree = 1;
    cond.tmode = TMode::NonZero;
    cond.context = {E(0, kOne)};
    cond.support = {E(1, kZ)};
    auto dc = derive_case_constraints(cond);
    ParamSet ps({"a0", "t1", "t2", "beta1"});
    REQUIRE(dc.coefficient_formulas.count(E(1, kZ)));
    CHECK(dc.coefficient_formulas.at(E(1, kZ)) == parse_scalar("-a0*(t2 + q*t1)/(2*q*beta1)", ps));
    CHECK(dc.side_conditions.empty());
}

TEST_CASE("degree 0 table for t = 0") {
    check_against_printed(enumerate_cases(0, TMode::Zero),
                          {
                              {{E(0, kOne)}, {"alpha1 = q", "alpha2 = -q", "beta1^-1*beta2 = q", "gamma1^-1*gamma2 = q"}},
                              {{E(1, kOne)}, {"beta1 = q", "beta2 = -q", "alpha1^-1*alpha2 = q^-1", "gamma1^-1*gamma2 = q"}},
                              {{E(2, kOne)}, {"gamma1 = q", "gamma2 = -q", "beta1^-1*beta2 = q^-1", "alpha1^-1*alpha2 = q^-1"}},
                              {{F(0, kOne)}, {"alpha1 = q^-1", "alpha2 = -q^-1", "beta1*beta2^-1 = q^-1", "gamma1*gamma2^-1 = q^-1"}},
                              {{F(1, kOne)}, {"beta1 = q^-1", "beta2 = -q^-1", "alpha1*alpha2^-1 = q", "gamma1*gamma2^-1 = q^-1"}},
                              {{F(2, kOne)}, {"gamma1 = q^-1", "gamma2 = -q^-1", "beta1*beta2^-1 = q", "alpha1*alpha2^-1 = q"}},
                              {{}, {}},
                          });
}

TEST_CASE("degree 1 table for t = 0") {
    check_against_printed(
        enumerate_cases(1, TMode::Zero),
        {
            {{E(0, kY)}, {"beta1 = q^-1*alpha1", "beta2 = -q^-1*alpha2", "beta1^-1*beta2 = q", "gamma1^-1*gamma2 = 1"}},
            {{E(0, kZ)}, {"gamma1 = q^-1*alpha1", "gamma2 = -q^-1*alpha2", "beta1^-1*beta2 = q^2", "gamma1^-1*gamma2 = q"}},
            {{E(1, kX)}, {"beta1 = q*alpha1", "beta2 = -q*alpha2", "alpha1^-1*alpha2 = q^-1", "gamma1^-1*gamma2 = 1"}},
            {{E(1, kZ)}, {"gamma1 = q^-1*beta1", "gamma2 = -q^-1*beta2", "alpha1^-1*alpha2 = 1", "gamma1^-1*gamma2 = q"}},
            {{E(2, kX)}, {"alpha1 = q^-1*gamma1", "alpha2 = -q^-1*gamma2", "alpha1^-1*alpha2 = q^-1", "beta1^-1*beta2 = q^-2"}},
            {{E(2, kY)}, {"beta1 = q^-1*gamma1", "beta2 = -q^-1*gamma2", "alpha1^-1*alpha2 = 1", "beta1^-1*beta2 = q^-1"}},
            {{F(0, kY)}, {"beta1 = q*alpha1", "beta2 = -q*alpha2", "beta1^-1*beta2 = q", "gamma1^-1*gamma2 = 1"}},
            {{F(0, kZ)}, {"gamma1 = q*alpha1", "gamma2 = -q*alpha2", "beta1^-1*beta2 = q^2", "gamma1^-1*gamma2 = q"}},
            {{F(1, kX)}, {"beta1 = q^-1*alpha1", "beta2 = -q^-1*alpha2", "alpha1^-1*alpha2 = q^-1", "gamma1^-1*gamma2 = 1"}},
            {{F(1, kZ)}, {"gamma1 = q*beta1", "gamma2 = -q*beta2", "alpha1^-1*alpha2 = 1", "gamma1^-1*gamma2 = q"}},
            {{F(2, kX)}, {"alpha1 = q*gamma1", "alpha2 = -q*gamma2", "alpha1^-1*alpha2 = q^-1", "beta1^-1*beta2 = q^-2"}},
            {{F(2, kY)}, {"beta1 = q*gamma1", "beta2 = -q*gamma2", "alpha1^-1*alpha2 = 1", "beta1^-1*beta2 = q^-1"}},
            {{}, {}},
        });
}

TEST_CASE("degree 0 table for nonzero t") {
    check_against_printed(enumerate_cases(0, TMode::NonZero),
                          {
                              {{E(0, kOne)}, {"alpha1 = q", "alpha2 = -q", "beta1^-1*beta2 = q", "gamma1^-1*gamma2 = q"}},
                              {{E(1, kOne)}, {"alpha1^-1*alpha2 = q^-1", "gamma1^-1*gamma2 = q"}},
                              {{E(2, kOne)}, {"gamma1 = q", "gamma2 = -q", "beta1^-1*beta2 = q^-1", "alpha1^-1*alpha2 = q^-1"}},
                              {{F(0, kOne)}, {"alpha1 = q^-1", "alpha2 = -q^-1", "beta1*beta2^-1 = q^-1", "gamma1*gamma2^-1 = q^-1"}},
                              {{F(1, kOne)}, {"alpha1*alpha2^-1 = q", "gamma1*gamma2^-1 = q^-1"}},
                              {{F(2, kOne)}, {"gamma1 = q^-1", "gamma2 = -q^-1", "beta1*beta2^-1 = q", "alpha1*alpha2^-1 = q"}},
                              {{E(1, kOne), F(1, kOne)}, {"alpha1^-1*alpha2 = q^-1", "gamma1^-1*gamma2 = q"}},
                              {{}, {}},
                          });
}

TEST_CASE("degree 1 cases for nonzero t") {
    auto cases = enumerate_cases(1, TMode::NonZero);
    // 14 unconditional patterns and 4 cases conditional on a degree-0 entry
    CHECK(cases.size() == 18);
    int conditional = 0;
    for (const auto& c : cases) {
        CHECK(solve_constraints(c.implied).consistent());
        if (!c.context.empty()) ++conditional;
    }
    CHECK(conditional == 4);

    ParamSet ps({"a0", "c0", "a0p", "c0p", "t1", "t2", "alpha1", "beta1", "gamma1"});
    auto formula_for = [&](const Slot& ctx) {
        for (const auto& c : cases)
            if (c.context == std::vector<Slot>{ctx}) {
                REQUIRE(c.coefficient_formulas.size() == 1);
                return *c.coefficient_formulas.begin();
            }
        FAIL("missing conditional case");
        return std::pair<const Slot, Scalar>{};
    };
    // printed formulas, rewritten through the case's own weight relations
    auto [s1, f1] = formula_for(E(0, kOne));
    CHECK(s1 == E(1, kZ));
    CHECK(f1 == parse_scalar("-a0*(t2 + q*t1)/(2*q*beta1)", ps));
    auto [s2, f2] = formula_for(E(2, kOne));
    CHECK(s2 == E(1, kX));
    CHECK(f2 == parse_scalar("-c0*(t1 + q*t2)/(2*q*beta1)", ps));
    // alpha2 = -q^-1, gamma2 = q gamma1
    auto [s3, f3] = formula_for(F(0, kOne));
    CHECK(s3 == F(1, kZ));
    CHECK(f3 == parse_scalar("a0p*(t2 - q*t1)/(2*q*(-q^-1)*(q*gamma1))", ps));
    // alpha2 = q^-1 alpha1, gamma2 = -q^-1
    auto [s4, f4] = formula_for(F(2, kOne));
    CHECK(s4 == F(1, kX));
    CHECK(f4 == parse_scalar("c0p*(q*t2 - t1)/(2*q*(q^-1*alpha1)*(-q^-1))", ps));
}

TEST_CASE("every enumerated case is consistent") {
    for (int d : {0, 1})
        for (TMode m : {TMode::Zero, TMode::NonZero})
            for (const auto& c : enumerate_cases(d, m)) {
                INFO(c.label());
                CHECK(solve_constraints(c.implied).consistent());
                CHECK(c.forced_zero.empty());
            }
}
