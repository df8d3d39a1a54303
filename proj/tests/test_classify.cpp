#include <doctest.h>

#include "qaction/classify.hpp"
#include "qaction/errors.hpp"

#include <random>
#include <sstream>

using namespace qa;

namespace {

const ParamSet& params() {
    static ParamSet ps({"a0", "alpha1", "beta1", "gamma1", "alpha2", "beta2", "gamma2", "lambda1", "lambda2",
                        "lambda3", "t", "t1", "t2", "c1"});
    return ps;
}

Scalar S(const std::string& s) { return parse_scalar(s, params()); }
QPoly P(const std::string& s) { return parse_qpoly(s, params()); }

const ClassificationReport& report(TMode m, int d = 6) {
    static std::map<std::pair<int, int>, ClassificationReport> cache;
    auto key = std::make_pair(static_cast<int>(m), d);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, run_classification(m, d)).first;
    return it->second;
}

const EmptinessCertificate& certificate(const ClassificationReport& r, const std::string& series) {
    for (const auto& c : r.certificates)
        if (c.series == series) return c;
    throw Error("no certificate for " + series);
}

const CertStep& final_step(const BranchRecord& b) { return b.steps.back(); }

bool has_final_residual(const EmptinessCertificate& c, const std::string& rel, const QPoly& res) {
    for (const auto& b : c.branches) {
        const CertStep& st = final_step(b);
        if (st.kind == CertStep::Kind::Contradiction && st.relation == rel && st.residual == res) return true;
    }
    return false;
}

const SeriesCase& find_case(int degree, TMode m, const std::string& label) {
    static std::map<std::pair<int, int>, std::vector<SeriesCase>> cache;
    auto key = std::make_pair(degree, static_cast<int>(m));
    if (!cache.count(key)) cache[key] = enumerate_cases(degree, m);
    for (const auto& c : cache[key])
        if (c.label() == label) return c;
    throw Error("no case " + label);
}

std::string summary(const ClassificationReport& r) {
    std::ostringstream os;
    os << r.total_series << "\n";
    for (const auto& c : r.certificates) os << "empty " << c.series << "\n";
    for (const auto& n : r.nonempty) os << "nonempty " << n << "\n";
    for (const auto& s : r.structures) {
        os << s.family << " " << s.signs[0] << s.signs[1] << s.signs[2] << " " << s.matrix.K1.str() << " "
           << s.matrix.K2.str();
        for (const auto& p : s.matrix.E) os << " " << p.str();
        for (const auto& p : s.matrix.F) os << " " << p.str();
        for (const auto& c : s.conditions) os << " [" << c << "]";
        os << "\n";
    }
    return os.str();
}

mpq_class rnd_nonzero(std::mt19937& rng) {
    std::uniform_int_distribution<int> n(-9, 9), d(1, 4);
    int v;
    do v = n(rng);
    while (v == 0);
    return mpq_class(v, d(rng));
}

// every symbol of the structure set to a random nonzero rational, q = 2
std::map<Var, mpq_class> random_point(const ActionMatrix& m, std::mt19937& rng) {
    std::set<Var> vs;
    auto add = [&](const Scalar& c) {
        for (Var v : c.vars()) vs.insert(v);
    };
    for (const Automorphism* k : {&m.K1, &m.K2})
        for (const Scalar* c : {&k->alpha, &k->beta, &k->gamma, &k->t}) add(*c);
    for (const auto* imgs : {&m.E, &m.F})
        for (const auto& p : *imgs)
            for (auto& [mono, c] : p.terms()) add(c);
    std::map<Var, mpq_class> at;
    for (Var v : vs) at[v] = v == Symbols::q ? mpq_class(2) : rnd_nonzero(rng);
    at[Symbols::q] = 2;
    return at;
}

Automorphism random_automorphism(std::mt19937& rng, bool diagonal) {
    Automorphism a{Scalar(rnd_nonzero(rng)), Scalar(rnd_nonzero(rng)), Scalar(rnd_nonzero(rng)), Scalar(0)};
    if (!diagonal) a.t = Scalar(rnd_nonzero(rng));
    return a;
}

// the action g . h . g^{-1}
ActionMatrix conjugate(const ActionMatrix& m, const Automorphism& g) {
    Automorphism gi = invert_automorphism(g);
    ActionMatrix out;
    out.K1 = compose_automorphisms(compose_automorphisms(g, m.K1), gi);
    out.K2 = compose_automorphisms(compose_automorphisms(g, m.K2), gi);
    for (int i = 0; i < 3; ++i) {
        QPoly in = apply_automorphism(gi, QPoly::generator(i));
        out.E[i] = apply_automorphism(g, extend_E(m, in));
        out.F[i] = apply_automorphism(g, extend_F(m, in));
    }
    return out;
}

}  // namespace

TEST_CASE("series construction") {
    SUBCASE("a0 with a1 y at t=0 is contradictory") {
        auto s = build_series(find_case(0, TMode::Zero, "{E(x)[1]}"), find_case(1, TMode::Zero, "{E(x)[y]}"));
        CHECK(s.dead);
        CHECK_FALSE(s.merged.consistent());
    }
    SUBCASE("zero-zero at t=0 is alive without low slots") {
        auto s = build_series(find_case(0, TMode::Zero, "{}"), find_case(1, TMode::Zero, "{}"));
        CHECK_FALSE(s.dead);
        CHECK(s.low.empty());
        for (const auto& sup : s.supports)
            for (const auto& m : sup) CHECK(m.degree() >= 2);
    }
    SUBCASE("a0 with the conditional b3 z case at t!=0") {
        auto s = build_series(find_case(0, TMode::NonZero, "{E(x)[1]}"),
                              find_case(1, TMode::NonZero, "{E(x)[1]} + {E(y)[z]}"));
        REQUIRE_FALSE(s.dead);
        Slot b3{0, 1, Monomial{0, 0, 1}};
        REQUIRE(s.low.count(b3));
        // t_i = (beta_i - alpha_i gamma_i) t, then the weight relations of the series
        std::map<Var, Scalar> sub{{shear_var(1), S("(beta1-alpha1*gamma1)*t")},
                                  {shear_var(2), S("(beta2-alpha2*gamma2)*t")}};
        Scalar v = s.low.at(b3).substitute(sub).substitute(s.merged.substitution());
        CHECK(v == S("-a0*t"));
    }
    SUBCASE("mismatched conditional context is dead") {
        auto s = build_series(find_case(0, TMode::NonZero, "{}"),
                              find_case(1, TMode::NonZero, "{E(x)[1]} + {E(y)[z]}"));
        CHECK(s.dead);
    }
}

TEST_CASE("printed residuals in certificates") {
    const auto& r = report(TMode::Zero);
    SUBCASE("E(x) = a1 y with F = 0 fails EF-FE on x by x") {
        const auto& c = certificate(r, "t=0 {} | {E(x)[y]}");
        CHECK(has_final_residual(c, "EF-FE", P("x")));
    }
    SUBCASE("E(x) = a0 ends on F(yx-qxy)") {
        const auto& c = certificate(r, "t=0 {E(x)[1]} | {}");
        CHECK(has_final_residual(c, "F(yx-qxy)", P("-a0^-1*(q^3+q)*x^2*y")));
    }
}

TEST_CASE("every certificate ends in a contradiction and replays") {
    for (TMode m : {TMode::Zero, TMode::NonZero}) {
        const auto& r = report(m);
        for (const auto& c : r.certificates) {
            INFO(c.series);
            REQUIRE_FALSE(c.branches.empty());
            for (const auto& b : c.branches) {
                INFO(b.label);
                CHECK(final_step(b).kind == CertStep::Kind::Contradiction);
                for (const auto& st : b.steps)
                    if (st.kind == CertStep::Kind::Contradiction && st.constraint == std::nullopt &&
                        st.relation != "nonzero" && st.relation != "block" && st.relation != "context")
                        CHECK_FALSE(st.residual.is_zero());
            }
            CHECK(replay_certificate(c));
        }
    }
}

TEST_CASE("tampered certificates do not replay") {
    const auto& c = certificate(report(TMode::Zero), "t=0 {E(x)[1]} | {}");
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
        if (final_step(c.branches[i]).residual.is_zero()) continue;
        EmptinessCertificate bad = c;
        bad.branches[i].steps.back().residual = bad.branches[i].steps.back().residual + P("x");
        CHECK_FALSE(replay_certificate(bad));
    }
}

TEST_CASE("t=0 classification") {
    const auto& r = report(TMode::Zero);
    CHECK(r.total_series == 91);
    CHECK(r.certificates.size() == 90);
    REQUIRE(r.nonempty.size() == 1);
    CHECK(r.nonempty[0] == "t=0 {} | {}");
    CHECK(r.total_series == r.certificates.size() + r.nonempty.size());
    REQUIRE(r.families.size() == 3);
    const auto& triv = r.families[0];
    CHECK(triv.tag == "T0_Trivial");
    CHECK(triv.printed);
    CHECK(triv.signs.size() == 8);
    for (const auto& s : triv.members) {
        for (const auto* imgs : {&s.matrix.E, &s.matrix.F})
            for (const auto& p : *imgs) CHECK(p.is_zero());
        CHECK(s.matrix.K1 == Automorphism::diagonal(S("alpha1"), S("beta1"), S("gamma1")));
        CHECK(s.matrix.K2 == Automorphism::diagonal(S("alpha1") * Scalar(s.signs[0]), S("beta1") * Scalar(s.signs[1]),
                                                    S("gamma1") * Scalar(s.signs[2])));
    }
    // shears outside the printed theorem
    CHECK(r.families[1].tag == "T0_ShearF");
    CHECK(r.families[2].tag == "T0_ShearE");
    const auto& e = r.families[2].members.at(0).matrix;
    CHECK(e.E[1] == P("c1*x*z"));
    CHECK(e.K1 == Automorphism::diagonal(S("alpha1"), S("q*alpha1*gamma1"), S("gamma1")));
    CHECK(e.K2 == Automorphism::diagonal(S("alpha1"), S("-q*alpha1*gamma1"), S("gamma1")));
    const auto& f = r.families[1].members.at(0).matrix;
    CHECK(f.F[1] == P("c1*x*z"));
    CHECK(f.K1.beta == S("alpha1*gamma1/q"));
}

TEST_CASE("t!=0 classification") {
    const auto& r = report(TMode::NonZero);
    CHECK(r.total_series == r.certificates.size() + r.nonempty.size());
    REQUIRE(r.nonempty.size() == 1);
    CHECK(r.nonempty[0] == "t!=0 {} | {}");
    std::map<std::string, std::size_t> sizes;
    for (const auto& f : r.families) sizes[f.tag] = f.members.size();
    CHECK(sizes == std::map<std::string, std::size_t>{
                       {"T1_Family1", 4}, {"T1_Family2", 8}, {"T1_ShearE", 1}, {"T1_ShearF", 1}});
    for (const auto& f : r.families) {
        if (f.tag != "T1_Family1") continue;
        for (const auto& s : f.members) {
            CHECK(s.signs[1] == s.signs[0] * s.signs[2]);
            CHECK(lemma31_consistency(s.matrix.K1, s.matrix.K2).consistent);
        }
    }
    SUBCASE("each named series of the a0 / b3 z type is empty") {
        for (const char* name : {"t!=0 {E(x)[1]} | {E(x)[1]} + {E(y)[z]}", "t!=0 {E(z)[1]} | {E(z)[1]} + {E(y)[x]}",
                                 "t!=0 {F(x)[1]} | {F(x)[1]} + {F(y)[z]}", "t!=0 {F(z)[1]} | {F(z)[1]} + {F(y)[x]}"}) {
            INFO(name);
            CHECK(replay_certificate(certificate(r, name)));
        }
    }
}

TEST_CASE("classified structures verify, also specialized") {
    std::mt19937 rng(7);
    for (TMode m : {TMode::Zero, TMode::NonZero})
        for (const auto& s : report(m).structures) {
            INFO(s.family);
            CHECK(verify_module_algebra(s.matrix, 6).verified);
            CHECK(identify_family(s.matrix) == s.family);
            for (int k = 0; k < 20; ++k) {
                auto spec = s.matrix.specialize(random_point(s.matrix, rng));
                CHECK(verify_module_algebra_at(spec, 6, 2).verified);
            }
        }
}

TEST_CASE("empty series have no specialized instances") {
    std::mt19937 rng(11);
    for (TMode m : {TMode::Zero, TMode::NonZero}) {
        const auto& r = report(m);
        for (const auto& s : r.series) {
            if (std::find(r.nonempty.begin(), r.nonempty.end(), s.label()) != r.nonempty.end()) continue;
            INFO(s.label());
            ActionMatrix a;
            auto wv = [](int i) { return Scalar::symbol(weight_sym_var(i)); };
            a.K1 = Automorphism::diagonal(wv(kAlpha1), wv(kBeta1), wv(kGamma1));
            a.K2 = Automorphism::diagonal(wv(kAlpha2), wv(kBeta2), wv(kGamma2));
            if (m == TMode::NonZero) {
                a.K1.t = Scalar::symbol(shear_var(1));
                a.K2.t = Scalar::symbol(shear_var(2));
            }
            std::map<Slot, Scalar> low = s.low;
            if (s.merged.consistent()) {
                auto sub = s.merged.substitution();
                a = a.substitute(sub);
                for (auto& [sl, c] : low) c = c.substitute(sub);
            }
            for (auto& [sl, c] : low) (sl.row == 0 ? a.E : a.F)[sl.col].add_term(sl.m, c);
            for (int k = 0; k < 20; ++k) {
                ActionMatrix spec;
                try {
                    spec = a.specialize(random_point(a, rng));
                } catch (const SpecializationPole&) {
                    continue;
                }
                CHECK_FALSE(verify_module_algebra_at(spec, 4, 2).verified);
            }
        }
    }
}

TEST_CASE("classification is stable in the degree bound and deterministic") {
    std::string d6 = summary(report(TMode::Zero, 6));
    CHECK(summary(report(TMode::Zero, 4)) == d6);
    CHECK(summary(report(TMode::Zero, 8)) == d6);
    CHECK(summary(run_classification(TMode::Zero, 6)) == d6);
    CHECK(summary(run_classification(TMode::NonZero, 6)) == summary(report(TMode::NonZero)));
}

TEST_CASE("classification preconditions") {
    CHECK_THROWS_AS(run_classification(TMode::Zero, 1), PreconditionFailed);
    auto s = build_series(find_case(0, TMode::Zero, "{}"), find_case(1, TMode::Zero, "{}"), 6);
    CHECK_THROWS_AS(certify_or_construct(s, {6, 1}), BranchExplosion);
}

TEST_CASE("shear consistency of commuting K") {
    SUBCASE("proportional shears give the common ratio") {
        Automorphism k1{S("alpha1"), S("beta1"), S("gamma1"), S("7*(beta1-alpha1*gamma1)")};
        Automorphism k2{S("alpha2"), S("beta2"), S("gamma2"), S("7*(beta2-alpha2*gamma2)")};
        auto c = lemma31_consistency(k1, k2);
        CHECK(c.consistent);
        REQUIRE(c.t);
        CHECK(*c.t == Scalar(7));
    }
    SUBCASE("Jordan shape is always consistent") {
        Automorphism k1{S("alpha1"), S("alpha1*gamma1"), S("gamma1"), S("t1")};
        Automorphism k2{S("alpha2"), S("alpha2*gamma2"), S("gamma2"), S("t2")};
        auto c = lemma31_consistency(k1, k2);
        CHECK(c.consistent);
        CHECK_FALSE(c.t);
    }
    SUBCASE("unequal ratios are inconsistent and K1, K2 do not commute") {
        Automorphism k1{Scalar(1), Scalar(2), Scalar(1), Scalar(1)};
        Automorphism k2{Scalar(1), Scalar(3), Scalar(1), Scalar(1)};
        CHECK_FALSE(lemma31_consistency(k1, k2).consistent);
        CHECK_FALSE(compose_automorphisms(k1, k2) == compose_automorphisms(k2, k1));
    }
}

TEST_CASE("printed families") {
    auto z = construct_theorem_families(TMode::Zero, 6);
    CHECK(z.members.size() == 8);
    CHECK(z.excluded.empty());
    auto n = construct_theorem_families(TMode::NonZero, 6);
    std::map<std::string, int> count;
    for (const auto& m : n.members) {
        ++count[m.family];
        CHECK(m.signs[1] == m.signs[0] * m.signs[2]);
    }
    CHECK(count == std::map<std::string, int>{{"T1_Family1", 4}, {"T1_Family2", 4}});
    CHECK(n.excluded.size() == 8);
    SUBCASE("unit parameters give the identity") {
        auto m = z.members[0].matrix.substitute(
            {{Symbols::intern("lambda1"), Scalar(1)}, {Symbols::intern("lambda2"), Scalar(1)},
             {Symbols::intern("lambda3"), Scalar(1)}});
        CHECK(m.K1 == Automorphism::identity());
        CHECK(m.K2 == Automorphism::identity());
    }
}

TEST_CASE("isomorphism invariant") {
    auto fam = construct_theorem_families(TMode::Zero, 6).members[0];
    auto inst = [&](int a, int b, int c) {
        ModuleAlgebraStructure s = fam;
        s.matrix = fam.matrix.substitute({{Symbols::intern("lambda1"), Scalar(a)},
                                          {Symbols::intern("lambda2"), Scalar(b)},
                                          {Symbols::intern("lambda3"), Scalar(c)}});
        return s;
    };
    CHECK_FALSE(isomorphism_invariant(inst(1, 2, 3)) == isomorphism_invariant(inst(2, 2, 3)));
    CHECK(isomorphism_invariant(inst(1, 2, 3)) == isomorphism_invariant(inst(1, 2, 3)));

    SUBCASE("diagonal conjugation fixes a trivial instance") {
        std::mt19937 rng(3);
        auto s = inst(1, 2, 3);
        for (int k = 0; k < 20; ++k) CHECK(conjugate(s.matrix, random_automorphism(rng, true)) == s.matrix);
    }
    SUBCASE("conjugation preserves the invariant of every classified family") {
        std::mt19937 rng(5);
        for (TMode m : {TMode::Zero, TMode::NonZero})
            for (const auto& s : report(m).structures) {
                INFO(s.family);
                ModuleAlgebraStructure a = s;
                a.matrix = s.matrix.specialize(random_point(s.matrix, rng));
                auto inv = isomorphism_invariant(a);
                for (int k = 0; k < 20; ++k) {
                    ModuleAlgebraStructure b = a;
                    b.matrix = conjugate(a.matrix, random_automorphism(rng, m == TMode::Zero));
                    CHECK(verify_module_algebra_at(b.matrix, 3, 2).verified);
                    auto binv = isomorphism_invariant(b);
                    INFO(inv.str(), " vs ", binv.str());
                    if (binv.family != inv.family) {
                        // a shear that undoes y -> y + t xz lands in the t=0 counterpart
                        CHECK(binv.family == (s.family == "T1_Family2" ? "T0_Trivial" : "T0" + s.family.substr(2)));
                        CHECK(binv.eigen == inv.eigen);
                        continue;
                    }
                    CHECK(binv == inv);
                }
            }
    }
    SUBCASE("the conjugate family is conjugate to the t=0 one") {
        for (const auto& s : report(TMode::NonZero).structures) {
            if (s.family != "T1_Family2") continue;
            Automorphism undo{Scalar(1), Scalar(1), Scalar(1), -S("t")};
            auto m = conjugate(s.matrix, undo);
            CHECK(m.K1.is_diagonal());
            CHECK(m.K2.is_diagonal());
            CHECK(identify_family(m) == "T0_Trivial");
        }
    }
    SUBCASE("actions outside the families are rejected") {
        ModuleAlgebraStructure s;
        s.matrix.E[0] = P("x^2");
        CHECK_THROWS_AS(isomorphism_invariant(s), UnclassifiedStructure);
    }
}
