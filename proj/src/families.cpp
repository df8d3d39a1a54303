#include "qaction/classify.hpp"
#include "qaction/errors.hpp"

#include <algorithm>
#include <set>

namespace qa {

ShearConsistency lemma31_consistency(const Automorphism& K1, const Automorphism& K2) {
    Scalar d1 = K1.beta - K1.alpha * K1.gamma;
    Scalar d2 = K2.beta - K2.alpha * K2.gamma;
    ShearConsistency r;
    if (!(K1.t * d2 - K2.t * d1).is_zero()) return r;
    r.consistent = true;
    if (!d1.is_zero()) r.t = K1.t / d1;
    else if (!d2.is_zero()) r.t = K2.t / d2;
    return r;
}

namespace {

std::string signs_str(const std::array<int, 3>& s) {
    std::string r = "(";
    for (int i = 0; i < 3; ++i) r += std::string(i ? "," : "") + (s[i] > 0 ? "+" : "-");
    return r + ")";
}

// E(y) = c xz (or F(y) = c xz) with every other image zero
bool single_shear(const std::array<QPoly, 3>& img, const std::array<QPoly, 3>& other) {
    for (const auto& p : other)
        if (!p.is_zero()) return false;
    if (!img[0].is_zero() || !img[2].is_zero()) return false;
    const auto& ts = img[1].terms();
    return ts.size() == 1 && ts.begin()->first == Monomial{1, 0, 1};
}

bool images_zero(const ActionMatrix& m) {
    for (const auto* imgs : {&m.E, &m.F})
        for (const auto& p : *imgs)
            if (!p.is_zero()) return false;
    return true;
}

}  // namespace

std::string identify_family(const ActionMatrix& m) {
    bool diag = m.K1.t.is_zero() && m.K2.t.is_zero();
    std::string pre = diag ? "T0_" : "T1_";
    if (images_zero(m)) {
        if (diag) return "T0_Trivial";
        bool jordan = (m.K1.beta - m.K1.alpha * m.K1.gamma).is_zero() &&
                      (m.K2.beta - m.K2.alpha * m.K2.gamma).is_zero();
        return jordan ? "T1_Family1" : "T1_Family2";
    }
    if (single_shear(m.E, m.F)) return pre + "ShearE";
    if (single_shear(m.F, m.E)) return pre + "ShearF";
    throw UnclassifiedStructure();
}

IsoInvariant isomorphism_invariant(const ModuleAlgebraStructure& s) {
    const ActionMatrix& m = s.matrix;
    IsoInvariant inv;
    inv.family = identify_family(m);
    inv.eigen = {m.K1.alpha, m.K1.beta, m.K1.gamma, m.K2.alpha, m.K2.beta, m.K2.gamma};
    if (!m.K1.t.is_zero()) inv.shear_ratio = m.K2.t / m.K1.t;
    else if (!m.K2.t.is_zero()) inv.shear_ratio = Scalar(0);
    return inv;
}

std::string IsoInvariant::str() const {
    std::string r = family + " K1=(" + eigen[0].str() + ", " + eigen[1].str() + ", " + eigen[2].str() +
                    ") K2=(" + eigen[3].str() + ", " + eigen[4].str() + ", " + eigen[5].str() + ")";
    if (shear_ratio) r += " t1:t2=1:" + shear_ratio->str();
    return r;
}

FamilyConstruction construct_theorem_families(TMode tmode, int degree_bound) {
    FamilyConstruction out;
    struct Shape {
        std::string tag;
        std::vector<std::string> params;
        Scalar a, b, c, t;
        std::vector<std::string> conditions;
    };
    std::vector<Shape> shapes;
    auto sym = [](const char* n) { return Scalar::symbol(n); };
    if (tmode == TMode::Zero) {
        shapes.push_back({"T0_Trivial", {"lambda1", "lambda2", "lambda3"}, sym("lambda1"), sym("lambda2"),
                          sym("lambda3"), Scalar(0), {}});
    } else {
        Scalar l = sym("lambda"), mu = sym("mu");
        shapes.push_back({"T1_Family1", {"lambda", "mu", "t"}, l, l * mu, mu, sym("t"), {}});
        Scalar sg = sym("sigma");
        shapes.push_back(
            {"T1_Family2", {"lambda", "sigma", "mu", "tt"}, l, sg, mu, sym("tt"), {"lambda*mu - sigma != 0"}});
    }
    for (const auto& sh : shapes)
        for (int b = 0; b < 8; ++b) {
            std::array<int, 3> s{b & 4 ? -1 : 1, b & 2 ? -1 : 1, b & 1 ? -1 : 1};
            ModuleAlgebraStructure st;
            st.family = sh.tag;
            st.series = "printed";
            st.params = sh.params;
            st.signs = s;
            st.conditions = sh.conditions;
            st.matrix.K1 = {sh.a, sh.b, sh.c, sh.t};
            st.matrix.K2 = {sh.a * Scalar(s[0]), sh.b * Scalar(s[1]), sh.c * Scalar(s[2]), sh.t * Scalar(s[1])};
            if (verify_module_algebra(st.matrix, degree_bound).verified)
                out.members.push_back(std::move(st));
            else
                out.excluded.push_back(sh.tag + " signs " + signs_str(s));
        }
    return out;
}

}  // namespace qa

namespace qa {

ClassificationReport run_classification(TMode tmode, int degree_bound, const ClassifyOptions& opt) {
    if (degree_bound < 2) throw PreconditionFailed("degree bound must be at least 2");
    ClassificationReport rep;
    rep.tmode = tmode;
    rep.degree_bound = degree_bound;
    ClassifyOptions o = opt;
    o.degree_bound = degree_bound;
    for (const auto& c0 : enumerate_cases(0, tmode))
        for (const auto& c1 : enumerate_cases(1, tmode)) {
            SeriesCandidate s = build_series(c0, c1, degree_bound);
            SeriesOutcome out = certify_or_construct(s, o);
            if (out.certificate) {
                rep.certificates.push_back(std::move(*out.certificate));
            } else {
                rep.nonempty.push_back(s.label());
                for (auto& st : out.structures) rep.structures.push_back(std::move(st));
            }
            rep.series.push_back(std::move(s));
        }
    rep.total_series = rep.series.size();
    rep.printed = construct_theorem_families(tmode, degree_bound);
    std::set<std::string> printed_tags;
    for (const auto& m : rep.printed.members) printed_tags.insert(m.family);
    for (const auto& st : rep.structures) {
        auto it = std::find_if(rep.families.begin(), rep.families.end(),
                               [&](const FamilySummary& f) { return f.tag == st.family; });
        if (it == rep.families.end()) {
            rep.families.push_back({st.family, printed_tags.count(st.family) > 0, {}, {}, {}});
            it = rep.families.end() - 1;
        }
        for (const auto& p : st.params)
            if (std::find(it->params.begin(), it->params.end(), p) == it->params.end()) it->params.push_back(p);
        if (std::find(it->signs.begin(), it->signs.end(), st.signs) == it->signs.end()) it->signs.push_back(st.signs);
        it->members.push_back(st);
    }
    return rep;
}

}  // namespace qa
