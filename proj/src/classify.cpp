#include "qaction/classify.hpp"

#include "internal.hpp"
#include "qaction/errors.hpp"
#include "search.hpp"

#include <algorithm>
#include <cstdlib>

namespace qa {

namespace {

const char* const kGenName[3] = {"x", "y", "z"};

bool is_marker(const WeightConstraint& c) {
    WeightWord n = c.normalized();
    return n.is_pure() && n.qexp == 0 && n.sign == -1;
}

void add_unique(std::vector<WeightConstraint>& cs, const WeightConstraint& c) {
    if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
}

Scalar wsym(int s) { return Scalar::symbol(weight_sym_var(s)); }

Automorphism diagonal_k(int i) {
    int b = i == 0 ? kAlpha1 : kAlpha2;
    return Automorphism::diagonal(wsym(b), wsym(b + 1), wsym(b + 2));
}

ActionMatrix low_matrix(const Automorphism& K1, const Automorphism& K2, const std::map<Slot, Scalar>& low) {
    ActionMatrix a;
    a.K1 = K1;
    a.K2 = K2;
    for (auto& [s, c] : low) (s.row == 0 ? a.E : a.F)[s.col].add_term(s.m, c);
    return a;
}

Scalar shear_defect(const Automorphism& k) { return k.beta - k.alpha * k.gamma; }

// K_i with beta_i = alpha_i gamma_i and shear s_i alpha_i gamma_i
Automorphism jordan_k(int i) {
    int b = i == 0 ? kAlpha1 : kAlpha2;
    Scalar ag = wsym(b) * wsym(b + 2);
    return {wsym(b), ag, wsym(b + 2), Scalar::symbol(Symbols::intern(i == 0 ? "s1" : "s2")) * ag};
}

// degree <= 1 part of y -> y - t xz conjugating the low action
std::map<Slot, Scalar> conjugate_low(const std::map<Slot, Scalar>& low, const Automorphism& K1,
                                     const Automorphism& K2, const Scalar& t) {
    ActionMatrix a = low_matrix(K1, K2, low);
    Automorphism phi{Scalar(1), Scalar(1), Scalar(1), t};
    Automorphism phinv = invert_automorphism(phi);
    std::map<Slot, Scalar> out;
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col) {
            Monomial g{col == 0 ? 1 : 0, col == 1 ? 1 : 0, col == 2 ? 1 : 0};
            QPoly in = apply_automorphism(phi, g);
            QPoly img = apply_automorphism(phinv, row == 0 ? extend_E(a, in) : extend_F(a, in));
            for (const auto& [m, c] : img.terms())
                if (m.degree() <= 1 && !c.is_zero()) out[Slot{row, col, m}] = c;
        }
    return out;
}

// inverse of conjugate_low on a full structure
ActionMatrix conjugate_back(const ActionMatrix& d, const Scalar& t) {
    Automorphism phi{Scalar(1), Scalar(1), Scalar(1), t};
    Automorphism phinv = invert_automorphism(phi);
    ActionMatrix out;
    for (const Automorphism* k : {&d.K1, &d.K2}) {
        Automorphism c = *k;
        c.t = shear_defect(*k) * t;
        (k == &d.K1 ? out.K1 : out.K2) = c;
    }
    for (int col = 0; col < 3; ++col) {
        Monomial g{col == 0 ? 1 : 0, col == 1 ? 1 : 0, col == 2 ? 1 : 0};
        QPoly in = apply_automorphism(phinv, g);
        out.E[col] = apply_automorphism(phi, extend_E(d, in));
        out.F[col] = apply_automorphism(phi, extend_F(d, in));
    }
    return out;
}

}  // namespace

std::size_t default_branch_limit() {
    if (const char* e = std::getenv("QACTION_MAX_BRANCHES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end != e && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 65536;
}

std::string SeriesCandidate::label() const {
    return (tmode == TMode::Zero ? "t=0 " : "t!=0 ") + degree0.label() + " | " + degree1.label();
}

SeriesCandidate build_series(const SeriesCase& c0, const SeriesCase& c1, int degree_bound) {
    SeriesCandidate s;
    s.degree0 = c0;
    s.degree1 = c1;
    s.tmode = c0.tmode;
    const TMode mode = s.tmode;
    if (!c1.context.empty() && c1.context != c0.support) {
        s.dead = "degree-1 case assumes " + c1.context.front().str() + " nonzero, the degree-0 case does not";
        return s;
    }
    SeriesCase d1 = c1;
    d1.context = c0.support;
    d1 = derive_case_constraints(d1);
    for (const auto& c : c0.implied)
        if (!is_marker(c)) add_unique(s.constraints, c);
    for (const auto& c : d1.implied)
        if (!is_marker(c)) add_unique(s.constraints, c);
    s.merged = solve_constraints(s.constraints);
    if (!s.merged.consistent()) {
        s.dead = "weight equations of the two cases are inconsistent";
        s.dead_constraints = s.constraints;
    }
    for (const Slot& sl : c0.support) s.low[sl] = Scalar::symbol(slot_var(sl, mode));
    for (const Slot& sl : d1.support) {
        auto it = d1.coefficient_formulas.find(sl);
        s.low[sl] = it != d1.coefficient_formulas.end() ? it->second : Scalar::symbol(slot_var(sl, mode));
    }
    s.side_conditions = d1.side_conditions;
    if (s.merged.consistent())
        for (int row = 0; row < 2; ++row)
            for (int col = 0; col < 3; ++col) {
                // low slots are fixed by the two cases
                std::vector<Monomial> all =
                    mode == TMode::NonZero && col == 1
                        ? monomials_up_to(degree_bound)
                        : admissible_support(slot_target_weight(row, col, WhichK::K1),
                                             slot_target_weight(row, col, WhichK::K2), s.constraints,
                                             degree_bound, mode);
                for (const auto& m : all)
                    if (m.degree() >= 2) s.supports[row * 3 + col].push_back(m);
            }
    return s;
}

namespace {

EmptinessCertificate dead_pairing(const SeriesCandidate& s) {
    EmptinessCertificate cert;
    cert.series = s.label();
    cert.tmode = s.tmode;
    BranchRecord r;
    r.label = s.label();
    r.base = low_matrix(diagonal_k(0), diagonal_k(1), {});
    for (const Slot& sl : s.degree0.support)
        (sl.row == 0 ? r.base.E : r.base.F)[sl.col].add_term(sl.m, Scalar::symbol(slot_var(sl, s.tmode)));
    CertStep st;
    st.kind = CertStep::Kind::Contradiction;
    st.text = *s.dead;
    if (!s.dead_constraints.empty()) {
        r.weights = s.dead_constraints;
        st.constraint = WeightConstraint{*s.merged.witness, WeightWord::identity()};
    } else {
        const Slot& c = s.degree1.context.front();
        st.relation = "context";
        st.witness = c.m;
        st.at = Monomial{c.row, c.col, 0};
    }
    r.steps.push_back(st);
    cert.branches.push_back(std::move(r));
    return cert;
}

std::array<int, 3> sign_pattern(const ActionMatrix& m) {
    std::array<int, 3> s{1, 1, 1};
    const Scalar* k1[3] = {&m.K1.alpha, &m.K1.beta, &m.K1.gamma};
    const Scalar* k2[3] = {&m.K2.alpha, &m.K2.beta, &m.K2.gamma};
    for (int i = 0; i < 3; ++i) {
        Scalar r = *k2[i] / *k1[i];
        if (r == Scalar(-1)) s[i] = -1;
        else if (r != Scalar(1)) s[i] = 0;
    }
    return s;
}

std::string image_pattern(const ActionMatrix& m) {
    std::string r;
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col) {
            const QPoly& p = (row == 0 ? m.E : m.F)[col];
            if (p.is_zero()) continue;
            if (!r.empty()) r += ",";
            r += std::string(row == 0 ? "E(" : "F(") + kGenName[col] + ")[";
            bool first = true;
            for (auto& [mono, c] : p.terms()) {
                r += (first ? "" : "+") + mono.str();
                first = false;
            }
            r += "]";
        }
    return r;
}

std::vector<std::string> free_symbols(const ActionMatrix& m) {
    std::set<Var> vs;
    auto add = [&](const Scalar& c) {
        for (Var v : c.vars())
            if (v != Symbols::q) vs.insert(v);
    };
    for (const Automorphism* k : {&m.K1, &m.K2})
        for (const Scalar* c : {&k->alpha, &k->beta, &k->gamma, &k->t}) add(*c);
    for (const auto* imgs : {&m.E, &m.F})
        for (const auto& p : *imgs)
            for (auto& [mono, c] : p.terms()) add(c);
    std::vector<std::string> out;
    for (Var v : vs) out.push_back(Symbols::name(v));
    return out;
}

// free solution coefficients renamed c1, c2, ... in order of appearance
std::map<Var, Scalar> canonical_names(const detail::Survivor& sv) {
    std::set<Var> free(sv.free_unknowns.begin(), sv.free_unknowns.end());
    std::map<Var, Scalar> out;
    for (const auto* imgs : {&sv.matrix.E, &sv.matrix.F})
        for (const auto& p : *imgs)
            for (auto& [mono, c] : p.terms())
                for (Var v : c.vars())
                    if (free.count(v) && !out.count(v))
                        out[v] = Scalar::symbol(Symbols::intern("c" + std::to_string(out.size() + 1)));
    return out;
}

ModuleAlgebraStructure make_structure(const std::string& series, const detail::Survivor& sv) {
    ModuleAlgebraStructure st;
    st.series = series;
    auto names = canonical_names(sv);
    st.matrix = sv.matrix.substitute(names);
    st.params = free_symbols(st.matrix);
    st.signs = sign_pattern(sv.matrix);
    // a lone free coefficient spans a chosen block, which is nonzero
    if (names.size() == 1) st.conditions.push_back(names.begin()->second.str() + " != 0");
    for (const auto& c : sv.nonzero) st.conditions.push_back(c.substitute(names).str() + " != 0");
    try {
        st.family = identify_family(sv.matrix);
    } catch (const UnclassifiedStructure&) {
        st.family = std::string(sv.matrix.K1.t.is_zero() && sv.matrix.K2.t.is_zero() ? "T0" : "T1") +
                    "_Other:" + image_pattern(sv.matrix);
    }
    return st;
}

}  // namespace

SeriesOutcome certify_or_construct(const SeriesCandidate& s, const ClassifyOptions& opt) {
    SeriesOutcome out;
    if (s.dead) {
        out.certificate = dead_pairing(s);
        return out;
    }
    detail::Budget budget(s.label(), opt.max_branches ? opt.max_branches : default_branch_limit());
    std::vector<BranchRecord> dead;
    std::vector<std::string> notes;
    if (s.tmode == TMode::Zero) {
        detail::EngineInput in;
        in.label = s.label();
        in.weights = s.constraints;
        in.K1 = diagonal_k(0);
        in.K2 = diagonal_k(1);
        in.low = s.low;
        in.side_conditions = s.side_conditions;
        in.degree_bound = opt.degree_bound;
        auto eo = detail::run_engine(in, budget);
        dead = std::move(eo.dead);
        notes = std::move(eo.notes);
        for (const auto& a : eo.alive) out.structures.push_back(make_structure(s.label(), a));
    } else {
        const Var t1 = shear_var(1), t2 = shear_var(2);
        auto absorb = [&](detail::EngineOutput& eo) {
            for (auto& d : eo.dead) dead.push_back(std::move(d));
            for (auto& n : eo.notes) notes.push_back(std::move(n));
        };
        // shears proportional to the eigenvalues: both K_i act on span{y, xz} as a Jordan block
        {
            detail::EngineInput in;
            in.label = s.label() + " jordan";
            in.jordan = true;
            in.weights = s.constraints;
            for (int i = 0; i < 2; ++i) {
                int b = i == 0 ? kAlpha1 : kAlpha2;
                in.weights.push_back({WeightWord::sym(b + 1), WeightWord::sym(b) * WeightWord::sym(b + 2)});
            }
            in.K1 = jordan_k(0);
            in.K2 = jordan_k(1);
            std::map<Var, Scalar> sub{{t1, in.K1.t}, {t2, in.K2.t}};
            for (auto& [sl, c] : s.low) in.low[sl] = c.substitute(sub);
            for (auto& c : s.side_conditions) in.side_conditions.push_back(c.substitute(sub));
            in.degree_bound = opt.degree_bound;
            auto eo = detail::run_engine(in, budget);
            absorb(eo);
            for (const auto& a : eo.alive) {
                auto st = make_structure(s.label(), a);
                // the branch with equal shears needs them nonzero, the other has s != 0
                bool split = std::find(st.params.begin(), st.params.end(), "s") != st.params.end();
                st.conditions.push_back(split ? "s != 0" : "s1 != 0");
                out.structures.push_back(std::move(st));
            }
        }
        // otherwise t_i = (beta_i - alpha_i gamma_i) t and y -> y + t xz diagonalizes both K_i
        {
            Scalar t = Scalar::symbol(Symbols::intern("t"));
            Automorphism D1 = diagonal_k(0), D2 = diagonal_k(1);
            Automorphism K1 = D1, K2 = D2;
            K1.t = shear_defect(D1) * t;
            K2.t = shear_defect(D2) * t;
            std::map<Var, Scalar> sub{{t1, K1.t}, {t2, K2.t}};
            std::map<Slot, Scalar> low;
            for (auto& [sl, c] : s.low) low[sl] = c.substitute(sub);
            detail::EngineInput in;
            in.label = s.label() + " conjugate";
            in.weights = s.constraints;
            in.K1 = D1;
            in.K2 = D2;
            in.low = conjugate_low(low, K1, K2, t);
            for (auto& c : s.side_conditions) in.side_conditions.push_back(c.substitute(sub));
            in.degree_bound = opt.degree_bound;
            auto eo = detail::run_engine(in, budget);
            absorb(eo);
            for (const auto& a : eo.alive) {
                Scalar d1 = shear_defect(a.matrix.K1), d2 = shear_defect(a.matrix.K2);
                if (d1.is_zero() && d2.is_zero()) {
                    notes.push_back(s.label() + " conjugate: a solution with diagonal K1, K2 belongs to t=0");
                    continue;
                }
                detail::Survivor b = a;
                b.matrix = conjugate_back(a.matrix, t);
                auto st = make_structure(s.label(), b);
                st.conditions.push_back("t != 0");
                auto sure = [](const Scalar& d) { return !d.is_zero() && detail::surely_nonzero(d.num(), {}); };
                if (!sure(d1) && !sure(d2)) {
                    if (d1 == d2 || d2.is_zero()) st.conditions.push_back(d1.str() + " != 0");
                    else if (d1.is_zero()) st.conditions.push_back(d2.str() + " != 0");
                    else st.conditions.push_back(d1.str() + ", " + d2.str() + " not both zero");
                }
                out.structures.push_back(std::move(st));
            }
        }
    }
    if (out.structures.empty()) {
        EmptinessCertificate c;
        c.series = s.label();
        c.tmode = s.tmode;
        c.branches = std::move(dead);
        c.notes = std::move(notes);
        out.certificate = std::move(c);
    }
    return out;
}

namespace {

bool replay_branch(const BranchRecord& r) {
    std::vector<WeightConstraint> ws = r.weights;
    ConstraintOutcome lat = solve_constraints(ws);
    if (!lat.consistent()) {
        if (r.steps.size() != 1 || r.steps[0].kind != CertStep::Kind::Contradiction || !r.steps[0].constraint)
            return false;
        return r.steps[0].constraint->normalized() == *lat.witness;
    }
    auto sub = lat.substitution();
    ActionMatrix act = detail::reduce_weights(r.base.substitute(sub), lat);
    std::vector<Scalar> side;
    for (const auto& c : r.side_conditions) side.push_back(detail::reduce_weights(c.substitute(sub), lat));
    std::map<Var, Scalar> solved;
    std::vector<Scalar> watched, aux;
    auto apply = [&](const std::map<Var, Scalar>& m) {
        act = act.substitute(m);
        for (auto& c : side) c = c.substitute(m);
        for (auto& c : aux) c = c.substitute(m);
        for (auto& c : watched) c = c.substitute(m);
        for (auto& [v, e] : solved) e = e.substitute(m);
        if (lat.unit_pivots) return;
        act = detail::reduce_weights(act, lat);
        for (auto& c : side) c = detail::reduce_weights(c, lat);
        for (auto& c : aux) c = detail::reduce_weights(c, lat);
        for (auto& c : watched) c = detail::reduce_weights(c, lat);
        for (auto& [v, e] : solved) e = detail::reduce_weights(e, lat);
    };
    auto residual = [&](const std::string& rel, const Monomial& w) {
        if (rel.rfind("aux#", 0) == 0) return QPoly(aux.at(std::stoul(rel.substr(4))));
        return detail::equation_residual(act, rel, w, side);
    };
    for (const CertStep& st : r.steps) {
        switch (st.kind) {
        case CertStep::Kind::Note:
            break;
        case CertStep::Kind::Assume:
            if (st.nonzero) {
                watched.push_back(st.value);
            } else if (!st.unknown) {
                aux.push_back(st.value);
            } else {
                if (!st.unknown) return false;
                apply({{*st.unknown, Scalar(0)}});
                solved[*st.unknown] = Scalar(0);
            }
            break;
        case CertStep::Kind::Forced: {
            if (!st.unknown) return false;
            QPoly res = residual(st.relation, st.witness);
            Scalar c = res.substitute({{*st.unknown, st.value}}).coeff(st.at);
            if (!detail::reduce_weights(c, lat).is_zero()) return false;
            apply({{*st.unknown, st.value}});
            solved[*st.unknown] = st.value;
            break;
        }
        case CertStep::Kind::Constraint: {
            if (!st.constraint) return false;
            ws.push_back(*st.constraint);
            lat = solve_constraints(ws);
            if (!lat.consistent()) return false;
            apply(lat.substitution());
            break;
        }
        case CertStep::Kind::Contradiction: {
            if (st.constraint) {
                auto w = ws;
                w.push_back(*st.constraint);
                return !solve_constraints(w).consistent();
            }
            if (st.relation == "nonzero") {
                return std::any_of(watched.begin(), watched.end(), [](const Scalar& c) { return c.is_zero(); });
            }
            if (st.relation == "block") {
                for (Var v : st.vanishing) {
                    auto it = solved.find(v);
                    if (it == solved.end() || !it->second.is_zero()) return false;
                }
                return !st.vanishing.empty();
            }
            if (st.relation == "context") {
                const QPoly& p = (st.at.a == 0 ? act.E : act.F)[st.at.b];
                return p.coeff(st.witness).is_zero();
            }
            QPoly res = residual(st.relation, st.witness);
            return !res.is_zero() && res == st.residual;
        }
        }
    }
    return false;
}

}  // namespace

bool replay_certificate(const EmptinessCertificate& c) {
    if (c.branches.empty()) return false;
    return std::all_of(c.branches.begin(), c.branches.end(), replay_branch);
}

}  // namespace qa
