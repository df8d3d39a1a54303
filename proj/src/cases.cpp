#include "qaction/weights.hpp"

#include "internal.hpp"

#include <algorithm>

namespace qa {

namespace {

const char* const kRowNames[2] = {"E", "F"};
const char* const kGenNames[3] = {"x", "y", "z"};

WeightConstraint contradiction_marker() { return {WeightWord::identity(), WeightWord::scalar(-1, 0)}; }

void add_unique(std::vector<WeightConstraint>& cs, const WeightConstraint& c) {
    if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
}

void add_unique(std::vector<Scalar>& cs, const Scalar& c) {
    for (const auto& x : cs)
        if (x == c || x == -c) return;
    cs.push_back(c);
}

int weight_index(Var v) {
    for (int i = 0; i < kNumWeightSyms; ++i)
        if (weight_sym_var(i) == v) return i;
    return -1;
}

int slot_degree(const Slot& s) { return s.m.degree(); }

}  // namespace

namespace detail {

// Monomial in q and weight symbols as a weight word; nullopt if other symbols occur.
std::optional<WeightWord> word_of_mono(const PMono& m) {
    WeightWord w;
    for (const auto& [v, e] : m.e) {
        if (v == Symbols::q) {
            w.qexp += e;
            continue;
        }
        int i = weight_index(v);
        if (i < 0) return std::nullopt;
        w.exp[i] += e;
    }
    return w;
}

Vanishing analyze_vanishing(const Poly& f0) {
    Poly f = f0.divide(Poly::monomial(f0.min_mono(), 1)).value();
    const auto& ts = f.terms();
    if (ts.size() == 1) {
        if (word_of_mono(ts[0].m)) return {Vanishing::Impossible, {}};
        return {Vanishing::Opaque, {}};
    }
    if (ts.size() != 2) return {Vanishing::Opaque, {}};
    auto w1 = word_of_mono(ts[0].m);
    auto w2 = word_of_mono(ts[1].m);
    if (!w1 || !w2) return {Vanishing::Opaque, {}};
    mpq_class ratio = -ts[1].c / ts[0].c;  // w1/w2 = ratio
    WeightWord w = *w1 * w2->inverse();
    if (ratio == 1 || ratio == -1) return {Vanishing::Constraint, {w, WeightWord::scalar(ratio > 0 ? 1 : -1, 0)}};
    if (w.is_pure()) return {Vanishing::Impossible, {}};
    return {Vanishing::Opaque, {}};
}

}  // namespace detail

using detail::analyze_vanishing;
using detail::Vanishing;
using detail::word_of_mono;

std::string Slot::str() const {
    return std::string(kRowNames[row]) + "(" + kGenNames[col] + ")[" + m.str() + "]";
}

WeightWord slot_target_weight(int row, int col, WhichK which) {
    int base = which == WhichK::K1 ? kAlpha1 : kAlpha2;
    int sign = which == WhichK::K1 ? 1 : -1;
    return WeightWord::scalar(sign, row == 0 ? -1 : 1) * WeightWord::sym(base + col);
}

bool slot_is_eigen(const Slot& s, TMode mode) {
    return mode == TMode::Zero || (s.col != 1 && s.m.b == 0);
}

std::vector<Slot> slot_layout(int degree, TMode mode) {
    std::vector<Slot> out;
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col) {
            if (degree == 0) {
                out.push_back({row, col, Monomial{0, 0, 0}});
                continue;
            }
            for (const Monomial& m : monomials_of_degree(degree)) {
                if (degree == 1 && mode == TMode::Zero) {
                    int g = m.a ? 0 : (m.b ? 1 : 2);
                    if (g == col) continue;
                } else if (degree == 1) {
                    // x, z images stay in span{x, z} minus the generator itself
                    if (col != 1 && (m.b > 0 || (col == 0 ? m.a : m.c) > 0)) continue;
                }
                out.push_back({row, col, m});
            }
        }
    std::sort(out.begin(), out.end(), [](const Slot& a, const Slot& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return b.m < a.m;  // x before y before z
    });
    return out;
}

std::string slot_label(const Slot& s, TMode mode) {
    std::string name(1, static_cast<char>('a' + s.col));
    if (s.m.degree() == 0) {
        name += "0";
    } else {
        int idx = 0;
        bool found = false;
        for (const Slot& o : slot_layout(s.m.degree(), mode)) {
            if (o.row != s.row || o.col != s.col) continue;
            ++idx;
            if (o.m == s.m) {
                found = true;
                break;
            }
        }
        if (found && s.m.degree() == 1)
            name += std::to_string(idx);
        else
            name += "_" + s.m.str();
    }
    if (s.row == 1) name += "p";
    std::erase(name, '*');
    std::erase(name, '^');
    return name;
}

Var slot_var(const Slot& s, TMode mode) { return Symbols::intern(slot_label(s, mode)); }

std::string SeriesCase::label() const {
    auto join = [](const std::vector<Slot>& ss) {
        std::string r = "{";
        for (std::size_t i = 0; i < ss.size(); ++i) r += (i ? ", " : "") + ss[i].str();
        return r + "}";
    };
    std::string r = join(support);
    if (!context.empty()) r = join(context) + " + " + r;
    return r;
}

SeriesCase derive_case_constraints(const SeriesCase& in) {
    SeriesCase c = in;
    c.implied.clear();
    c.coefficient_formulas.clear();
    c.side_conditions.clear();
    c.forced_zero.clear();
    const TMode mode = c.tmode;

    std::vector<Slot> slots = c.context;
    slots.insert(slots.end(), c.support.begin(), c.support.end());
    if (slots.empty()) return c;

    ActionMatrix act;
    auto sym = [](int s) { return Scalar::symbol(weight_sym_var(s)); };
    act.K1 = {sym(kAlpha1), sym(kBeta1), sym(kGamma1), Scalar(0)};
    act.K2 = {sym(kAlpha2), sym(kBeta2), sym(kGamma2), Scalar(0)};
    if (mode == TMode::NonZero) {
        act.K1.t = Scalar::symbol(shear_var(1));
        act.K2.t = Scalar::symbol(shear_var(2));
    }
    std::map<Var, Slot> unknowns;
    int min_deg = c.degree;
    for (const Slot& s : slots) {
        Var v = slot_var(s, mode);
        unknowns[v] = s;
        (s.row == 0 ? act.E : act.F)[s.col].add_term(s.m, Scalar::symbol(v));
        min_deg = std::min(min_deg, slot_degree(s));
        if (slot_is_eigen(s, mode)) {
            for (WhichK k : {WhichK::K1, WhichK::K2})
                add_unique(c.implied, {weight_of_monomial(s.m, k, mode), slot_target_weight(s.row, s.col, k)});
        }
    }

    std::vector<Scalar> eqs;
    for (const Residual& r : leibniz_residuals(act))
        for (int d = min_deg + 1; d <= c.degree + 1; ++d) {
            QPoly part = r.residual.homogeneous_component(d);
            for (const auto& [m, coef] : part.terms()) eqs.push_back(coef);
        }

    // position of each slot: context first, then support
    auto rank = [&](const Slot& s) {
        auto it = std::find(slots.begin(), slots.end(), s);
        return std::make_pair(slot_degree(s), it - slots.begin());
    };

    std::map<Var, Scalar> solved;
    std::set<Slot> killed;
    for (int iter = 0; iter < 16; ++iter) {
        ConstraintOutcome out = solve_constraints(c.implied);
        if (!out.consistent()) break;
        std::map<Var, Scalar> wsub = out.substitution();
        bool changed = false;
        for (const Scalar& eq0 : eqs) {
            Scalar eq = eq0.substitute(solved).substitute(wsub);
            if (eq.is_zero()) continue;
            std::map<Var, Poly> groups;
            Poly rest;
            for (const auto& t : eq.num().terms()) {
                std::optional<Var> u;
                for (const auto& [v, e] : t.m.e)
                    if (unknowns.count(v)) u = v;
                Poly term = Poly::monomial(t.m, t.c);
                if (u)
                    groups[*u] = groups[*u] + term.divide(Poly::var(*u)).value();
                else
                    rest = rest + term;
            }
            if (!rest.is_zero() || groups.empty()) {
                add_unique(c.side_conditions, eq);
                continue;
            }
            if (groups.size() == 1) {
                auto& [u, f] = *groups.begin();
                Vanishing van = analyze_vanishing(f);
                if (van.kind == Vanishing::Impossible) {
                    if (!killed.count(unknowns[u])) {
                        killed.insert(unknowns[u]);
                        add_unique(c.implied, contradiction_marker());
                        changed = true;
                    }
                } else if (van.kind == Vanishing::Constraint) {
                    std::size_t before = c.implied.size();
                    add_unique(c.implied, van.c);
                    changed = changed || c.implied.size() != before;
                } else {
                    add_unique(c.side_conditions, Scalar(f));
                }
                continue;
            }
            Var target = groups.begin()->first;
            for (const auto& [u, f] : groups)
                if (rank(unknowns[u]) > rank(unknowns[target])) target = u;
            Poly others;
            for (const auto& [u, f] : groups)
                if (u != target) others = others + f * Poly::var(u);
            Scalar formula = Scalar(-others, groups[target]);
            solved[target] = formula;
            c.coefficient_formulas[unknowns[target]] = formula;
            changed = true;
        }
        if (!changed) break;
    }
    c.forced_zero.assign(killed.begin(), killed.end());
    ConstraintOutcome fin = solve_constraints(c.implied);
    if (fin.consistent()) {
        std::map<Var, Scalar> wsub = fin.substitution();
        for (auto& [s, f] : c.coefficient_formulas) f = f.substitute(wsub);
        std::vector<Scalar> side;
        for (const Scalar& e : c.side_conditions) {
            Scalar r = e.substitute(solved).substitute(wsub);
            if (!r.is_zero()) add_unique(side, r);
        }
        c.side_conditions = side;
    }
    return c;
}

namespace {

bool case_consistent(const SeriesCase& c) {
    return c.forced_zero.empty() && solve_constraints(c.implied).consistent();
}

SeriesCase make_case(int degree, TMode mode, std::vector<Slot> ctx, std::vector<Slot> support) {
    SeriesCase c;
    c.degree = degree;
    c.tmode = mode;
    c.context = std::move(ctx);
    c.support = std::move(support);
    return derive_case_constraints(c);
}

// Largest support compatible with one nonzero degree-0 slot, with the
// coefficients the projected equations then determine.
std::optional<SeriesCase> conditional_case(const Slot& ctx, TMode mode) {
    std::vector<Slot> support;
    for (const Slot& s : slot_layout(1, mode))
        if (case_consistent(make_case(1, mode, {ctx}, {s}))) support.push_back(s);
    while (true) {
        SeriesCase c = make_case(1, mode, {ctx}, support);
        if (c.forced_zero.empty()) {
            if (!solve_constraints(c.implied).consistent() || c.coefficient_formulas.empty()) return std::nullopt;
            return c;
        }
        std::erase_if(support, [&](const Slot& s) {
            return std::find(c.forced_zero.begin(), c.forced_zero.end(), s) != c.forced_zero.end();
        });
    }
}

}  // namespace

std::vector<SeriesCase> enumerate_cases(int degree, TMode mode) {
    std::vector<SeriesCase> out;
    std::vector<Slot> layout = slot_layout(degree, mode);
    if (degree == 0) {
        // per column: none, E, F, and for a non-eigen column both
        std::vector<std::vector<std::vector<Slot>>> choices(3);
        for (int col = 0; col < 3; ++col) {
            Slot e{0, col, Monomial{0, 0, 0}}, f{1, col, Monomial{0, 0, 0}};
            choices[col] = {{}, {e}, {f}};
            if (!slot_is_eigen(e, mode)) choices[col].push_back({e, f});
        }
        for (const auto& cx : choices[0])
            for (const auto& cy : choices[1])
                for (const auto& cz : choices[2]) {
                    std::vector<Slot> s = cx;
                    s.insert(s.end(), cy.begin(), cy.end());
                    s.insert(s.end(), cz.begin(), cz.end());
                    std::sort(s.begin(), s.end());
                    SeriesCase c = make_case(0, mode, {}, s);
                    if (case_consistent(c)) out.push_back(std::move(c));
                }
    } else {
        const std::size_t n = layout.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            std::vector<Slot> s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1) s.push_back(layout[i]);
            SeriesCase c = make_case(degree, mode, {}, s);
            if (case_consistent(c)) out.push_back(std::move(c));
        }
    }
    std::sort(out.begin(), out.end(), [](const SeriesCase& a, const SeriesCase& b) {
        if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
        return a.support < b.support;
    });
    if (degree == 1 && mode == TMode::NonZero) {
        for (const Slot& ctx : slot_layout(0, mode)) {
            if (!slot_is_eigen(ctx, mode)) continue;
            if (!case_consistent(make_case(0, mode, {}, {ctx}))) continue;
            if (auto c = conditional_case(ctx, mode)) out.push_back(std::move(*c));
        }
    }
    return out;
}

}  // namespace qa
