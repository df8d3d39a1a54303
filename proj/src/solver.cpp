#include "internal.hpp"
#include "qaction/errors.hpp"
#include "search.hpp"

#include <algorithm>

namespace qa::detail {

void Budget::spend() {
    if (++used_ > limit_) throw BranchExplosion(series_, limit_);
}

bool surely_nonzero(const Poly& p, const std::set<Var>& maybe_zero) {
    if (p.is_zero()) return false;
    PMono m = p.min_mono();
    for (auto [v, e] : m.e)
        if (maybe_zero.count(v)) return false;
    Poly rest = p.divide(Poly::monomial(m, 1)).value();
    auto vs = rest.vars();
    return vs.empty() || (vs.size() == 1 && *vs.begin() == Symbols::q);
}

Scalar reduce_weights(const Scalar& c, const ConstraintOutcome& lat) {
    if (lat.unit_pivots || !lat.consistent()) return c;
    auto red = [&](const Poly& p) {
        Scalar out(0);
        for (const auto& t : p.terms()) {
            WeightWord w;
            PMono other;
            for (auto [v, e] : t.m.e) {
                int i = -1;
                for (int k = 0; k < kNumWeightSyms; ++k)
                    if (weight_sym_var(k) == v) i = k;
                if (i < 0) other = other * PMono::var(v, e);
                else w.exp[i] += e;
            }
            out += Scalar(Poly::monomial(other, t.c)) * lat.reduce(w).to_scalar();
        }
        return out;
    };
    return red(c.num()) / red(c.den());
}

QPoly reduce_weights(const QPoly& p, const ConstraintOutcome& lat) {
    if (lat.unit_pivots) return p;
    QPoly out;
    for (const auto& [m, c] : p.terms()) out.add_term(m, reduce_weights(c, lat));
    return out;
}

ActionMatrix reduce_weights(const ActionMatrix& m, const ConstraintOutcome& lat) {
    if (lat.unit_pivots) return m;
    ActionMatrix r = m;
    for (Automorphism* k : {&r.K1, &r.K2})
        for (Scalar* c : {&k->alpha, &k->beta, &k->gamma, &k->t}) *c = reduce_weights(*c, lat);
    for (auto* imgs : {&r.E, &r.F})
        for (auto& p : *imgs) p = reduce_weights(p, lat);
    return r;
}

namespace {

Extender delta_extender() {
    return Extender({QPoly(), QPoly(Monomial{1, 0, 1}, 1), QPoly()}, Automorphism::identity(),
                    Extender::Side::Left);
}

QPoly delta_commutator(const ActionMatrix& act, bool is_e, const Monomial& w) {
    Extender D = delta_extender();
    Extender X = is_e ? make_E(act) : make_F(act);
    QPoly wp(w, 1);
    return D.on(X.on(wp)) - X.on(D.on(wp));
}

}  // namespace

QPoly equation_residual(const ActionMatrix& act, const std::string& relation, const Monomial& witness,
                        const std::vector<Scalar>& side) {
    if (relation.rfind("side#", 0) == 0) return QPoly(side.at(std::stoul(relation.substr(5))));
    if (relation == "[d,E]") return delta_commutator(act, true, witness);
    if (relation == "[d,F]") return delta_commutator(act, false, witness);
    return relation_residual(act, relation, witness);
}

namespace {

const Monomial kGens[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

struct Eq {
    std::string relation;
    Monomial witness;
    QPoly residual;
};

struct Watch {
    Scalar value;  // must stay nonzero
};

struct State {
    ActionMatrix act;
    std::vector<Scalar> side;
    std::vector<Scalar> aux;  // expressions assumed to vanish
    std::vector<Var> open;  // unsolved unknowns in problem order
    std::set<Var> nonzero;
    std::vector<Watch> watch;
    std::map<Var, Scalar> solved;
    std::vector<WeightConstraint> weights;
    ConstraintOutcome lattice;
    std::vector<CertStep> steps;

    bool is_open(Var v) const { return std::find(open.begin(), open.end(), v) != open.end(); }
};

std::string assume_text(Var v, bool nonzero) {
    return Symbols::name(v) + (nonzero ? " != 0" : " = 0");
}

class Solver {
public:
    Solver(const SolveProblem& p, Budget& b, SolveResult& out) : p_(p), budget_(b), out_(out) {}

    void run() {
        State s;
        s.weights = p_.weights;
        s.lattice = solve_constraints(s.weights);
        if (!s.lattice.consistent()) throw Error("solver started on an inconsistent lattice");
        auto sub = s.lattice.substitution();
        s.act = reduce_weights(p_.base.substitute(sub), s.lattice);
        for (const auto& c : p_.side_conditions) s.side.push_back(reduce_weights(c.substitute(sub), s.lattice));
        s.open = p_.unknowns;
        explore(std::move(s));
    }

private:
    const SolveProblem& p_;
    Budget& budget_;
    SolveResult& out_;

    enum class Kind { None, Dead, AddConstraint, Handled };

    std::vector<Eq> generator_equations(const State& s) const {
        std::vector<Eq> eqs;
        for (std::size_t k = 0; k < s.aux.size(); ++k)
            eqs.push_back({"aux#" + std::to_string(k), Monomial{}, QPoly(s.aux[k])});
        for (std::size_t k = 0; k < s.side.size(); ++k)
            eqs.push_back({"side#" + std::to_string(k), Monomial{}, QPoly(s.side[k])});
        for (const char* rel : {"EF-FE", "E^2=0", "F^2=0"})
            for (const auto& g : kGens) eqs.push_back({rel, g, relation_residual(s.act, rel, g)});
        for (auto& r : leibniz_residuals(s.act)) eqs.push_back({r.relation, r.witness, r.residual});
        if (p_.commute_with_delta)
            for (bool e : {true, false})
                for (const auto& g : kGens)
                    eqs.push_back({e ? "[d,E]" : "[d,F]", g, delta_commutator(s.act, e, g)});
        return eqs;
    }

    std::vector<Eq> verification_equations(const State& s) const {
        std::vector<Eq> eqs;
        auto rep = verify_module_algebra(s.act, p_.degree_bound);
        for (auto& r : rep.failures) eqs.push_back({r.relation, r.witness, r.residual});
        return eqs;
    }

    void record_dead(State& s, CertStep last) {
        last.kind = CertStep::Kind::Contradiction;
        s.steps.push_back(std::move(last));
        out_.dead.push_back({p_.label, p_.base, p_.weights, p_.side_conditions, std::move(s.steps)});
    }

    // content of N over the nonzero unknowns and nonzero parameters divided out
    Poly normalize(const State& s, const Poly& n) const {
        PMono c = n.min_mono();
        PMono keep;
        for (auto [v, e] : c.e) {
            bool open = s.is_open(v);
            if ((open && s.nonzero.count(v)) || (!open && !p_.maybe_zero.count(v)))
                keep = keep * PMono::var(v, e);
        }
        if (keep.is_one()) return n;
        return n.divide(Poly::monomial(keep, 1)).value();
    }

    std::set<Var> open_vars(const State& s, const Poly& n) const {
        std::set<Var> r;
        for (Var v : n.vars())
            if (s.is_open(v)) r.insert(v);
        return r;
    }

    void apply(State& s, const std::map<Var, Scalar>& sub) {
        s.act = s.act.substitute(sub);
        for (auto& c : s.side) c = c.substitute(sub);
        for (auto& c : s.aux) c = c.substitute(sub);
        for (auto& w : s.watch) w.value = w.value.substitute(sub);
        for (auto& [v, e] : s.solved) e = e.substitute(sub);
        if (s.lattice.unit_pivots) return;
        s.act = reduce_weights(s.act, s.lattice);
        for (auto& c : s.side) c = reduce_weights(c, s.lattice);
        for (auto& c : s.aux) c = reduce_weights(c, s.lattice);
        for (auto& w : s.watch) w.value = reduce_weights(w.value, s.lattice);
        for (auto& [v, e] : s.solved) e = reduce_weights(e, s.lattice);
    }

    void assign(State& s, Var u, const Scalar& value) {
        apply(s, {{u, value}});
        s.solved[u] = value;
        std::erase(s.open, u);
        if (s.nonzero.erase(u)) s.watch.push_back({value});
    }

    // dead-end checks after a substitution; true if the branch was closed
    bool check_alive(State& s) {
        for (std::size_t i = 0; i < s.watch.size(); ++i)
            if (s.watch[i].value.is_zero()) {
                CertStep c;
                c.relation = "nonzero";
                c.text = "an expression assumed nonzero vanishes";
                record_dead(s, c);
                return false;
            }
        for (const auto& g : p_.nonzero_groups) {
            bool all_zero = true;
            for (Var v : g) {
                auto it = s.solved.find(v);
                if (it == s.solved.end() || !it->second.is_zero()) {
                    all_zero = false;
                    break;
                }
            }
            if (all_zero) {
                CertStep c;
                c.relation = "block";
                c.text = "a block assumed nonzero vanishes";
                c.vanishing = g;
                record_dead(s, c);
                return false;
            }
        }
        return true;
    }

    void branch_zero(const State& s, Var v) {
        State c = s;
        CertStep st;
        st.kind = CertStep::Kind::Assume;
        st.unknown = v;
        st.value = Scalar(0);
        st.text = assume_text(v, false);
        c.steps.push_back(st);
        assign(c, v, Scalar(0));
        if (check_alive(c)) explore(std::move(c));
    }

    void assume_nonzero(State& s, Var v) {
        CertStep st;
        st.kind = CertStep::Kind::Assume;
        st.unknown = v;
        st.value = Scalar::symbol(v);
        st.nonzero = true;
        st.text = assume_text(v, true);
        s.steps.push_back(st);
        s.nonzero.insert(v);
    }

    // splits on every factor of the monomial that is not yet known nonzero;
    // afterwards all of them are nonzero in s
    void split_factors(State& s, const PMono& m) {
        for (auto [v, e] : m.e) {
            if (!s.is_open(v) || s.nonzero.count(v)) continue;
            branch_zero(s, v);
            assume_nonzero(s, v);
        }
    }

    // coefficient of u in n, split into unknown-monomial part and the rest
    struct LinearInfo {
        Poly coef;
        PMono unknown_part;
        Poly param_part;
    };

    std::optional<LinearInfo> linear_in(const State& s, const Poly& n, Var u) const {
        if (n.degree_in(u) != 1) return std::nullopt;
        Poly c = n.coeffs_in(u).at(1);
        PMono mc = c.min_mono();
        PMono um;
        for (auto [v, e] : mc.e)
            if (s.is_open(v)) um = um * PMono::var(v, e);
        Poly rest = c.divide(Poly::monomial(um, 1)).value();
        if (!open_vars(s, rest).empty()) return std::nullopt;
        return LinearInfo{c, um, rest};
    }

    void force(State& s, Var u, const LinearInfo& li, const Poly& n, const Eq& eq, const Monomial& at) {
        Poly rest = n - li.coef * Poly::var(u);
        Scalar value = -Scalar(rest, li.coef);
        CertStep st;
        st.kind = CertStep::Kind::Forced;
        st.unknown = u;
        st.value = value;
        st.relation = eq.relation;
        st.witness = eq.witness;
        st.at = at;
        st.text = Symbols::name(u) + " = " + value.str();
        s.steps.push_back(st);
        assign(s, u, value);
    }

    bool add_constraint(State& s, const WeightConstraint& c, const Eq& eq) {
        std::vector<WeightConstraint> ws = s.weights;
        ws.push_back(c);
        ConstraintOutcome out = solve_constraints(ws);
        if (!out.consistent()) {
            CertStep st;
            st.constraint = c;
            st.relation = eq.relation;
            st.witness = eq.witness;
            st.residual = eq.residual;
            st.text = "weight equation " + c.str() + " contradicts the lattice";
            record_dead(s, st);
            return false;
        }
        CertStep st;
        st.kind = CertStep::Kind::Constraint;
        st.constraint = c;
        st.relation = eq.relation;
        st.witness = eq.witness;
        st.text = c.str();
        s.steps.push_back(st);
        s.weights = std::move(ws);
        s.lattice = std::move(out);
        apply(s, s.lattice.substitution());
        return check_alive(s);
    }

    // Acts on the first coefficient that is not already satisfied.
    // Returns None when every coefficient holds.
    Kind act_on(State& s, const std::vector<Eq>& eqs) {
        for (const Eq& eq : eqs)
            for (const auto& [m, coef] : eq.residual.terms()) {
                Scalar rc = reduce_weights(coef, s.lattice);
                if (rc.is_zero()) continue;
                Poly n = normalize(s, rc.num());
                std::set<Var> us = open_vars(s, n);
                if (us.empty()) {
                    if (surely_nonzero(n, p_.maybe_zero)) {
                        CertStep st;
                        st.relation = eq.relation;
                        st.witness = eq.witness;
                        st.residual = eq.residual;
                        st.text = "residual of " + eq.relation + " cannot vanish";
                        record_dead(s, st);
                        return Kind::Dead;
                    }
                    for (auto [v, e] : n.min_mono().e)
                        if (p_.maybe_zero.count(v))
                            throw UnresolvedCondition(p_.label + ": condition " + n.str() +
                                                      " has a factor that may vanish");
                    Vanishing van = analyze_vanishing(n);
                    if (van.kind == Vanishing::Constraint) {
                        auto val = s.lattice.evaluate(van.c.normalized());
                        if (val && val->is_identity()) continue;
                        if (val) {
                            CertStep st;
                            st.constraint = van.c;
                            st.relation = eq.relation;
                            st.witness = eq.witness;
                            st.residual = eq.residual;
                            st.text = "weight equation " + van.c.str() + " contradicts the lattice";
                            record_dead(s, st);
                            return Kind::Dead;
                        }
                        return add_constraint(s, van.c, eq) ? Kind::AddConstraint : Kind::Dead;
                    }
                    if (van.kind == Vanishing::Impossible) {
                        CertStep st;
                        st.relation = eq.relation;
                        st.witness = eq.witness;
                        st.residual = eq.residual;
                        st.text = "residual of " + eq.relation + " cannot vanish";
                        record_dead(s, st);
                        return Kind::Dead;
                    }
                    throw UnresolvedCondition(p_.label + ": cannot decide " + n.str() + " = 0 (" +
                                              eq.relation + ")");
                }
                // unknown content: split on its factors first
                PMono content;
                for (auto [v, e] : n.min_mono().e)
                    if (s.is_open(v)) content = content * PMono::var(v, e);
                if (!content.is_one()) {
                    split_factors(s, content);
                    return Kind::Handled;
                }
                // linear unknown with a nonzero coefficient, latest unknown first
                std::optional<std::pair<Var, LinearInfo>> pending;
                for (auto it = s.open.rbegin(); it != s.open.rend(); ++it) {
                    if (!us.count(*it)) continue;
                    auto li = linear_in(s, n, *it);
                    if (!li || !surely_nonzero(li->param_part, p_.maybe_zero)) continue;
                    bool ready = true;
                    for (auto [v, e] : li->unknown_part.e)
                        if (!s.nonzero.count(v)) ready = false;
                    if (ready) {
                        force(s, *it, *li, n, eq, m);
                        return check_alive(s) ? Kind::Handled : Kind::Dead;
                    }
                    if (!pending) pending.emplace(*it, *li);
                }
                if (pending) {
                    split_factors(s, pending->second.unknown_part);
                    return Kind::Handled;
                }
                // linear unknown whose parameter coefficient is a weight binomial
                for (auto it = s.open.rbegin(); it != s.open.rend(); ++it) {
                    if (!us.count(*it)) continue;
                    auto li = linear_in(s, n, *it);
                    if (!li || !li->unknown_part.is_one()) continue;
                    Vanishing van = analyze_vanishing(li->param_part);
                    if (van.kind != Vanishing::Constraint) continue;
                    State zero = s;
                    if (add_constraint(zero, van.c, eq)) explore(std::move(zero));
                    CertStep st;
                    st.kind = CertStep::Kind::Assume;
                    st.nonzero = true;
                    st.value = Scalar(li->param_part);
                    st.text = li->param_part.str() + " != 0";
                    s.steps.push_back(st);
                    s.watch.push_back({Scalar(li->param_part)});
                    force(s, *it, *li, n, eq, m);
                    return check_alive(s) ? Kind::Handled : Kind::Dead;
                }
                // linear unknown with a polynomial coefficient: split on it vanishing
                for (auto it = s.open.rbegin(); it != s.open.rend(); ++it) {
                    if (!us.count(*it) || n.degree_in(*it) != 1) continue;
                    Poly c = normalize(s, n.coeffs_in(*it).at(1));
                    if (open_vars(s, c).empty()) continue;
                    State zero = s;
                    CertStep z;
                    z.kind = CertStep::Kind::Assume;
                    z.value = Scalar(c);
                    z.text = c.str() + " = 0";
                    zero.steps.push_back(z);
                    zero.aux.push_back(Scalar(c));
                    explore(std::move(zero));
                    CertStep st;
                    st.kind = CertStep::Kind::Assume;
                    st.nonzero = true;
                    st.value = Scalar(c);
                    st.text = c.str() + " != 0";
                    s.steps.push_back(st);
                    s.watch.push_back({Scalar(c)});
                    LinearInfo li{n.coeffs_in(*it).at(1), PMono{}, Poly(1)};
                    force(s, *it, li, n, eq, m);
                    return check_alive(s) ? Kind::Handled : Kind::Dead;
                }
                throw UnresolvedCondition(p_.label + ": nonlinear equation " + n.str() + " (" + eq.relation +
                                          ")");
            }
        return Kind::None;
    }

    void explore(State s) {
        budget_.spend();
        for (;;) {
            Kind k = act_on(s, generator_equations(s));
            if (k == Kind::Dead) return;
            if (k != Kind::None) continue;
            k = act_on(s, verification_equations(s));
            if (k == Kind::Dead) return;
            if (k != Kind::None) continue;
            Survivor sv;
            sv.matrix = s.act;
            sv.weights = s.weights;
            sv.free_unknowns = s.open;
            for (const auto& w : s.watch)
                if (!w.value.is_const()) sv.nonzero.push_back(w.value);
            out_.alive.push_back(std::move(sv));
            return;
        }
    }
};

}  // namespace

SolveResult solve_problem(const SolveProblem& p, Budget& budget) {
    SolveResult out;
    Solver(p, budget, out).run();
    return out;
}

}  // namespace qa::detail
