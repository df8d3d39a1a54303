#include "qaction/errors.hpp"
#include "search.hpp"

#include <algorithm>
#include <functional>

namespace qa::detail {

namespace {

using Grade = std::array<int, 3>;

constexpr std::size_t kFullSearchBlocks = 4;
// problems with at most this many high slots keep one unknown per slot
constexpr std::size_t kRawSlotLimit = 3;

const char* const kRow[2] = {"E", "F"};
const Monomial kGens[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

// Z^3 grading by exponents; the Jordan grading is Z^2 with y of degree (1, 1)
Grade grade_of(const Monomial& m, bool jordan) {
    if (jordan) return {m.a + m.b, m.c + m.b, 0};
    return {m.a, m.b, m.c};
}

Grade shift_of(const Slot& s, bool jordan) {
    Grade g = grade_of(s.m, jordan), h = grade_of(kGens[s.col], jordan);
    return {g[0] - h[0], g[1] - h[1], g[2] - h[2]};
}

// total degree first, then lexicographic: a group order on the shifts
struct GradeLess {
    bool operator()(const Grade& a, const Grade& b) const {
        int sa = a[0] + a[1] + a[2], sb = b[0] + b[1] + b[2];
        if (sa != sb) return sa < sb;
        return a < b;
    }
};

std::string grade_str(const Grade& v, bool jordan) {
    std::string r = "(" + std::to_string(v[0]) + "," + std::to_string(v[1]);
    if (!jordan) r += "," + std::to_string(v[2]);
    return r + ")";
}

WeightWord block_weight(const Grade& v, int k, bool jordan) {
    int base = k == 0 ? kAlpha1 : kAlpha2;
    if (jordan) return WeightWord::sym(base, v[0]) * WeightWord::sym(base + 2, v[1]);
    return WeightWord::sym(base, v[0]) * WeightWord::sym(base + 1, v[1]) * WeightWord::sym(base + 2, v[2]);
}

std::vector<WeightConstraint> block_constraints(int row, const Grade& v, bool jordan) {
    int qe = row == 0 ? -1 : 1;
    return {{block_weight(v, 0, jordan), WeightWord::scalar(1, qe)},
            {block_weight(v, 1, jordan), WeightWord::scalar(-1, qe)}};
}

Var unknown_var(const Slot& s) {
    std::string n = std::string(s.row == 0 ? "e" : "f") + "xyz"[s.col] + "_" + std::to_string(s.m.a) +
                    std::to_string(s.m.b) + std::to_string(s.m.c);
    return Symbols::intern(n);
}

// coordinate of a block solution along its k-th kernel vector
Var coordinate_var(int row, const Grade& v, bool jordan, std::size_t k, std::size_t dim) {
    std::string n = row == 0 ? "e" : "f";
    for (int i = 0; i < (jordan ? 2 : 3); ++i) n += "_" + (v[i] < 0 ? "m" + std::to_string(-v[i]) : std::to_string(v[i]));
    if (dim > 1) n += "_" + std::to_string(k);
    return Symbols::intern(n);
}

struct Block {
    int row = 0;
    Grade v{};
    std::vector<Slot> high;
    std::vector<Slot> low;
    std::vector<WeightConstraint> cons;
    std::vector<std::vector<Scalar>> kernel;  // Leibniz solutions on the high slots
    bool psn = true;  // possibly nilpotent on its own
    std::string name(bool jordan) const { return std::string(kRow[row]) + grade_str(v, jordan); }
};

void add_image(ActionMatrix& act, const Slot& s, const Scalar& c) {
    (s.row == 0 ? act.E : act.F)[s.col].add_term(s.m, c);
}

std::vector<WeightConstraint> concat(std::vector<WeightConstraint> a, const std::vector<WeightConstraint>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Kernel of a matrix over Q(q, params); pivots must be certainly nonzero.
std::vector<std::vector<Scalar>> nullspace(std::vector<std::vector<Scalar>> rows, std::size_t n,
                                           const std::set<Var>& maybe_zero, const std::string& label) {
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c].is_zero()) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        if (!surely_nonzero(rows[r][c].num(), maybe_zero))
            throw UnresolvedCondition(label + ": pivot " + rows[r][c].str() + " may vanish");
        Scalar inv = rows[r][c].inv();
        for (auto& x : rows[r]) x = x * inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            Scalar f = rows[i][c];
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = rows[i][j] - f * rows[r][j];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(f)) != pivot_col.end()) continue;
        std::vector<Scalar> v(n, Scalar(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

class Engine {
public:
    Engine(const EngineInput& in, Budget& b, EngineOutput& out) : in_(in), budget_(b), out_(out) {}

    void run() {
        ActionMatrix start = low_matrix(in_.K1, in_.K2, in_.low);
        // each nonzero low slot fixes the weights of its block
        std::vector<WeightConstraint> w0 = in_.weights;
        for (const auto& [s, c] : in_.low)
            for (const auto& bc : block_constraints(s.row, shift_of(s, in_.jordan), in_.jordan))
                if (std::find(w0.begin(), w0.end(), bc) == w0.end()) w0.push_back(bc);
        ConstraintOutcome l0 = solve_constraints(w0);
        if (!l0.consistent()) {
            dead_by_weights(in_.label, start, w0, in_.side_conditions, *l0.witness);
            return;
        }
        const WeightWord sx = WeightWord::sym(kAlpha2) * WeightWord::sym(kAlpha1).inverse();
        const WeightWord sy = WeightWord::sym(kBeta2) * WeightWord::sym(kBeta1).inverse();
        const WeightWord sz = WeightWord::sym(kGamma2) * WeightWord::sym(kGamma1).inverse();
        std::vector<std::pair<std::string, std::vector<WeightConstraint>>> branches;
        if (l0.evaluate(sx) && l0.evaluate(sy) && l0.evaluate(sz)) {
            branches.push_back({"", w0});
        } else if (in_.low.empty()) {
            out_.notes.push_back(in_.label +
                                 ": all images have degree >= 2, so the degree-1 part of EF-FE on generators "
                                 "forces each K2/K1 eigenvalue ratio to be +-1; branching over the signs");
            for (int b = 0; b < 8; ++b) {
                int s[3] = {b & 4 ? -1 : 1, b & 2 ? -1 : 1, b & 1 ? -1 : 1};
                auto ws = w0;
                ws.push_back({sx, WeightWord::scalar(s[0], 0)});
                ws.push_back({sy, WeightWord::scalar(s[1], 0)});
                ws.push_back({sz, WeightWord::scalar(s[2], 0)});
                std::string lab = " sigma=(" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," +
                                  std::to_string(s[2]) + ")";
                auto o = solve_constraints(ws);
                if (!o.consistent()) {
                    dead_by_weights(in_.label + lab, start, ws, in_.side_conditions, *o.witness);
                    continue;
                }
                branches.push_back({lab, ws});
            }
        } else {
            throw UnresolvedCondition(in_.label + ": K2/K1 eigenvalue ratios not fixed by the low part");
        }
        for (auto& [lab, ws] : branches) {
            if (!in_.jordan) {
                branch(in_.label + lab, ws, in_.K1, in_.K2, in_.low, in_.side_conditions);
                continue;
            }
            // shear of K2 K1^{-1}: zero, or a nonzero parameter
            Var s1 = Symbols::intern("s1"), s2 = Symbols::intern("s2"), sv = Symbols::intern("s");
            for (int nz = 0; nz < 2; ++nz) {
                std::map<Var, Scalar> sub{
                    {s2, nz ? Scalar::symbol(s1) + Scalar::symbol(sv) : Scalar::symbol(s1)}};
                std::map<Slot, Scalar> low;
                for (auto& [k, c] : in_.low) low[k] = c.substitute(sub);
                std::vector<Scalar> side;
                for (auto& c : in_.side_conditions) side.push_back(c.substitute(sub));
                saved_maybe_zero_ = in_.maybe_zero;
                if (nz) saved_maybe_zero_.insert(s1);
                branch(in_.label + lab + (nz ? " s!=0" : " s=0"), ws, in_.K1.substitute(sub),
                       in_.K2.substitute(sub), low, side);
            }
        }
    }

private:
    const EngineInput& in_;
    Budget& budget_;
    EngineOutput& out_;
    std::set<Var> saved_maybe_zero_;

    const std::set<Var>& maybe_zero() const { return in_.jordan ? saved_maybe_zero_ : in_.maybe_zero; }

    static ActionMatrix low_matrix(const Automorphism& K1, const Automorphism& K2,
                                   const std::map<Slot, Scalar>& low) {
        ActionMatrix a;
        a.K1 = K1;
        a.K2 = K2;
        for (auto& [s, c] : low) add_image(a, s, c);
        return a;
    }

    void dead_by_weights(const std::string& label, const ActionMatrix& base,
                         const std::vector<WeightConstraint>& ws, const std::vector<Scalar>& side,
                         const WeightWord& witness) {
        CertStep st;
        st.kind = CertStep::Kind::Contradiction;
        st.constraint = WeightConstraint{witness, WeightWord::identity()};
        st.text = "weight equations imply " + witness.str() + " = 1";
        out_.dead.push_back({label, base, ws, side, {st}});
    }

    void branch(const std::string& label, const std::vector<WeightConstraint>& ws, const Automorphism& K1,
                const Automorphism& K2, const std::map<Slot, Scalar>& low, const std::vector<Scalar>& side) {
        const bool jordan = in_.jordan;
        ConstraintOutcome lat = solve_constraints(ws);
        auto sub = lat.substitution();
        ActionMatrix start = low_matrix(K1, K2, low);
        ActionMatrix reduced = start.substitute(sub);
        for (const auto& [s, c] : low) {
            Scalar v = reduce_weights(c.substitute(sub), lat);
            if (v.is_zero() || !surely_nonzero(v.num(), maybe_zero()))
                throw UnresolvedCondition(label + ": low coefficient " + s.str() + " = " + v.str() + " may vanish");
        }
        Automorphism sig = reduced.sigma();
        for (const Scalar* c : {&sig.alpha, &sig.beta, &sig.gamma}) {
            auto vs = c->vars();
            if (!(vs.empty() || (vs.size() == 1 && *vs.begin() == Symbols::q)))
                throw UnresolvedCondition(label + ": K2/K1 eigenvalue ratio " + c->str() + " not fixed");
        }

        std::map<Grade, Block, GradeLess> blocks[2];
        for (int row = 0; row < 2; ++row)
            for (int col = 0; col < 3; ++col)
                for (const auto& m : monomials_up_to(in_.degree_bound)) {
                    Slot s{row, col, m};
                    bool is_low = m.degree() <= 1;
                    if (is_low && !low.count(s)) continue;
                    Grade v = shift_of(s, jordan);
                    Block& b = blocks[row][v];
                    b.row = row;
                    b.v = v;
                    (is_low ? b.low : b.high).push_back(s);
                }

        std::vector<Block> anchored[2], cand[2];
        std::vector<WeightConstraint> anchored_cons = ws;
        for (int row = 0; row < 2; ++row)
            for (auto& [v, b] : blocks[row]) {
                b.cons = block_constraints(row, v, jordan);
                bool ok = solve_constraints(concat(ws, b.cons)).consistent();
                if (!b.low.empty()) {
                    anchored_cons = concat(anchored_cons, b.cons);
                    anchored[row].push_back(b);
                    continue;
                }
                if (!ok) continue;
                analyze_block(label, reduced, b);
                if (!b.high.empty()) cand[row].push_back(b);
            }
        {
            auto o = solve_constraints(anchored_cons);
            if (!o.consistent()) {
                dead_by_weights(label, start, anchored_cons, side, *o.witness);
                return;
            }
        }

        std::vector<std::vector<int>> choices[2];
        for (int row = 0; row < 2; ++row) {
            std::string note = label + ": " + kRow[row] + " candidate blocks";
            for (const auto& b : cand[row]) note += " " + b.name(jordan) + (b.psn ? "" : "*");
            out_.notes.push_back(note);
            choices[row] = subsets(label, anchored[row], cand[row], anchored_cons);
        }
        std::size_t excluded = 0;
        for (auto& ce : choices[0])
            for (auto& cf : choices[1]) {
                budget_.spend();
                auto cons = anchored_cons;
                std::vector<const Block*> chosen;
                for (int i : ce) chosen.push_back(&cand[0][i]);
                for (int i : cf) chosen.push_back(&cand[1][i]);
                for (auto* b : chosen) cons = concat(cons, b->cons);
                ActionMatrix base = start;
                detail::SolveProblem p;
                std::string lab = label + " blocks{";
                std::size_t nslots = 0;
                for (auto* b : chosen) nslots += b->high.size();
                const bool raw = nslots <= kRawSlotLimit;
                for (std::size_t k = 0; k < chosen.size(); ++k) {
                    lab += (k ? "," : "") + chosen[k]->name(jordan);
                    const Block& b = *chosen[k];
                    std::vector<Var> group;
                    if (raw) {
                        for (const Slot& s : b.high) {
                            Var u = unknown_var(s);
                            add_image(base, s, Scalar::symbol(u));
                            p.unknowns.push_back(u);
                            group.push_back(u);
                        }
                        p.nonzero_groups.push_back(group);
                        continue;
                    }
                    // otherwise a chosen block is a combination of its Leibniz solutions
                    for (std::size_t j = 0; j < b.kernel.size(); ++j) {
                        Var u = coordinate_var(b.row, b.v, jordan, j, b.kernel.size());
                        for (std::size_t i = 0; i < b.high.size(); ++i)
                            if (!b.kernel[j][i].is_zero()) add_image(base, b.high[i], b.kernel[j][i] * Scalar::symbol(u));
                        p.unknowns.push_back(u);
                        group.push_back(u);
                    }
                    p.nonzero_groups.push_back(group);
                }
                lab += "}";
                // high slots sharing a grade with low ones (Jordan grading only)
                for (int row = 0; row < 2; ++row)
                    for (const Block& b : anchored[row])
                        for (const Slot& s : b.high) {
                            Var u = unknown_var(s);
                            add_image(base, s, Scalar::symbol(u));
                            p.unknowns.push_back(u);
                        }
                auto o = solve_constraints(cons);
                if (!o.consistent()) {
                    ++excluded;
                    dead_by_weights(lab, base, cons, side, *o.witness);
                    continue;
                }
                p.label = lab;
                p.base = base;
                p.weights = cons;
                p.side_conditions = side;
                p.maybe_zero = maybe_zero();
                p.commute_with_delta = jordan;
                p.degree_bound = in_.degree_bound;
                SolveResult r = solve_problem(p, budget_);
                for (auto& d : r.dead) out_.dead.push_back(std::move(d));
                for (auto& a : r.alive) out_.alive.push_back(std::move(a));
            }
        (void)excluded;
    }

    // Leibniz kernel of a pure block and whether a kernel vector can square to zero on its own.
    void analyze_block(const std::string& label, const ActionMatrix& reduced, Block& b) {
        const bool jordan = in_.jordan;
        ActionMatrix a;
        a.K1 = reduced.K1;
        a.K2 = reduced.K2;
        std::vector<Var> us;
        for (const Slot& s : b.high) {
            us.push_back(unknown_var(s));
            add_image(a, s, Scalar::symbol(us.back()));
        }
        std::vector<QPoly> res;
        for (auto& r : leibniz_residuals(a))
            if (r.relation[0] == kRow[b.row][0]) res.push_back(r.residual);
        if (jordan)
            for (const auto& g : kGens) res.push_back(equation_residual(a, b.row == 0 ? "[d,E]" : "[d,F]", g, {}));
        std::vector<std::vector<Scalar>> rows;
        for (const auto& r : res)
            for (const auto& [m, c] : r.terms()) {
                std::vector<Scalar> row;
                Scalar den(c.den());
                for (Var u : us) {
                    auto cs = c.num().coeffs_in(u);
                    auto it = cs.find(1);
                    row.push_back(it == cs.end() ? Scalar(0) : Scalar(it->second) / den);
                }
                rows.push_back(std::move(row));
            }
        auto ker = nullspace(rows, us.size(), maybe_zero(), label);
        if (ker.empty()) {
            b.high.clear();
            return;
        }
        b.kernel = ker;
        if (ker.size() > 1) return;
        ActionMatrix one;
        one.K1 = reduced.K1;
        one.K2 = reduced.K2;
        Var c = Symbols::intern("c");
        for (std::size_t k = 0; k < b.high.size(); ++k)
            if (!ker[0][k].is_zero()) add_image(one, b.high[k], ker[0][k] * Scalar::symbol(c));
        const char* rel = b.row == 0 ? "E^2=0" : "F^2=0";
        for (const auto& g : kGens) {
            QPoly r = relation_residual(one, rel, g);
            if (r.is_zero()) continue;
            b.psn = false;
            CertStep note;
            note.kind = CertStep::Kind::Note;
            note.text = "the only Leibniz solution in block " + b.name(jordan) +
                        " does not square to zero, so the block is never extremal";
            CertStep st;
            st.kind = CertStep::Kind::Contradiction;
            st.relation = rel;
            st.witness = g;
            st.residual = r;
            st.text = "residual of " + std::string(rel) + " cannot vanish";
            out_.dead.push_back({label + " extremal " + b.name(jordan), one, {}, {}, {note, st}});
            return;
        }
    }

    // Index sets of candidate blocks whose union with the anchored blocks has
    // possibly-nilpotent extremes and consistent weights.
    std::vector<std::vector<int>> subsets(const std::string& label, const std::vector<Block>& anchored,
                                          const std::vector<Block>& cand,
                                          const std::vector<WeightConstraint>& base) {
        std::vector<std::vector<int>> out;
        GradeLess less;
        std::optional<Grade> amin, amax;
        for (const auto& b : anchored) {
            if (!amin || less(b.v, *amin)) amin = b.v;
            if (!amax || less(*amax, b.v)) amax = b.v;
        }
        // small candidate sets are searched in full; the extremal rule only
        // cuts larger ones
        const bool prune = cand.size() > kFullSearchBlocks;
        std::vector<int> cur;
        std::vector<WeightConstraint> cons = base;
        auto leaf_ok = [&]() {
            if (cur.empty() || !prune) return true;
            const Block& lo = cand[cur.front()];
            const Block& hi = cand[cur.back()];
            bool lo_ext = !amin || less(lo.v, *amin);
            bool hi_ext = !amax || less(*amax, hi.v);
            if (lo_ext && !lo.psn) return false;
            if (hi_ext && !hi.psn) return false;
            return true;
        };
        std::function<void(std::size_t)> dfs = [&](std::size_t i) {
            if (i == cand.size()) {
                if (leaf_ok()) {
                    budget_.spend();
                    out.push_back(cur);
                }
                return;
            }
            dfs(i + 1);
            // a non-nilpotent block cannot start the chosen range below the anchored ones
            if (prune && cur.empty() && !cand[i].psn && (!amin || less(cand[i].v, *amin))) return;
            auto saved = cons.size();
            cons = concat(cons, cand[i].cons);
            if (solve_constraints(cons).consistent()) {
                cur.push_back(static_cast<int>(i));
                dfs(i + 1);
                cur.pop_back();
            }
            cons.resize(saved);
        };
        dfs(0);
        (void)label;
        return out;
    }
};

}  // namespace

EngineOutput run_engine(const EngineInput& in, Budget& budget) {
    EngineOutput out;
    Engine(in, budget, out).run();
    return out;
}

}  // namespace qa::detail
