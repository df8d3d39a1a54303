#include "qaction/weights.hpp"

#include "qaction/expr_parser.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace qa {

namespace {

const char* const kSymNames[kNumWeightSyms] = {"alpha1", "beta1", "gamma1", "alpha2", "beta2", "gamma2"};

// Elimination order: K2 symbols first so they get expressed through K1 ones,
// beta1 before alpha1 so that beta1 = q alpha1 gamma1 keeps alpha1, gamma1 free.
constexpr int kColOrder[kNumWeightSyms] = {kAlpha2, kBeta2, kGamma2, kBeta1, kAlpha1, kGamma1};
constexpr int kQCol = kNumWeightSyms;

long long floor_div(long long a, long long b) {
    long long d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
    return d;
}

using Row = ConstraintOutcome::Row;

Row row_of(const WeightWord& w) {
    Row r;
    for (int i = 0; i < kNumWeightSyms; ++i) r.v[i] = w.exp[i];
    r.v[kQCol] = w.qexp;
    r.s = w.sign < 0 ? 1 : 0;
    return r;
}

WeightWord word_of(const Row& r) {
    WeightWord w;
    for (int i = 0; i < kNumWeightSyms; ++i) w.exp[i] = static_cast<int>(r.v[i]);
    w.qexp = static_cast<int>(r.v[kQCol]);
    w.sign = r.s ? -1 : 1;
    return w;
}

// row_j -= f * row_i
void axpy(Row& dst, const Row& src, long long f) {
    if (f == 0) return;
    for (std::size_t k = 0; k < dst.v.size(); ++k) dst.v[k] -= f * src.v[k];
    if (f % 2 != 0) dst.s ^= src.s;
}

void negate(Row& r) {
    for (auto& x : r.v) x = -x;
}

bool zero_exps(const Row& r) {
    for (int i = 0; i < kNumWeightSyms; ++i)
        if (r.v[i] != 0) return false;
    return true;
}

int pivot_col(const Row& r) {
    for (int k = 0; k < kNumWeightSyms; ++k)
        if (r.v[kColOrder[k]] != 0) return kColOrder[k];
    return r.v[kQCol] != 0 ? kQCol : -1;
}

struct WeightOps {
    using Value = WeightWord;
    Value number(const mpq_class& c) const {
        if (c != 1) throw SyntaxError("only 1 may appear as a number in a weight word", 0);
        return WeightWord::identity();
    }
    Value identifier(const std::string& id, std::size_t pos) const {
        if (id == "q") return WeightWord::scalar(1, 1);
        for (int i = 0; i < kNumWeightSyms; ++i)
            if (id == kSymNames[i]) return WeightWord::sym(i);
        throw SyntaxError("unknown weight symbol '" + id + "'", pos);
    }
    Value add(const Value&, const Value&) const { throw SyntaxError("sums are not weight words", 0); }
    Value sub(const Value&, const Value&) const { throw SyntaxError("sums are not weight words", 0); }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b, std::size_t) const { return a * b.inverse(); }
    Value neg(const Value& a) const {
        Value r = a;
        r.sign = -r.sign;
        return r;
    }
    Value power(const Value& a, int k, std::size_t) const { return a.pow(k); }
};

}  // namespace

const char* weight_sym_name(int s) { return kSymNames[s]; }

Var weight_sym_var(int s) { return Symbols::intern(kSymNames[s]); }

Var shear_var(int i) { return Symbols::intern(i == 1 ? "t1" : "t2"); }

WeightWord WeightWord::sym(int s, int k) {
    WeightWord w;
    w.exp[s] = k;
    return w;
}

WeightWord WeightWord::scalar(int sign, int qexp) {
    WeightWord w;
    w.sign = sign;
    w.qexp = qexp;
    return w;
}

bool WeightWord::is_pure() const {
    return std::all_of(exp.begin(), exp.end(), [](int e) { return e == 0; });
}

bool WeightWord::is_identity() const { return is_pure() && sign == 1 && qexp == 0; }

WeightWord WeightWord::operator*(const WeightWord& o) const {
    WeightWord r;
    for (int i = 0; i < kNumWeightSyms; ++i) r.exp[i] = exp[i] + o.exp[i];
    r.sign = sign * o.sign;
    r.qexp = qexp + o.qexp;
    return r;
}

WeightWord WeightWord::inverse() const {
    WeightWord r;
    for (int i = 0; i < kNumWeightSyms; ++i) r.exp[i] = -exp[i];
    r.sign = sign;
    r.qexp = -qexp;
    return r;
}

WeightWord WeightWord::pow(int k) const {
    WeightWord r;
    for (int i = 0; i < kNumWeightSyms; ++i) r.exp[i] = exp[i] * k;
    r.sign = (k % 2 != 0) ? sign : 1;
    r.qexp = qexp * k;
    return r;
}

Scalar WeightWord::to_scalar() const {
    Scalar r = Scalar::q_pow(qexp);
    if (sign < 0) r = -r;
    for (int i = 0; i < kNumWeightSyms; ++i)
        if (exp[i] != 0) r *= Scalar::symbol(weight_sym_var(i)).pow(exp[i]);
    return r;
}

std::string WeightWord::str() const {
    std::vector<std::string> f;
    auto piece = [&](const std::string& n, int e) {
        if (e == 0) return;
        f.push_back(e == 1 ? n : n + "^" + std::to_string(e));
    };
    piece("q", qexp);
    for (int i = 0; i < kNumWeightSyms; ++i) piece(kSymNames[i], exp[i]);
    std::string body;
    for (std::size_t i = 0; i < f.size(); ++i) body += (i ? "*" : "") + f[i];
    if (body.empty()) body = "1";
    return (sign < 0 ? "-" : "") + body;
}

WeightWord parse_weight_word(const std::string& text) {
    WeightOps ops;
    return ExprParser<WeightOps>(text, ops).parse();
}

std::string WeightConstraint::str() const { return lhs.str() + " = " + rhs.str(); }

WeightConstraint parse_weight_constraint(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos) throw SyntaxError("expected '='", text.size());
    if (text.find('=', eq + 1) != std::string::npos) throw SyntaxError("more than one '='", text.find('=', eq + 1));
    WeightConstraint c;
    c.lhs = parse_weight_word(text.substr(0, eq));
    try {
        c.rhs = parse_weight_word(text.substr(eq + 1));
    } catch (const SyntaxError& e) {
        throw SyntaxError(e.what(), eq + 1 + e.position);
    }
    return c;
}

ConstraintOutcome solve_constraints(const std::vector<WeightConstraint>& cs) {
    std::vector<Row> rows;
    for (const auto& c : cs) rows.push_back(row_of(c.normalized()));

    std::size_t r = 0;
    std::vector<int> order(kColOrder, kColOrder + kNumWeightSyms);
    order.push_back(kQCol);
    std::vector<std::pair<std::size_t, int>> pivots;  // row index, column
    for (int col : order) {
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i)
                if (rows[i].v[col] != 0 &&
                    (best == rows.size() || std::llabs(rows[i].v[col]) < std::llabs(rows[best].v[col])))
                    best = i;
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool done = true;
            for (std::size_t j = r + 1; j < rows.size(); ++j) {
                if (rows[j].v[col] == 0) continue;
                axpy(rows[j], rows[r], rows[j].v[col] / rows[r].v[col]);
                if (rows[j].v[col] != 0) done = false;
            }
            if (done) {
                if (rows[r].v[col] < 0) negate(rows[r]);
                for (std::size_t j = 0; j < r; ++j)
                    axpy(rows[j], rows[r], floor_div(rows[j].v[col], rows[r].v[col]));
                pivots.push_back({r, col});
                ++r;
                break;
            }
        }
    }

    ConstraintOutcome out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        bool trivial_exps = zero_exps(row);
        if (trivial_exps && (row.v[kQCol] != 0 || row.s != 0)) {
            WeightWord w = word_of(row);
            if (w.qexp < 0) w = w.inverse();
            out.status = ConstraintOutcome::Status::Contradiction;
            out.witness = w;
            out.rows.clear();
            out.basis.clear();
            return out;
        }
    }
    rows.resize(r);
    out.rows = rows;

    std::set<int> pivot_cols;
    for (const auto& [ri, col] : pivots) {
        pivot_cols.insert(col);
        if (rows[ri].v[col] != 1) out.unit_pivots = false;
    }
    for (int k = 0; k < kNumWeightSyms; ++k)
        if (!pivot_cols.count(kColOrder[k])) out.free_symbols.push_back(kColOrder[k]);
    std::sort(out.free_symbols.begin(), out.free_symbols.end());

    for (const auto& [ri, col] : pivots) {
        WeightWord w = word_of(rows[ri]);
        WeightWord lhs;
        for (int i = 0; i < kNumWeightSyms; ++i) lhs.exp[i] = w.exp[i];
        WeightConstraint c{lhs, WeightWord::scalar(w.sign, -w.qexp)};
        out.basis.push_back(c);
        if (rows[ri].v[col] != 1) continue;
        // non-unit pivot symbols stay unsubstituted and may appear in the value
        bool clean = true;
        for (const auto& [rj, cj] : pivots)
            if (cj != col && rows[rj].v[cj] == 1 && rows[ri].v[cj] != 0) clean = false;
        if (!clean) continue;
        // sym_col = (rest)^{-1} with rest = w / sym_col
        WeightWord rest = w * WeightWord::sym(col, -1);
        out.values[col] = rest.inverse();
    }
    return out;
}

std::optional<WeightWord> ConstraintOutcome::evaluate(const WeightWord& w) const {
    if (!consistent()) return std::nullopt;
    Row x = row_of(w);
    for (const Row& row : rows) {
        int col = pivot_col(row);
        if (col < 0 || col == kQCol) continue;
        long long p = row.v[col];
        if (x.v[col] % p != 0) return std::nullopt;
        axpy(x, row, x.v[col] / p);
    }
    if (!zero_exps(x)) return std::nullopt;
    return word_of(x);
}

WeightWord ConstraintOutcome::reduce(const WeightWord& w) const {
    if (!consistent()) return w;
    Row x = row_of(w);
    for (const Row& row : rows) {
        int col = pivot_col(row);
        if (col < 0 || col == kQCol) continue;
        axpy(x, row, floor_div(x.v[col], row.v[col]));
    }
    return word_of(x);
}

std::map<Var, Scalar> ConstraintOutcome::substitution() const {
    std::map<Var, Scalar> m;
    for (const auto& [s, w] : values) m[weight_sym_var(s)] = w.to_scalar();
    return m;
}

bool ConstraintOutcome::same_lattice(const ConstraintOutcome& o) const {
    if (status != o.status) return false;
    if (!consistent()) return true;
    if (rows.size() != o.rows.size()) return false;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].v != o.rows[i].v || rows[i].s != o.rows[i].s) return false;
    return true;
}

WeightWord weight_of_monomial(const Monomial& m, WhichK which, TMode mode) {
    if (mode == TMode::NonZero && m.b > 0) throw NotAWeightVector();
    int base = which == WhichK::K1 ? kAlpha1 : kAlpha2;
    WeightWord w;
    w.exp[base] = m.a;
    w.exp[base + 1] = m.b;
    w.exp[base + 2] = m.c;
    return w;
}

bool partial_weight_match(const WeightMatrix& a, const WeightMatrix& b) {
    if (a.size() != b.size()) throw ShapeMismatch();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].size() != b[i].size()) throw ShapeMismatch();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] && b[i][j] && *a[i][j] != *b[i][j]) return false;
    return true;
}

std::vector<Monomial> admissible_support(const WeightWord& target_k1, const WeightWord& target_k2,
                                         const std::vector<WeightConstraint>& fixed, int max_degree,
                                         TMode mode) {
    std::vector<Monomial> out;
    for (const Monomial& m : monomials_up_to(max_degree)) {
        if (mode == TMode::NonZero && m.b > 0) continue;
        auto cs = fixed;
        cs.push_back({weight_of_monomial(m, WhichK::K1, mode), target_k1});
        cs.push_back({weight_of_monomial(m, WhichK::K2, mode), target_k2});
        if (solve_constraints(cs).consistent()) out.push_back(m);
    }
    return out;
}

}  // namespace qa
