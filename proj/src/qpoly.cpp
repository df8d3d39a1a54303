#include "qaction/qpoly.hpp"

#include "qaction/errors.hpp"
#include "qaction/expr_parser.hpp"

namespace qa {

std::string Monomial::str() const {
    std::string s;
    auto put = [&](const char* v, int k) {
        if (k == 0) return;
        if (!s.empty()) s += "*";
        s += v;
        if (k != 1) s += "^" + std::to_string(k);
    };
    put("x", a);
    put("y", b);
    put("z", c);
    return s.empty() ? "1" : s;
}

std::pair<int, Monomial> mono_mul(const Monomial& m1, const Monomial& m2) {
    int qp = m1.b * m2.a + m1.c * m2.a + m1.c * m2.b;
    return {qp, Monomial{m1.a + m2.a, m1.b + m2.b, m1.c + m2.c}};
}

std::vector<Monomial> monomials_of_degree(int d) {
    std::vector<Monomial> out;
    for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
    return out;
}

std::vector<Monomial> monomials_up_to(int d) {
    std::vector<Monomial> out;
    for (int k = 0; k <= d; ++k)
        for (auto& m : monomials_of_degree(k)) out.push_back(m);
    return out;
}

QPoly::QPoly(const Scalar& c) {
    if (!c.is_zero()) t_.emplace(Monomial{}, c);
}

QPoly::QPoly(const Monomial& m, const Scalar& c) {
    if (!c.is_zero()) t_.emplace(m, c);
}

QPoly QPoly::generator(int i) {
    Monomial m;
    (i == 0 ? m.a : i == 1 ? m.b : m.c) = 1;
    return QPoly(m, 1);
}

Scalar QPoly::coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Scalar() : it->second;
}

int QPoly::degree() const {
    int d = -1;
    for (auto& [m, c] : t_) d = std::max(d, m.degree());
    return d;
}

int QPoly::low_degree() const {
    int d = -1;
    for (auto& [m, c] : t_)
        if (d < 0 || m.degree() < d) d = m.degree();
    return d;
}

void QPoly::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

QPoly QPoly::operator+(const QPoly& o) const {
    QPoly r = *this;
    r += o;
    return r;
}

QPoly& QPoly::operator+=(const QPoly& o) {
    for (auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
    for (auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

QPoly QPoly::operator-(const QPoly& o) const {
    QPoly r = *this;
    r -= o;
    return r;
}

QPoly QPoly::operator-() const {
    QPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
}

QPoly QPoly::operator*(const QPoly& o) const {
    QPoly r;
    for (auto& [m1, c1] : t_)
        for (auto& [m2, c2] : o.t_) {
            auto [k, m] = mono_mul(m1, m2);
            Scalar c = c1 * c2;
            if (k) c = c * Scalar::q_pow(k);
            r.add_term(m, c);
        }
    return r;
}

QPoly QPoly::scaled(const Scalar& s) const {
    if (s.is_zero()) return QPoly();
    if (s.is_one()) return *this;
    QPoly r;
    for (auto& [m, c] : t_) r.t_.emplace(m, c * s);
    return r;
}

QPoly operator*(const Scalar& s, const QPoly& p) { return p.scaled(s); }

QPoly QPoly::homogeneous_component(int s) const {
    QPoly r;
    for (auto& [m, c] : t_)
        if (m.degree() == s) r.t_.emplace(m, c);
    return r;
}

QPoly QPoly::specialize(const std::map<Var, mpq_class>& at) const {
    QPoly r;
    for (auto& [m, c] : t_) r.add_term(m, c.specialize(at));
    return r;
}

QPoly QPoly::substitute(const std::map<Var, Scalar>& at) const {
    QPoly r;
    for (auto& [m, c] : t_) r.add_term(m, c.substitute(at));
    return r;
}

std::string QPoly::str() const {
    if (t_.empty()) return "0";
    std::string s;
    // highest degree first, then by exponent triple descending
    std::vector<std::pair<Monomial, Scalar>> ts(t_.begin(), t_.end());
    std::stable_sort(ts.begin(), ts.end(), [](auto& l, auto& r) {
        if (l.first.degree() != r.first.degree()) return l.first.degree() > r.first.degree();
        return l.first > r.first;
    });
    bool first = true;
    for (auto& [m, c] : ts) {
        std::string cs = c.str();
        bool simple = cs.find_first_of(" /") == std::string::npos;
        bool neg = false;
        std::string body;
        if (m.degree() == 0) {
            body = simple ? cs : "(" + cs + ")";
            if (simple && body[0] == '-') {
                neg = true;
                body = body.substr(1);
            }
        } else if (cs == "1") {
            body = m.str();
        } else if (cs == "-1") {
            neg = true;
            body = m.str();
        } else if (simple) {
            if (cs[0] == '-') {
                neg = true;
                cs = cs.substr(1);
            }
            body = cs + "*" + m.str();
        } else {
            body = "(" + cs + ")*" + m.str();
        }
        if (first)
            s += neg ? "-" + body : body;
        else
            s += (neg ? " - " : " + ") + body;
        first = false;
    }
    return s;
}

namespace {

struct QPolyOps {
    const ParamSet* params;
    using Value = QPoly;
    Value number(const mpq_class& c) const { return QPoly(Scalar(c)); }
    Value identifier(const std::string& id, std::size_t) const {
        if (id == "x") return QPoly::x();
        if (id == "y") return QPoly::y();
        if (id == "z") return QPoly::z();
        if (id == "q") return QPoly(Scalar::q());
        if (!params->declares(id)) throw UnknownSymbol(id);
        return QPoly(Scalar::symbol(id));
    }
    static bool scalar_only(const Value& v) { return v.degree() <= 0; }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b, std::size_t pos) const {
        if (!scalar_only(b)) throw SyntaxError("division by a non-scalar", pos);
        Scalar d = b.coeff(Monomial{});
        if (d.is_zero()) throw SyntaxError("division by zero", pos);
        return a.scaled(d.inv());
    }
    Value neg(const Value& a) const { return -a; }
    Value power(const Value& a, int k, std::size_t pos) const {
        if (k < 0) {
            if (!scalar_only(a)) throw SyntaxError("negative power of a non-scalar", pos);
            Scalar s = a.coeff(Monomial{});
            if (s.is_zero()) throw SyntaxError("zero to a negative power", pos);
            return QPoly(s.pow(k));
        }
        QPoly r(Scalar(1));
        for (int i = 0; i < k; ++i) r = r * a;
        return r;
    }
};

}  // namespace

QPoly parse_qpoly(const std::string& text, const ParamSet& params) {
    QPolyOps ops{&params};
    return ExprParser<QPolyOps>(text, ops).parse();
}

}  // namespace qa
