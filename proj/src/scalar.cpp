#include "qaction/scalar.hpp"

#include "qaction/errors.hpp"
#include "qaction/expr_parser.hpp"

namespace qa {

ParamSet::ParamSet(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (auto& n : names_) {
        if (n.empty()) throw InvalidParamSet("empty parameter name");
        if (n == "q" || n == "x" || n == "y" || n == "z")
            throw InvalidParamSet("reserved parameter name '" + n + "'");
        if (!seen.insert(n).second) throw InvalidParamSet("duplicate parameter '" + n + "'");
        Symbols::intern(n);
    }
}

bool ParamSet::declares(const std::string& n) const {
    for (auto& m : names_)
        if (m == n) return true;
    return false;
}

ParamSet ParamSet::with(const std::vector<std::string>& more) const {
    auto all = names_;
    for (auto& m : more)
        if (!declares(m)) all.push_back(m);
    return ParamSet(all);
}

Scalar::Scalar(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw DivisionByZero();
    if (num.is_zero()) {
        num_ = Poly();
        den_ = Poly(1);
        return;
    }
    if (den.is_const()) {
        num_ = num.scaled(1 / den.const_value());
        den_ = Poly(1);
        return;
    }
    Poly g = poly_gcd(num, den);
    Poly n = g.is_const() ? num : num.exact_div(g);
    Poly d = g.is_const() ? den : den.exact_div(g);
    mpq_class lc = d.lead().c;
    num_ = n.scaled(1 / lc);
    den_ = d.scaled(1 / lc);
}

Scalar Scalar::symbol(const std::string& name) { return symbol(Symbols::intern(name)); }

Scalar Scalar::q_pow(int k) {
    if (k >= 0) return Scalar(Poly::var(Symbols::q, k));
    Scalar r;
    r.num_ = Poly(1);
    r.den_ = Poly::var(Symbols::q, -k);
    return r;
}

mpq_class Scalar::const_value() const { return num_.const_value() / den_.const_value(); }

std::set<Var> Scalar::vars() const {
    auto s = num_.vars();
    for (auto v : den_.vars()) s.insert(v);
    return s;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        if (den_.is_const()) {
            Scalar r;
            r.num_ = num_ + o.num_;
            return r;
        }
        return Scalar(num_ + o.num_, den_);
    }
    if (o.den_.is_const()) {
        // den_ nonconstant, o integral: no new common factor can appear
        Scalar r;
        r.num_ = num_ + o.num_ * den_;
        r.den_ = den_;
        if (r.num_.is_zero()) return Scalar();
        return r;
    }
    if (den_.is_const()) return o + *this;
    Poly g = poly_gcd(den_, o.den_);
    Poly a = den_.exact_div(g), b = o.den_.exact_div(g);
    return Scalar(num_ * b + o.num_ * a, a * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_zero() || o.is_zero()) return Scalar();
    if (den_.is_const() && o.den_.is_const()) {
        Scalar r;
        r.num_ = num_ * o.num_;
        return r;
    }
    Poly g1 = poly_gcd(num_, o.den_), g2 = poly_gcd(o.num_, den_);
    Poly n1 = g1.is_const() ? num_ : num_.exact_div(g1);
    Poly d2 = g1.is_const() ? o.den_ : o.den_.exact_div(g1);
    Poly n2 = g2.is_const() ? o.num_ : o.num_.exact_div(g2);
    Poly d1 = g2.is_const() ? den_ : den_.exact_div(g2);
    Scalar r;
    r.num_ = n1 * n2;
    r.den_ = d1 * d2;
    mpq_class lc = r.den_.lead().c;
    if (lc != 1) {
        r.num_ = r.num_.scaled(1 / lc);
        r.den_ = r.den_.scaled(1 / lc);
    }
    return r;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw DivisionByZero();
    Scalar r;
    mpq_class lc = num_.lead().c;
    r.num_ = den_.scaled(1 / lc);
    r.den_ = num_.scaled(1 / lc);
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::pow(int k) const {
    if (k < 0) return inv().pow(-k);
    Scalar r;
    r.num_ = num_.pow(static_cast<unsigned>(k));
    r.den_ = den_.pow(static_cast<unsigned>(k));
    return r;
}

Scalar Scalar::specialize(const std::map<Var, mpq_class>& at) const {
    auto it = at.find(Symbols::q);
    if (it != at.end()) {
        const mpq_class& v = it->second;
        if (v == 0 || v == 1 || v == -1) throw InadmissibleQ();
    }
    Poly d = den_.eval(at);
    if (d.is_zero()) throw SpecializationPole();
    return Scalar(num_.eval(at), d);
}

Scalar Scalar::specialize(const std::map<std::string, mpq_class>& at) const {
    std::map<Var, mpq_class> m;
    for (auto& [n, v] : at) m[Symbols::intern(n)] = v;
    return specialize(m);
}

Scalar eval_poly(const Poly& p, const std::map<Var, Scalar>& at) {
    Scalar acc;
    std::map<std::pair<Var, int>, Scalar> powers;
    for (auto& t : p.terms()) {
        std::vector<std::pair<Var, int>> kept;
        Scalar c(t.c);
        for (auto& [v, k] : t.m.e) {
            auto it = at.find(v);
            if (it == at.end()) {
                kept.push_back({v, k});
                continue;
            }
            auto key = std::make_pair(v, k);
            auto pit = powers.find(key);
            if (pit == powers.end()) pit = powers.emplace(key, it->second.pow(k)).first;
            c = c * pit->second;
        }
        if (!kept.empty()) {
            PMono m;
            for (auto& e : kept) {
                m.e.push_back(e);
                m.deg += e.second;
            }
            c = c * Scalar(Poly::monomial(m, 1));
        }
        acc += c;
    }
    return acc;
}

Scalar Scalar::substitute(const std::map<Var, Scalar>& at) const {
    return eval_poly(num_, at) / eval_poly(den_, at);
}

std::string Scalar::str() const {
    if (den_ == Poly(1)) return num_.str();
    std::string n = num_.str();
    if (!num_.is_monomial() || num_.lead().c < 0) n = "(" + n + ")";
    std::string d = den_.str();
    if (!den_.is_monomial() || den_.lead().c != 1 || den_.lead().m.e.size() > 1 ||
        (den_.lead().m.e.size() == 1 && den_.lead().m.e[0].second != 1))
        d = "(" + d + ")";
    return n + "/" + d;
}

namespace {

struct ScalarOps {
    const ParamSet* params;
    using Value = Scalar;
    Value number(const mpq_class& c) const { return Scalar(c); }
    Value identifier(const std::string& id, std::size_t) const {
        if (id == "q") return Scalar::q();
        if (!params->declares(id)) throw UnknownSymbol(id);
        return Scalar::symbol(id);
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value sub(const Value& a, const Value& b) const { return a - b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value div(const Value& a, const Value& b, std::size_t pos) const {
        if (b.is_zero()) throw SyntaxError("division by zero", pos);
        return a / b;
    }
    Value neg(const Value& a) const { return -a; }
    Value power(const Value& a, int k, std::size_t pos) const {
        if (k < 0 && a.is_zero()) throw SyntaxError("zero to a negative power", pos);
        return a.pow(k);
    }
};

}  // namespace

Scalar parse_scalar(const std::string& text, const ParamSet& params) {
    ScalarOps ops{&params};
    return ExprParser<ScalarOps>(text, ops).parse();
}

}  // namespace qa
