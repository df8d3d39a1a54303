#include "qaction/poly.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qa {

namespace {

struct Registry {
    std::mutex mu;
    std::vector<std::string> names{"q"};
    std::unordered_map<std::string, Var> ids{{"q", 0}};
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

Var Symbols::intern(const std::string& name) {
    auto& r = registry();
    std::lock_guard<std::mutex> lk(r.mu);
    auto it = r.ids.find(name);
    if (it != r.ids.end()) return it->second;
    Var v = static_cast<Var>(r.names.size());
    r.names.push_back(name);
    r.ids.emplace(name, v);
    return v;
}

std::optional<Var> Symbols::lookup(const std::string& name) {
    auto& r = registry();
    std::lock_guard<std::mutex> lk(r.mu);
    auto it = r.ids.find(name);
    if (it == r.ids.end()) return std::nullopt;
    return it->second;
}

std::string Symbols::name(Var v) {
    auto& r = registry();
    std::lock_guard<std::mutex> lk(r.mu);
    return r.names.at(v);
}

// ---- monomials ----

PMono PMono::var(Var v, int k) {
    PMono m;
    if (k > 0) {
        m.e.push_back({v, k});
        m.deg = k;
    }
    return m;
}

int PMono::exponent(Var v) const {
    for (auto& [w, k] : e)
        if (w == v) return k;
    return 0;
}

int grlex_cmp(const PMono& a, const PMono& b) {
    if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
    std::size_t i = 0, j = 0;
    while (i < a.e.size() || j < b.e.size()) {
        if (j == b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first)) return 1;
        if (i == a.e.size() || b.e[j].first < a.e[i].first) return -1;
        if (a.e[i].second != b.e[j].second) return a.e[i].second > b.e[j].second ? 1 : -1;
        ++i;
        ++j;
    }
    return 0;
}

PMono operator*(const PMono& a, const PMono& b) {
    PMono r;
    r.e.reserve(a.e.size() + b.e.size());
    std::size_t i = 0, j = 0;
    while (i < a.e.size() || j < b.e.size()) {
        if (j == b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first)) {
            r.e.push_back(a.e[i++]);
        } else if (i == a.e.size() || b.e[j].first < a.e[i].first) {
            r.e.push_back(b.e[j++]);
        } else {
            r.e.push_back({a.e[i].first, a.e[i].second + b.e[j].second});
            ++i;
            ++j;
        }
    }
    r.deg = a.deg + b.deg;
    return r;
}

bool mono_divides(const PMono& d, const PMono& m) {
    if (d.deg > m.deg) return false;
    std::size_t j = 0;
    for (auto& [v, k] : d.e) {
        while (j < m.e.size() && m.e[j].first < v) ++j;
        if (j == m.e.size() || m.e[j].first != v || m.e[j].second < k) return false;
    }
    return true;
}

PMono mono_quotient(const PMono& m, const PMono& d) {
    PMono r;
    std::size_t j = 0;
    for (auto& [v, k] : m.e) {
        int kk = k;
        if (j < d.e.size() && d.e[j].first == v) kk -= d.e[j++].second;
        if (kk < 0) throw std::logic_error("mono_quotient: not divisible");
        if (kk > 0) r.e.push_back({v, kk});
    }
    r.deg = m.deg - d.deg;
    return r;
}

PMono mono_gcd(const PMono& a, const PMono& b) {
    PMono r;
    std::size_t j = 0;
    for (auto& [v, k] : a.e) {
        while (j < b.e.size() && b.e[j].first < v) ++j;
        if (j < b.e.size() && b.e[j].first == v) {
            int kk = std::min(k, b.e[j].second);
            r.e.push_back({v, kk});
            r.deg += kk;
        }
    }
    return r;
}

PMono mono_without(const PMono& m, Var v) {
    PMono r;
    for (auto& p : m.e)
        if (p.first != v) {
            r.e.push_back(p);
            r.deg += p.second;
        }
    return r;
}

// ---- polynomials ----

Poly::Poly(const mpq_class& c) {
    if (c != 0) {
        t_.push_back({PMono{}, c});
        t_[0].c.canonicalize();
    }
}

Poly Poly::var(Var v, int k) { return monomial(PMono::var(v, k), 1); }

Poly Poly::monomial(const PMono& m, const mpq_class& c) {
    Poly p;
    if (c != 0) {
        p.t_.push_back({m, c});
        p.t_[0].c.canonicalize();
    }
    return p;
}

Poly Poly::from_terms(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(),
              [](const Term& a, const Term& b) { return grlex_cmp(a.m, b.m) > 0; });
    Poly p;
    for (auto& t : ts) {
        if (!p.t_.empty() && p.t_.back().m == t.m) {
            p.t_.back().c += t.c;
            if (p.t_.back().c == 0) p.t_.pop_back();
        } else if (t.c != 0) {
            p.t_.push_back(std::move(t));
        }
    }
    return p;
}

mpq_class Poly::const_value() const {
    if (t_.empty()) return 0;
    if (!t_[0].m.is_one() || t_.size() != 1) throw std::logic_error("const_value: not constant");
    return t_[0].c;
}

int Poly::degree_in(Var v) const {
    int d = -1;
    for (auto& t : t_) d = std::max(d, t.m.exponent(v));
    return t_.empty() ? -1 : d;
}

std::set<Var> Poly::vars() const {
    std::set<Var> s;
    for (auto& t : t_)
        for (auto& p : t.m.e) s.insert(p.first);
    return s;
}

bool Poly::contains(Var v) const {
    for (auto& t : t_)
        if (t.m.exponent(v) > 0) return true;
    return false;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.t_.reserve(t_.size() + o.t_.size());
    std::size_t i = 0, j = 0;
    while (i < t_.size() || j < o.t_.size()) {
        int c = (i == t_.size()) ? -1 : (j == o.t_.size()) ? 1 : grlex_cmp(t_[i].m, o.t_[j].m);
        if (c > 0) {
            r.t_.push_back(t_[i++]);
        } else if (c < 0) {
            r.t_.push_back(o.t_[j++]);
        } else {
            mpq_class s = t_[i].c + o.t_[j].c;
            if (s != 0) r.t_.push_back({t_[i].m, s});
            ++i;
            ++j;
        }
    }
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (t_.empty() || o.t_.empty()) return Poly();
    if (o.is_const()) return scaled(o.t_[0].c);
    if (is_const()) return o.scaled(t_[0].c);
    if (o.t_.size() == 1) {
        Poly r;
        r.t_.reserve(t_.size());
        for (auto& t : t_) r.t_.push_back({t.m * o.t_[0].m, t.c * o.t_[0].c});
        return r;
    }
    if (t_.size() == 1) return o * *this;
    std::vector<Term> ts;
    ts.reserve(t_.size() * o.t_.size());
    for (auto& a : t_)
        for (auto& b : o.t_) ts.push_back({a.m * b.m, a.c * b.c});
    return from_terms(std::move(ts));
}

Poly Poly::scaled(const mpq_class& c) const {
    if (c == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.t_) t.c *= c;
    return r;
}

Poly Poly::times_mono(const PMono& m) const {
    Poly r = *this;
    for (auto& t : r.t_) t.m = t.m * m;
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly r(1), b = *this;
    while (k) {
        if (k & 1) r = r * b;
        k >>= 1;
        if (k) b = b * b;
    }
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (t_.size() != o.t_.size()) return false;
    for (std::size_t i = 0; i < t_.size(); ++i)
        if (t_[i].m != o.t_[i].m || t_[i].c != o.t_[i].c) return false;
    return true;
}

std::map<int, Poly> Poly::coeffs_in(Var v) const {
    std::map<int, std::vector<Term>> parts;
    for (auto& t : t_) parts[t.m.exponent(v)].push_back({mono_without(t.m, v), t.c});
    std::map<int, Poly> out;
    for (auto& [k, ts] : parts) out.emplace(k, from_terms(std::move(ts)));
    return out;
}

Poly Poly::from_coeffs(const std::map<int, Poly>& cs, Var v) {
    std::vector<Term> ts;
    for (auto& [k, p] : cs) {
        PMono vk = PMono::var(v, k);
        for (auto& t : p.t_) ts.push_back({t.m * vk, t.c});
    }
    return from_terms(std::move(ts));
}

mpq_class Poly::content() const {
    if (t_.empty()) return 0;
    mpz_class num = 0, den = 1;
    for (auto& t : t_) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.c.get_num_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
    }
    mpq_class c(num, den);
    c.canonicalize();
    if (t_[0].c < 0) c = -c;
    return c;
}

Poly Poly::primitive() const {
    if (t_.empty()) return *this;
    return scaled(1 / content());
}

Poly Poly::monic() const {
    if (t_.empty()) return *this;
    return scaled(1 / t_[0].c);
}

PMono Poly::min_mono() const {
    if (t_.empty()) return PMono{};
    PMono g = t_[0].m;
    for (std::size_t i = 1; i < t_.size() && !g.is_one(); ++i) g = mono_gcd(g, t_[i].m);
    return g;
}

std::optional<Poly> Poly::divide(const Poly& b) const {
    if (b.is_zero()) throw std::logic_error("divide by zero polynomial");
    if (is_zero()) return Poly();
    if (b.is_monomial()) {
        Poly r;
        r.t_.reserve(t_.size());
        for (auto& t : t_) {
            if (!mono_divides(b.t_[0].m, t.m)) return std::nullopt;
            r.t_.push_back({mono_quotient(t.m, b.t_[0].m), t.c / b.t_[0].c});
        }
        return r;
    }
    std::vector<Term> quot;
    Poly rem = *this;
    const Term& lb = b.t_[0];
    while (!rem.is_zero()) {
        const Term& lr = rem.t_[0];
        if (!mono_divides(lb.m, lr.m)) return std::nullopt;
        Term qt{mono_quotient(lr.m, lb.m), lr.c / lb.c};
        rem = rem - Poly::monomial(qt.m, qt.c) * b;
        quot.push_back(std::move(qt));
    }
    return from_terms(std::move(quot));
}

Poly Poly::exact_div(const Poly& b) const {
    auto r = divide(b);
    if (!r) throw std::logic_error("exact_div: not divisible");
    return *r;
}

Poly Poly::eval(const std::map<Var, mpq_class>& at) const {
    std::vector<Term> ts;
    ts.reserve(t_.size());
    for (auto& t : t_) {
        Term nt{PMono{}, t.c};
        for (auto& [v, k] : t.m.e) {
            auto it = at.find(v);
            if (it == at.end()) {
                nt.m.e.push_back({v, k});
                nt.m.deg += k;
            } else {
                mpq_class p;
                mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), k);
                mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), k);
                p.canonicalize();
                nt.c *= p;
            }
        }
        ts.push_back(std::move(nt));
    }
    return from_terms(std::move(ts));
}

namespace {

std::string mono_str(const PMono& m) {
    std::string s;
    for (auto& [v, k] : m.e) {
        if (!s.empty()) s += "*";
        s += Symbols::name(v);
        if (k != 1) s += "^" + std::to_string(k);
    }
    return s;
}

}  // namespace

std::string Poly::str() const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& t : t_) {
        mpq_class c = t.c;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        if (t.m.is_one()) {
            s += c.get_str();
        } else {
            if (c != 1) s += c.get_str() + "*";
            s += mono_str(t.m);
        }
    }
    return s;
}

}  // namespace qa
