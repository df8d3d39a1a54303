#include "qaction/action.hpp"

#include "qaction/errors.hpp"

namespace qa {

Automorphism Automorphism::specialize(const std::map<Var, mpq_class>& at) const {
    return {alpha.specialize(at), beta.specialize(at), gamma.specialize(at), t.specialize(at)};
}

Automorphism Automorphism::substitute(const std::map<Var, Scalar>& at) const {
    return {alpha.substitute(at), beta.substitute(at), gamma.substitute(at), t.substitute(at)};
}

std::string Automorphism::str() const {
    return "(" + alpha.str() + ", " + beta.str() + ", " + gamma.str() + ", " + t.str() + ")";
}

const QPoly& AutoCache::on(const Monomial& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    if (ypow_.empty()) ypow_.push_back(QPoly(Scalar(1)));
    QPoly Y = QPoly::y().scaled(psi_.beta) + QPoly(Monomial{1, 0, 1}, psi_.t);
    while (static_cast<int>(ypow_.size()) <= m.b) ypow_.push_back(ypow_.back() * Y);
    QPoly r = QPoly(Monomial{m.a, 0, 0}, psi_.alpha.pow(m.a) * psi_.gamma.pow(m.c)) * ypow_[m.b] *
              QPoly(Monomial{0, 0, m.c}, 1);
    return cache_.emplace(m, std::move(r)).first->second;
}

QPoly AutoCache::on(const QPoly& p) {
    QPoly r;
    for (auto& [m, c] : p.terms()) r += on(m).scaled(c);
    return r;
}

QPoly apply_automorphism(const Automorphism& psi, const QPoly& p) {
    AutoCache c(psi);
    return c.on(p);
}

QPoly apply_automorphism(const Automorphism& psi, const Monomial& m) {
    AutoCache c(psi);
    return c.on(m);
}

Automorphism invert_automorphism(const Automorphism& psi) {
    if (psi.alpha.is_zero() || psi.beta.is_zero() || psi.gamma.is_zero())
        throw InvalidAutomorphism("zero diagonal entry");
    return {psi.alpha.inv(), psi.beta.inv(), psi.gamma.inv(),
            -psi.t / (psi.alpha * psi.beta * psi.gamma)};
}

Automorphism compose_automorphisms(const Automorphism& f, const Automorphism& g) {
    return {f.alpha * g.alpha, f.beta * g.beta, f.gamma * g.gamma,
            g.beta * f.t + f.alpha * f.gamma * g.t};
}

ActionMatrix ActionMatrix::specialize(const std::map<Var, mpq_class>& at) const {
    ActionMatrix r{K1.specialize(at), K2.specialize(at), {}, {}};
    for (int i = 0; i < 3; ++i) {
        r.E[i] = E[i].specialize(at);
        r.F[i] = F[i].specialize(at);
    }
    return r;
}

ActionMatrix ActionMatrix::substitute(const std::map<Var, Scalar>& at) const {
    ActionMatrix r{K1.substitute(at), K2.substitute(at), {}, {}};
    for (int i = 0; i < 3; ++i) {
        r.E[i] = E[i].substitute(at);
        r.F[i] = F[i].substitute(at);
    }
    return r;
}

Automorphism ActionMatrix::sigma() const {
    return compose_automorphisms(K2, invert_automorphism(K1));
}

Automorphism ActionMatrix::sigma_prime() const {
    return compose_automorphisms(invert_automorphism(K2), K1);
}

namespace {

Monomial letter(int i) {
    Monomial m;
    (i == 0 ? m.a : i == 1 ? m.b : m.c) = 1;
    return m;
}

}  // namespace

const QPoly& Extender::on(const Monomial& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    QPoly r;
    if (m.degree() > 0) {
        int L;
        Monomial rest = m;
        if (m.c > 0) {
            L = 2;
            --rest.c;
        } else if (m.b > 0) {
            L = 1;
            --rest.b;
        } else {
            L = 0;
            --rest.a;
        }
        QPoly g(letter(L), 1);
        if (side_ == Side::Left) {
            r = on(rest) * g + tw_.on(rest) * img_[L];
        } else {
            r = QPoly(rest, 1) * img_[L] + on(rest) * tw_.on(letter(L));
        }
    }
    return cache_.emplace(m, std::move(r)).first->second;
}

QPoly Extender::on(const QPoly& p) {
    QPoly r;
    for (auto& [m, c] : p.terms()) r += on(m).scaled(c);
    return r;
}

QPoly Extender::on_word(const std::vector<int>& letters) {
    QPoly prefix(Scalar(1)), d;
    for (int L : letters) {
        QPoly g(letter(L), 1);
        if (side_ == Side::Left)
            d = d * g + tw_.on(prefix) * img_[L];
        else
            d = prefix * img_[L] + d * tw_.on(letter(L));
        prefix = prefix * g;
    }
    return d;
}

Extender make_E(const ActionMatrix& act) { return Extender(act.E, act.sigma(), Extender::Side::Left); }

Extender make_F(const ActionMatrix& act) {
    return Extender(act.F, act.sigma_prime(), Extender::Side::Right);
}

QPoly extend_E(const ActionMatrix& act, const QPoly& p) { return make_E(act).on(p); }
QPoly extend_F(const ActionMatrix& act, const QPoly& p) { return make_F(act).on(p); }

const std::vector<std::string> kRelationOrder = {
    "E(yx-qxy)",  "E(zy-qyz)", "E(zx-qxz)",   "F(yx-qxy)",   "F(zy-qyz)",
    "F(zx-qxz)",  "K1K2=K2K1", "K1E=q^-1EK1", "K1F=qFK1",    "K2E=-q^-1EK2",
    "K2F=-qFK2",  "EF-FE",     "E^2=0",       "F^2=0",       "unit"};

namespace {

struct Rel {
    const char* name;
    int hi, lo;  // word hi*lo rewritten as q*lo*hi
    Monomial nf;
};

const Rel kRels[3] = {{"yx-qxy", 1, 0, {1, 1, 0}}, {"zy-qyz", 2, 1, {0, 1, 1}}, {"zx-qxz", 2, 0, {1, 0, 1}}};

}  // namespace

std::vector<Residual> leibniz_residuals(const ActionMatrix& act) {
    std::vector<Residual> out;
    Scalar q = Scalar::q();
    for (int side = 0; side < 2; ++side) {
        Extender D = side == 0 ? make_E(act) : make_F(act);
        for (auto& r : kRels) {
            QPoly res = D.on_word({r.hi, r.lo}) - D.on_word({r.lo, r.hi}).scaled(q);
            out.push_back({std::string(side == 0 ? "E(" : "F(") + r.name + ")", r.nf, res});
        }
    }
    return out;
}

std::vector<Residual> check_leibniz_consistency(const ActionMatrix& act) {
    std::vector<Residual> out;
    for (auto& r : leibniz_residuals(act))
        if (!r.residual.is_zero()) out.push_back(std::move(r));
    return out;
}

QPoly ef_rhs(const ActionMatrix& act, const QPoly& p) {
    Scalar q = Scalar::q();
    Scalar denom = (q - q.inv()).inv();
    return (apply_automorphism(act.sigma(), p) - apply_automorphism(act.sigma_prime(), p)).scaled(denom);
}

VerificationReport check_operator_relations(const ActionMatrix& act, int degree_bound) {
    VerificationReport rep;
    rep.degree_bound = degree_bound;
    Scalar q = Scalar::q(), qi = Scalar::q_pow(-1);
    Scalar denom = (q - qi).inv();
    AutoCache k1(act.K1), k2(act.K2), s(act.sigma()), sp(act.sigma_prime());
    Extender E = make_E(act), F = make_F(act);
    std::map<std::string, std::vector<Residual>> found;
    auto note = [&](const std::string& rel, const Monomial& m, const QPoly& r) {
        if (!r.is_zero()) found[rel].push_back({rel, m, r});
    };
    for (auto& m : monomials_up_to(degree_bound)) {
        QPoly mp(m, 1);
        const QPoly& a1 = k1.on(m);
        const QPoly& a2 = k2.on(m);
        note("K1K2=K2K1", m, k1.on(a2) - k2.on(a1));
        const QPoly& em = E.on(m);
        const QPoly& fm = F.on(m);
        note("K1E=q^-1EK1", m, k1.on(em) - E.on(a1).scaled(qi));
        note("K1F=qFK1", m, k1.on(fm) - F.on(a1).scaled(q));
        note("K2E=-q^-1EK2", m, k2.on(em) + E.on(a2).scaled(qi));
        note("K2F=-qFK2", m, k2.on(fm) + F.on(a2).scaled(q));
        QPoly ef = E.on(fm) - F.on(em);
        note("EF-FE", m, ef - (s.on(m) - sp.on(m)).scaled(denom));
        note("E^2=0", m, E.on(em));
        note("F^2=0", m, F.on(fm));
        if (m.degree() == 0) {
            note("unit", m, k1.on(m) - mp);
            note("unit", m, k2.on(m) - mp);
            note("unit", m, em);
            note("unit", m, fm);
        }
    }
    for (auto& rel : kRelationOrder) {
        auto it = found.find(rel);
        if (it == found.end()) continue;
        for (auto& r : it->second) rep.failures.push_back(std::move(r));
    }
    rep.verified = rep.failures.empty();
    return rep;
}

VerificationReport verify_module_algebra(const ActionMatrix& act, int degree_bound) {
    for (auto* k : {&act.K1, &act.K2})
        if (k->alpha.is_zero() || k->beta.is_zero() || k->gamma.is_zero())
            throw InvalidAutomorphism("K row has a zero diagonal scalar");
    VerificationReport rep;
    rep.degree_bound = degree_bound;
    rep.failures = check_leibniz_consistency(act);
    auto ops = check_operator_relations(act, degree_bound);
    for (auto& r : ops.failures) rep.failures.push_back(std::move(r));
    rep.verified = rep.failures.empty();
    return rep;
}

VerificationReport verify_module_algebra_at(const ActionMatrix& act, int degree_bound, const mpq_class& q) {
    std::map<Var, mpq_class> at{{Symbols::q, q}};
    VerificationReport rep = verify_module_algebra(act.specialize(at), degree_bound);
    std::vector<Residual> kept;
    for (auto& f : rep.failures) {
        f.residual = f.residual.specialize(at);
        if (!f.residual.is_zero()) kept.push_back(std::move(f));
    }
    rep.failures = std::move(kept);
    rep.verified = rep.failures.empty();
    return rep;
}

QPoly relation_residual(const ActionMatrix& act, const std::string& relation, const Monomial& m) {
    for (auto& r : leibniz_residuals(act))
        if (r.relation == relation) return r.residual;
    Scalar q = Scalar::q(), qi = Scalar::q_pow(-1);
    AutoCache k1(act.K1), k2(act.K2);
    Extender E = make_E(act), F = make_F(act);
    QPoly mp(m, 1);
    if (relation == "K1K2=K2K1") return k1.on(k2.on(m)) - k2.on(k1.on(m));
    if (relation == "K1E=q^-1EK1") return k1.on(E.on(m)) - E.on(k1.on(m)).scaled(qi);
    if (relation == "K1F=qFK1") return k1.on(F.on(m)) - F.on(k1.on(m)).scaled(q);
    if (relation == "K2E=-q^-1EK2") return k2.on(E.on(m)) + E.on(k2.on(m)).scaled(qi);
    if (relation == "K2F=-qFK2") return k2.on(F.on(m)) + F.on(k2.on(m)).scaled(q);
    if (relation == "EF-FE") return E.on(F.on(m)) - F.on(E.on(m)) - ef_rhs(act, mp);
    if (relation == "E^2=0") return E.on(E.on(m));
    if (relation == "F^2=0") return F.on(F.on(m));
    throw Error("unknown relation '" + relation + "'");
}

}  // namespace qa
