#include "qaction/poly.hpp"

#include <algorithm>

namespace qa {

namespace {

Poly gcd_rec(const Poly& a, const Poly& b);

// gcd of the coefficients of p viewed as a polynomial in v
Poly content_in(const Poly& p, Var v) {
    Poly g;
    for (auto& [k, c] : p.coeffs_in(v)) {
        g = g.is_zero() ? c.monic() : gcd_rec(g, c);
        if (g.is_const()) return Poly(1);
    }
    return g;
}

Poly lead_in(const Poly& p, Var v, int d) {
    auto cs = p.coeffs_in(v);
    auto it = cs.find(d);
    return it == cs.end() ? Poly() : it->second;
}

// pseudo-remainder of a by b in v, kept primitive over Q along the way
Poly prem(Poly a, const Poly& b, Var v) {
    int db = b.degree_in(v);
    Poly lb = lead_in(b, v, db);
    while (!a.is_zero()) {
        int da = a.degree_in(v);
        if (da < db) break;
        Poly la = lead_in(a, v, da);
        a = a * lb - (la * b).times_mono(PMono::var(v, da - db));
        if (!a.is_zero()) a = a.primitive();
    }
    return a;
}

Poly gcd_nomono(const Poly& a, const Poly& b) {
    if (a.is_const() || b.is_const()) return Poly(1);
    if (a.monic() == b.monic()) return a.monic();
    auto va = a.vars(), vb = b.vars();
    Var v = std::min(*va.begin(), *vb.begin());
    bool ina = va.count(v), inb = vb.count(v);
    if (!ina) return gcd_rec(a, content_in(b, v));
    if (!inb) return gcd_rec(content_in(a, v), b);

    Poly ca = content_in(a, v), cb = content_in(b, v);
    Poly pa = a.exact_div(ca), pb = b.exact_div(cb);
    Poly c = gcd_rec(ca, cb);
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    pa = pa.primitive();
    pb = pb.primitive();
    Poly g;
    while (true) {
        Poly r = prem(pa, pb, v);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        if (r.degree_in(v) <= 0) {
            g = Poly(1);
            break;
        }
        pa = pb;
        pb = r.exact_div(content_in(r, v));
    }
    if (!g.is_const()) g = g.exact_div(content_in(g, v));
    return (c * g).monic();
}

Poly gcd_rec(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_const() || b.is_const()) return Poly(1);
    PMono ma = a.min_mono(), mb = b.min_mono();
    PMono m = mono_gcd(ma, mb);
    Poly ra = ma.is_one() ? a : a.exact_div(Poly::monomial(ma, 1));
    Poly rb = mb.is_one() ? b : b.exact_div(Poly::monomial(mb, 1));
    Poly g = gcd_nomono(ra, rb);
    return g.times_mono(m).monic();
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

}  // namespace qa
