#include <doctest.h>

#include "qaction/errors.hpp"
#include "qaction/qpoly.hpp"

#include <random>

using namespace qa;

namespace {

const ParamSet& params() {
    static ParamSet ps({"a0", "lambda1"});
    return ps;
}

QPoly P(const std::string& s) { return parse_qpoly(s, params()); }

// independent oracle: sort a word over {x,y,z} by adjacent swaps, each swap of
// an out-of-order pair contributing one power of q
std::pair<int, Monomial> rewrite_word(std::string w) {
    int k = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i] > w[i + 1]) {
                std::swap(w[i], w[i + 1]);
                ++k;
                changed = true;
            }
    }
    Monomial m;
    for (char c : w) (c == 'x' ? m.a : c == 'y' ? m.b : m.c)++;
    return {k, m};
}

std::string word(const Monomial& m) {
    return std::string(m.a, 'x') + std::string(m.b, 'y') + std::string(m.c, 'z');
}

QPoly random_qpoly(std::mt19937& rng, int maxdeg) {
    std::uniform_int_distribution<int> coef(-3, 3), nterms(1, 4);
    auto monos = monomials_up_to(maxdeg);
    std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
    QPoly p;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Scalar c = Scalar(coef(rng));
        if (i % 2) c = c * Scalar::q() + Scalar::symbol("a0");
        p.add_term(monos[pick(rng)], c);
    }
    return p;
}

}  // namespace

TEST_CASE("mono_mul examples") {
    auto [k1, m1] = mono_mul({0, 1, 0}, {1, 0, 0});
    CHECK(k1 == 1);
    CHECK(m1 == Monomial{1, 1, 0});
    auto [k2, m2] = mono_mul({2, 1, 3}, {});
    CHECK(k2 == 0);
    CHECK(m2 == Monomial{2, 1, 3});
    auto [k3, m3] = mono_mul({0, 2, 0}, {3, 0, 0});
    CHECK(k3 == 6);
    CHECK(m3 == Monomial{3, 2, 0});
    CHECK(rewrite_word("yyxxx").first == 6);
}

TEST_CASE("mono_mul matches word rewriting exhaustively to degree 4") {
    auto monos = monomials_up_to(4);
    int checked = 0;
    for (auto& m1 : monos)
        for (auto& m2 : monos) {
            if (m1.degree() + m2.degree() > 8) continue;
            auto [k, m] = mono_mul(m1, m2);
            auto [k2, mm] = rewrite_word(word(m1) + word(m2));
            CHECK(k == k2);
            CHECK(m == mm);
            ++checked;
        }
    CHECK(checked == 35 * 35);
}

TEST_CASE("poly_mul examples") {
    CHECK(P("z") * P("x*y") == P("q^2*x*y*z"));
    CHECK(P("(x+y)*(x+y)") == P("x^2 + (1+q)*x*y + y^2"));
    QPoly p = P("a0*x + q*z^2");
    CHECK(p * QPoly(Scalar(1)) == p);
    CHECK(P("y*x") == P("q*x*y"));
    CHECK(P("x^2*z - x^2*z").is_zero());
    QPoly r = P("a0 + (q+1)*x*y");
    CHECK(r.coeff({}) == Scalar::symbol("a0"));
    CHECK(P(r.str()) == r);
    CHECK_THROWS_AS(P("x/y"), SyntaxError);
    CHECK_THROWS_AS(P("w*x"), UnknownSymbol);
}

TEST_CASE("relation fidelity and homogeneous components") {
    Scalar q = Scalar::q();
    CHECK((P("y") * P("x") - (P("x") * P("y")).scaled(q)).is_zero());
    CHECK((P("z") * P("y") - (P("y") * P("z")).scaled(q)).is_zero());
    CHECK((P("z") * P("x") - (P("x") * P("z")).scaled(q)).is_zero());
    QPoly p = P("x^2 + 3*x*y + z");
    CHECK(p.homogeneous_component(2) == P("x^2 + 3*x*y"));
    CHECK(p.homogeneous_component(5).is_zero());
    QPoly sum;
    for (int s = 0; s <= p.degree(); ++s) sum += p.homogeneous_component(s);
    CHECK(sum == p);
}

TEST_CASE("associativity on random triples") {
    std::mt19937 rng(3);
    for (int i = 0; i < 1000; ++i) {
        QPoly a = random_qpoly(rng, 4), b = random_qpoly(rng, 4), c = random_qpoly(rng, 4);
        CHECK((a * b) * c == a * (b * c));
        if (i % 50 == 0) {
            for (int s = 0; s <= 4; ++s)
                for (int t = 0; t <= 4; ++t) {
                    QPoly prod = a.homogeneous_component(s) * b.homogeneous_component(t);
                    CHECK(prod == prod.homogeneous_component(s + t));
                }
            CHECK((a + b).homogeneous_component(2) ==
                  a.homogeneous_component(2) + b.homogeneous_component(2));
        }
    }
}
