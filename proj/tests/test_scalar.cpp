#include <doctest.h>

#include "qaction/errors.hpp"
#include "qaction/scalar.hpp"

#include <random>

using namespace qa;

namespace {

const ParamSet& params() {
    static ParamSet ps({"lambda1", "a0", "t"});
    return ps;
}

Scalar S(const std::string& s) { return parse_scalar(s, params()); }

Poly random_poly(std::mt19937& rng, int maxdeg) {
    std::uniform_int_distribution<int> coef(-3, 3), ex(0, maxdeg), nterms(1, 4);
    Var vs[3] = {Symbols::q, Symbols::intern("lambda1"), Symbols::intern("a0")};
    Poly p;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Poly m(coef(rng));
        for (Var v : vs) m = m * Poly::var(v, ex(rng) / 2);
        p = p + m;
    }
    return p;
}

Scalar random_scalar(std::mt19937& rng) {
    Poly n = random_poly(rng, 3), d;
    do d = random_poly(rng, 2);
    while (d.is_zero());
    return Scalar(n, d);
}

}  // namespace

TEST_CASE("scalar arithmetic examples") {
    CHECK((Scalar::q() + (-Scalar::q())).is_zero());
    CHECK(S("q^2-1") / S("q+1") == S("q-1"));
    // independent check: (q-1)(q+1) expands to q^2-1
    CHECK((Poly::var(Symbols::q) - Poly(1)) * (Poly::var(Symbols::q) + Poly(1)) ==
          Poly::var(Symbols::q, 2) - Poly(1));
    Scalar w = (S("q") - S("q^-1")).inv();
    CHECK(w == S("q/(q^2-1)"));
    CHECK(w * (S("q") - S("q^-1")) == Scalar(1));
    CHECK(w.den() == Poly::var(Symbols::q, 2) - Poly(1));
    CHECK_THROWS_AS(Scalar(1) / Scalar(0), DivisionByZero);
    CHECK_THROWS_AS(Scalar().inv(), DivisionByZero);
}

TEST_CASE("scalar parse") {
    CHECK(S("(q^2-1)/(q+1)") == S("q-1"));
    CHECK(S("0").is_zero());
    Scalar h = S("-(1/2)*lambda1*q^-3");
    CHECK(h.den() == Poly::var(Symbols::q, 3));
    CHECK(h.num() == Poly::var(Symbols::intern("lambda1")).scaled(mpq_class(-1, 2)));
    CHECK(S(h.str()) == h);
    CHECK_THROWS_AS(S("mu + 1"), UnknownSymbol);
    CHECK_THROWS_AS(S("x"), UnknownSymbol);
    try {
        S("q + * 2");
        CHECK(false);
    } catch (const SyntaxError& e) {
        CHECK(e.position == 4);
    }
    CHECK_THROWS_AS(S("2 q"), SyntaxError);
    CHECK_THROWS_AS(S("(q"), SyntaxError);
    CHECK_THROWS_AS(S(""), SyntaxError);
}

TEST_CASE("scalar specialize") {
    CHECK(S("(q^2-1)/(q+1)").specialize(std::map<std::string, mpq_class>{{"q", 2}}) == Scalar(1));
    CHECK(S("q^3").specialize(std::map<std::string, mpq_class>{{"q", 2}}) == Scalar(8));
    CHECK_THROWS_AS(S("1/(q-2)").specialize(std::map<std::string, mpq_class>{{"q", 2}}),
                    SpecializationPole);
    CHECK_THROWS_AS(S("q").specialize(std::map<std::string, mpq_class>{{"q", 1}}), InadmissibleQ);
    CHECK_THROWS_AS(S("q").specialize(std::map<std::string, mpq_class>{{"q", -1}}), InadmissibleQ);
    CHECK_THROWS_AS(S("q").specialize(std::map<std::string, mpq_class>{{"q", 0}}), InadmissibleQ);
}

TEST_CASE("canonical form") {
    Scalar a = S("(2*q+4)/(6*q^2+12*q)");
    CHECK(a == S("1/(3*q)"));
    CHECK(a.den().lead().c == 1);
    CHECK(S("(lambda1*q - lambda1)/(q^2*lambda1 - lambda1)") == S("1/(q+1)"));
    CHECK(S("((q+lambda1)*(q-a0))/((q-a0)*(q^2+a0))") == S("(q+lambda1)/(q^2+a0)"));
}

TEST_CASE("field laws on random scalars") {
    std::mt19937 rng(7);
    for (int i = 0; i < 150; ++i) {
        Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK(a * a.inv() == Scalar(1));
        CHECK(S(a.str()) == a);
        // specialization is a ring homomorphism away from poles
        std::map<std::string, mpq_class> at{{"q", 2}, {"lambda1", mpq_class(3, 5)}, {"a0", -7}};
        try {
            Scalar sa = a.specialize(at), sb = b.specialize(at);
            CHECK((a + b).specialize(at) == sa + sb);
            CHECK((a * b).specialize(at) == sa * sb);
        } catch (const SpecializationPole&) {
        }
    }
}

TEST_CASE("gcd divides and leaves coprime cofactors") {
    std::mt19937 rng(11);
    for (int i = 0; i < 60; ++i) {
        Poly f = random_poly(rng, 3), g = random_poly(rng, 3), h = random_poly(rng, 2);
        if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
        Poly a = f * h, b = g * h;
        Poly d = poly_gcd(a, b);
        REQUIRE(a.divide(d).has_value());
        REQUIRE(b.divide(d).has_value());
        CHECK(d.divide(h.monic()).has_value());
        Poly ca = a.exact_div(d), cb = b.exact_div(d);
        CHECK(poly_gcd(ca, cb) == Poly(1));
    }
}
