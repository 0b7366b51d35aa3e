#include <doctest.h>

#include "jetcl/conservation.hpp"
#include "jetcl/corpus.hpp"
#include "jetcl/errors.hpp"

using namespace jetcl;

namespace {

Expr x = sym::x(), u = sym::u();

Equation heat() { return Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(0)); }

Equation case1() { return Equation::make(sym::f(x), Expr(1), Expr(1), sym::A(u), sym::B(u)); }

Equation case3() { return Equation::make(diff(sym::h(x), x), Expr(1), sym::h(x), sym::A(u), Expr(1)); }

Equation case4() {
    Expr h = sym::h(x);
    return Equation::make(diff(h, x) + h / x, Expr(1), h, sym::A(u), Expr(1));
}

Equation case5a() { return Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), Expr(0)); }

}  // namespace

TEST_CASE("verify") {
    Equation e1 = case1();
    Verification v = verify(e1, parse("f(x)*u"), parse("-A(u)*u_x - IntB(u)"));
    CHECK(v.valid);
    CHECK(v.tier == Tier::Zero);

    Equation e4 = case4();
    v = verify(e4, parse("exp(t)*x*(h[1](x) + h(x)/x)*u"), parse("-exp(t)*(x*A(u)*u_x + x*h(x)*u - IntA(u))"));
    CHECK(v.valid);

    v = verify(heat(), sym::u(), sym::u(1));
    CHECK_FALSE(v.valid);
    CHECK(v.residual == parse("2*u_xx"));
}

TEST_CASE("characteristic extraction") {
    Equation e5 = case5a();
    CHECK(characteristic_of(e5, parse("x*f(x)*u"), parse("-x*A(u)*u_x + IntA(u)")) == x);
    Equation e3 = case3();
    CHECK(characteristic_of(e3, parse("exp(t)*h[1](x)*u"), parse("-exp(t)*(A(u)*u_x + h(x)*u)")) == parse("exp(t)"));
    Equation h = heat();
    Expr H = parse("x*u");
    Expr G = reduce_mod_equation(-total_derivative(H, Dir::T), h);
    CHECK(characteristic_of(h, total_derivative(H, Dir::X), G).is_zero());
}

TEST_CASE("lower order") {
    Equation h = heat();
    Lowered l = lower_order(h, sym::u(1), -sym::u(2));
    CHECK(l.F.is_zero());
    CHECK(l.G.is_zero());
    CHECK(l.H == u);

    Expr H = parse("u^2");
    Expr F = u + total_derivative(H, Dir::X);
    Expr G = -sym::u(1) - reduce_mod_equation(total_derivative(H, Dir::T), h);
    l = lower_order(h, F, G);
    CHECK(l.F == u);
    CHECK(l.G == -sym::u(1));
    CHECK(l.H == H);

    l = lower_order(h, u, -sym::u(1));
    CHECK(l.F == u);
    CHECK(l.G == -sym::u(1));
    CHECK(l.H.is_zero());

    CHECK_THROWS_AS(lower_order(h, parse("u_x^2"), Expr(0)), Error);
}

TEST_CASE("triviality and equivalence") {
    Equation h = heat();
    Expr H = parse("u^2");
    CHECK(is_trivial(h, total_derivative(H, Dir::X), reduce_mod_equation(-total_derivative(H, Dir::T), h)));
    Equation e1 = case1();
    std::pair<Expr, Expr> v1{parse("f(x)*u"), parse("-A(u)*u_x - IntB(u)")};
    CHECK_FALSE(is_trivial(e1, v1.first, v1.second));
    CHECK(is_trivial(h, Expr(0), Expr(0)));

    Expr K = parse("x*u");
    std::pair<Expr, Expr> shifted{v1.first + total_derivative(K, Dir::X), v1.second - total_derivative(K, Dir::T)};
    CHECK(equivalent(e1, v1, shifted));

    Equation e5 = case5a();
    CHECK_FALSE(equivalent(e5, {parse("f(x)*u"), parse("-A(u)*u_x")}, {parse("x*f(x)*u"), parse("-x*A(u)*u_x + IntA(u)")}));
}

TEST_CASE("equivalence relation on a corpus of vectors") {
    Equation h = heat();
    std::mt19937_64 rng(5);
    CorpusOptions o;
    o.atoms = {sym::t(), x, u};
    o.opaque = false;
    o.depth = 2;
    std::vector<std::pair<Expr, Expr>> vectors;
    for (int i = 0; i < 6; ++i) {
        Expr K = normalize(random_expr(rng, o));
        Expr c(i % 3);
        vectors.push_back({c * u + total_derivative(K, Dir::X),
                           -c * sym::u(1) - reduce_mod_equation(total_derivative(K, Dir::T), h)});
    }
    for (const auto& a : vectors) CHECK(equivalent(h, a, a));
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            bool ij = equivalent(h, vectors[i], vectors[j]);
            CHECK(ij == equivalent(h, vectors[j], vectors[i]));
            CHECK(ij == (i % 3 == j % 3));
        }
}

TEST_CASE("linear combination") {
    auto eq = std::make_shared<const Equation>(case5a());
    ConservedVector a = make_conserved_vector(eq, parse("f(x)*u"), parse("-A(u)*u_x"));
    ConservedVector b = make_conserved_vector(eq, parse("x*f(x)*u"), parse("-x*A(u)*u_x + IntA(u)"));
    ConservedVector c = linear_combination({{Expr(1), a}, {Expr(0), b}});
    CHECK(c.F == a.F);
    CHECK(c.G == a.G);
    ConservedVector d = linear_combination({{Expr(2), a}, {Expr(-3), b}});
    CHECK(d.lambda == parse("2 - 3*x"));
    CHECK(characteristic_of(*eq, d.F, d.G) == d.lambda);
    auto other = std::make_shared<const Equation>(heat());
    ConservedVector e = make_conserved_vector(other, u, -sym::u(1));
    CHECK_THROWS_AS(linear_combination({{Expr(1), a}, {Expr(1), e}}), Error);
}
