#include <doctest.h>

#include "jetcl/corpus.hpp"
#include "jetcl/errors.hpp"
#include "jetcl/jet.hpp"

using namespace jetcl;

namespace {

Equation heat() { return Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(0)); }

Equation generic() {
    Expr x = sym::x(), u = sym::u();
    return Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), sym::B(u));
}

}  // namespace

TEST_CASE("total derivatives") {
    CHECK(total_derivative(parse("u^2/2"), Dir::X) == parse("u*u_x"));
    CHECK(total_derivative(parse("f(x)*u"), Dir::X) == parse("f[1](x)*u + f(x)*u_x"));
    CHECK(total_derivative(parse("exp(t)*f(x)*u"), Dir::T) == parse("exp(t)*f(x)*u + exp(t)*f(x)*u_t"));
    CHECK(total_derivative(parse("IntA(u)"), Dir::X) == parse("A(u)*u_x"));
    JetContext tight;
    tight.order_cap = 2;
    CHECK_THROWS_AS(total_derivative(parse("u_xx"), Dir::X, tight), OrderCapExceeded);
}

TEST_CASE("divergence") {
    Expr F = parse("f(x)*u"), G = parse("-A(u)*u_x - IntB(u)");
    CHECK(divergence(F, G) == parse("f(x)*u_t - A(u)*u_xx - A[1](u)*u_x^2 - B(u)*u_x"));
    CHECK(divergence(Expr(0), Expr(0)).is_zero());
    Expr H = parse("x*u");
    CHECK(divergence(total_derivative(H, Dir::X), -total_derivative(H, Dir::T)).is_zero());
}

TEST_CASE("euler operator") {
    CHECK(euler_operator(parse("u^2/2")) == sym::u());
    CHECK(euler_operator(parse("u*u_xx + u_x^2")).is_zero());
    Expr lam = Expr::opaque("alpha", {sym::t(), sym::x()});
    CHECK(euler_operator(lam * parse("u_t - u_xx")) ==
          -Expr::opaque("alpha", {sym::t(), sym::x()}, {1, 0}) - Expr::opaque("alpha", {sym::t(), sym::x()}, {0, 2}));
}

TEST_CASE("reduction modulo the equation") {
    Equation eq = heat();
    CHECK(reduce_mod_equation(sym::ut(), eq) == sym::u(2));
    CHECK(reduce_mod_equation(sym::ut(1), eq) == sym::u(3));
    CHECK(reduce_mod_equation(Expr::jet("u", 2, 0), eq) == sym::u(4));
    Equation g = generic();
    CHECK(reduce_mod_equation(g.lhs(), g).is_zero());
    Expr e = parse("u_tx*u_t + x*u_t");
    Expr r = reduce_mod_equation(e, g);
    CHECK(reduce_mod_equation(r, g) == r);
    Expr lhs = reduce_mod_equation(total_derivative(e, Dir::X, g.context()), g);
    Expr rhs = reduce_mod_equation(total_derivative(r, Dir::X, g.context()), g);
    CHECK(is_zero(lhs - rhs).zero());
}

TEST_CASE("adjoint Frechet derivative") {
    CHECK(adjoint_frechet_apply(heat(), Expr(1)).is_zero());
    Expr alpha = Expr::opaque("alpha", {sym::t(), sym::x()});
    Expr r = adjoint_frechet_apply(heat(), alpha);
    CHECK(r == -Expr::opaque("alpha", {sym::t(), sym::x()}, {1, 0}) -
                   Expr::opaque("alpha", {sym::t(), sym::x()}, {0, 2}));
    Equation constrained = heat();
    constrained.rules.push_back({"alpha", {sym::t(), sym::x()}, 0, -parse("alpha[0,2](t,x)")});
    CHECK(adjoint_frechet_apply(constrained, alpha).is_zero());

    Expr x = sym::x(), u = sym::u();
    Equation e5a = Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), Expr(0));
    CHECK(adjoint_frechet_apply(e5a, x).is_zero());
}

TEST_CASE("constrained symbols rewrite time derivatives") {
    RuleSet rules{{"sigma", {sym::t(), Expr::jet("v")}, 0, -parse("sigma[0,2](t,v)")}};
    Expr s = parse("sigma[2,1](t,v)");
    CHECK(apply_rules(s, rules) == parse("sigma[0,5](t,v)"));
}

TEST_CASE("divergences are annihilated by the Euler operator") {
    std::mt19937_64 rng(7);
    CorpusOptions o;
    o.atoms = jet_atoms(2);
    o.depth = 3;
    o.max_terms = 40;
    for (int i = 0; i < 40; ++i) {
        Expr F = normalize(random_expr(rng, o));
        Expr G = normalize(random_expr(rng, o));
        Expr E = euler_operator(divergence(F, G));
        INFO("F = " << F << ", G = " << G);
        CHECK(is_zero(E).zero());
    }
}

TEST_CASE("total derivatives commute") {
    std::mt19937_64 rng(11);
    CorpusOptions o;
    o.atoms = jet_atoms(2);
    o.atoms.push_back(sym::ut());
    for (int i = 0; i < 30; ++i) {
        Expr e = normalize(random_expr(rng, o));
        Expr a = total_derivative(total_derivative(e, Dir::T), Dir::X);
        Expr b = total_derivative(total_derivative(e, Dir::X), Dir::T);
        INFO("e = " << e);
        CHECK(a == b);
    }
}
