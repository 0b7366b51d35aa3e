#include <doctest.h>

#include "jetcl/errors.hpp"
#include "jetcl/numeric.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace jetcl;

namespace {

Equation heat() { return Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(0)); }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("compiled expressions agree with the evaluator") {
    std::vector<Expr> vars = {sym::t(), sym::x(), sym::u()};
    Expr e = parse("exp(t)*sin(x)*u^-2 + abs(x - 3)^(3/2) + atan(u)*cosh(t) - ln(x)");
    CompiledExpr c(e, vars);
    Point p{{sym::t().key(), 0.3}, {sym::x().key(), 1.7}, {sym::u().key(), 0.9}};
    CHECK(c({0.3, 1.7, 0.9}) == doctest::Approx(eval_numeric(e, p, NoOpaqueModel())).epsilon(1e-14));
    CHECK(std::isnan(CompiledExpr(parse("x^(1/2)"), vars)({0.0, -1.0, 0.0})));
    CHECK_THROWS_AS(CompiledExpr(parse("A(u)"), vars), MissingModelError);
    CHECK_THROWS_AS(CompiledExpr(parse("u_x"), vars), MissingModelError);
}

TEST_CASE("heat equation with periodic sine data") {
    SimConfig c;
    c.a = 0;
    c.b = 2 * std::numbers::pi;
    c.N = 128;
    c.T = 1;
    c.boundary = Boundary::Periodic;
    c.initial = {"sine", 1.0, 0.0, 1.0, 0.0};
    Solution sol = solve(heat(), c);
    CHECK(sol.times.back() == doctest::Approx(1.0));
    double m = max_abs(sol.profiles.back());
    CHECK(std::abs(m - std::exp(-1.0)) < 0.02 * std::exp(-1.0));
    AuditSeries a = audit(sol, heat(), {{"mass", parse("u"), parse("-u_x")}});
    CHECK(max_abs(a.laws[0].M) < 1e-13);
    CHECK(a.laws[0].max_residual < 1e-13);
}

TEST_CASE("constant data stays constant") {
    SimConfig c;
    c.a = 0;
    c.b = 1;
    c.N = 32;
    c.T = 0.1;
    c.initial = {"gaussian", 0.0, 0.0, 1.0, 0.7};
    Equation eq = Equation::make(parse("1 + x"), Expr(1), parse("x"), parse("1 + u^2"), parse("u"));
    Solution sol = solve(eq, c);
    for (double v : sol.profiles.back()) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("Burgers-type run agrees with a refined grid") {
    Equation eq = Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), parse("2*u"));
    SimConfig c;
    c.a = -5;
    c.b = 5;
    c.N = 256;
    c.T = 1;
    c.initial = {"gaussian", 0.2, 0.0, 1.0, 0.0};
    Solution coarse = solve(eq, c);
    c.N = 512;
    Solution fine = solve(eq, c);
    double d = 0.0;
    for (int j = 0; j <= 256; ++j) d = std::max(d, std::abs(coarse.profiles.back()[j] - fine.profiles.back()[2 * j]));
    CHECK(d < 1e-5);
}

TEST_CASE("heat equation audits on decaying data") {
    SimConfig c;
    c.a = -10;
    c.b = 10;
    c.N = 512;
    c.T = 1;
    c.initial = {"gaussian", 1.0, 0.5, 1.0, 0.0};
    AuditLaw mass{"mass", parse("u"), parse("-u_x")};
    AuditLaw wave{"exp(t) sin x", parse("exp(t)*sin(x)*u"), parse("-exp(t)*(sin(x)*u_x - cos(x)*u)")};
    REQUIRE(verify(heat(), wave.F, wave.G).valid);
    AuditSeries a = audit(solve(heat(), c), heat(), {mass, wave});
    CHECK(a.laws[0].max_residual < 1e-6);

    Refinement r = convergence_order(heat(), c, wave);
    REQUIRE_FALSE(r.saturated());
    CHECK(*r.order >= 1.7);
    CHECK(*r.order <= 2.3);
    CHECK(convergence_order(heat(), c, mass).saturated());
}

TEST_CASE("case 3 instance") {
    Equation eq = Equation::make(parse("exp(x)"), Expr(1), parse("exp(x)"), Expr(1), Expr(1));
    AuditLaw law{"case 3", parse("exp(t)*exp(x)*u"), parse("-exp(t)*(u_x + exp(x)*u)")};
    REQUIRE(verify(eq, law.F, law.G).valid);
    SimConfig c;
    c.a = -1;
    c.b = 4;
    c.T = 0.1;
    c.initial = {"gaussian", 0.25, 1.5, 0.4, 0.0};
    Refinement r = convergence_order(eq, c, law);
    CHECK(r.residual_n < 1e-5);
    CHECK(r.residual_n / r.residual_2n == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("shipped instances converge at second order") {
    auto instances = audit_instances();
    REQUIRE(instances.size() >= 5);
    std::set<std::string> cases;
    for (const auto& in : instances) {
        cases.insert(in.cases.begin(), in.cases.end());
        for (const auto& l : in.laws) {
            INFO(in.id << ": " << l.label);
            CHECK(verify(in.eq, l.F, l.G).valid);
        }
        auto rs = convergence_orders(in.eq, in.config, in.laws);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            INFO(in.id << ": " << in.laws[i].label << " R = " << rs[i].residual_n);
            CHECK(rs[i].residual_n < 1e-5);
            REQUIRE_FALSE(rs[i].saturated());
            CHECK(*rs[i].order >= 1.5);
            CHECK(*rs[i].order <= 2.5);
        }
    }
    CHECK(cases.count("1"));
    CHECK(cases.count("3"));
    CHECK(cases.count("5a"));

    AuditInstance bad = corrupted_control();
    auto rs = convergence_orders(bad.eq, bad.config, bad.laws);
    for (const auto& r : rs) {
        CHECK(r.residual_n > 1e-2);
        CHECK(r.residual_2n > 0.5 * r.residual_n);
    }
}

TEST_CASE("solver and audit errors") {
    SimConfig c;
    c.N = 8;
    CHECK_THROWS_AS(solve(heat(), c), Error);
    c.N = 64;
    CHECK_THROWS_AS(solve(Equation::make(Expr(1), Expr(1), Expr(1), Expr(-1), Expr(0)), c), DomainError);
    CHECK_THROWS_AS(solve(Equation::make(parse("x"), Expr(1), Expr(1), Expr(1), Expr(0)), c), DomainError);
    CHECK_THROWS_AS(solve(Equation::make(Expr(1), parse("x^2"), Expr(1), Expr(1), Expr(0)), c), Error);
    CHECK_THROWS_AS(solve(heat(), SimConfig{0, 1, 64, 1, Boundary::Dirichlet, {"square"}, 4}), Error);

    Equation fast = Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(5000));
    SimConfig q{0, 1, 16, 0.01, Boundary::Dirichlet, {"gaussian", 1, 0.5, 0.1, 0}, 4};
    CHECK_THROWS_WITH_AS(solve(fast, q), doctest::Contains("instability"), Error);

    c.T = 0.01;
    Solution sol = solve(heat(), c);
    CHECK_THROWS_AS(audit(sol, heat(), {{"opaque", parse("A(u)"), Expr(0)}}), MissingModelError);
    CHECK(parse_boundary("periodic") == Boundary::Periodic);
    CHECK_THROWS_AS(parse_boundary("open"), Error);
}
