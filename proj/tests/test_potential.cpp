#include <doctest.h>

#include "jetcl/errors.hpp"
#include "jetcl/potential.hpp"

using namespace jetcl;

namespace {

const PotentialSystem& find(const std::vector<PotentialSystem>& systems, const std::string& id) {
    for (const auto& s : systems)
        if (s.id == id) return s;
    throw Error("missing system " + id);
}

}  // namespace

TEST_CASE("build from a verified law") {
    auto laws = laws_for(catalog_case("1"));
    PotentialSystem sys = build(laws[0].eq, laws[0].F, laws[0].G);
    REQUIRE(sys.potentials.size() == 1);
    CHECK(sys.potentials[0].vx == parse("f(x)*u"));
    CHECK(sys.potentials[0].vt == parse("A(u)*u_x + IntB(u)"));
    CHECK(compatibility(sys).tier == Tier::Zero);
    CHECK_FALSE(sys.degenerate);

    auto l5 = laws_for(catalog_case("5a"));
    PotentialSystem s5 = build(l5[0].eq, l5[0].F, l5[0].G);
    CHECK(s5.potentials[0].vt == parse("A(u)*u_x"));

    Expr H = parse("x*u^2");
    auto heat = std::make_shared<const Equation>(Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(0)));
    PotentialSystem triv =
        build(heat, total_derivative(H, Dir::X), -reduce_mod_equation(total_derivative(H, Dir::T), *heat));
    CHECK(triv.degenerate);

    CHECK_THROWS_AS(build(heat, parse("u^2"), Expr(0)), Error);
    CHECK_THROWS_AS(add_potential(s5, l5[1].F, l5[1].G, "v"), Error);
}

TEST_CASE("listed systems are compatible") {
    auto systems = listed_systems();
    CHECK(systems.size() == 15);
    for (const auto& s : systems) {
        INFO("system " << s.id);
        PotentialCheck c = compatibility(s);
        CHECK(c.tier == Tier::Zero);
    }
    SymbolTable mu = SymbolTable::standard();
    mu.declare_parameter("mu");
    const PotentialSystem& s71 = find(systems, "7.1");
    CHECK(is_zero(s71.potentials[0].lambda - parse("exp(2*mu*t)*(x*cosh(t) - sinh(t))", mu)).zero());
    const PotentialSystem& s72 = find(systems, "7.2");
    CHECK(is_zero(s72.potentials[0].lambda - parse("exp(2*mu*t)*(x*sinh(t) - cosh(t))", mu)).zero());
    const PotentialSystem& s62 = find(systems, "6.2");
    Expr want = parse("exp(mu*t)*(t*x - 1)*(A(u)*u_x + exp(-mu/x)/x*u) - t*exp(mu*t)*IntA(u)", mu);
    CHECK(is_zero(s62.potentials[0].vt - want).zero());
    const PotentialSystem& s5p = find(systems, "5'");
    CHECK(s5p.potentials.size() == 2);
    CHECK(s5p.potentials[1].vt == parse("x*A(u)*u_x - IntA(u)"));
}

TEST_CASE("enumeration on concrete equations") {
    Expr u = sym::u();
    Equation c6 = Equation::make(parse("exp(-1/x)*x^-3"), Expr(1), parse("exp(-1/x)/x"), parse("u^2 + 1"), Expr(1));
    auto s6 = enumerate_simplest(c6);
    REQUIRE(s6.size() == 3);
    CHECK(s6[0].id == "4");
    CHECK(s6[1].id == "6.1");
    CHECK(s6[2].id == "6.2");
    CHECK(is_zero(s6[1].potentials[0].vx - parse("exp(t)*x*exp(-1/x)*x^-3*u")).zero());
    CHECK(is_zero(s6[0].potentials[0].vt - s6[1].potentials[0].vt).zero());

    Equation c7 = instantiate_host(catalog_case("7"), {{Expr::parameter("mu"), Expr(2)}});
    c7.A = parse("exp(u)");
    c7.int_a = Equation::antiderivative(c7.A);
    CHECK(enumerate_simplest(c7).size() == 3);

    Equation c8 = instantiate_host(catalog_case("8"), {{Expr::parameter("mu"), Expr(1)}});
    auto s8 = enumerate_simplest(c8);
    REQUIRE(s8.size() == 1);
    CHECK(s8[0].id == "8");
    auto e8 = enumerate_extended(c8);
    REQUIRE(e8.size() == 1);
    CHECK(e8[0].id == "8'");
    CHECK(e8[0].potentials[1].name == "w");

    Equation c5 = Equation::make(parse("x^3"), Expr(1), parse("x"), parse("u^-2"), Expr(0));
    auto s5 = enumerate_simplest(c5);
    CHECK(s5.size() == 2);
    CHECK(enumerate_extended(c5).at(0).id == "5'");

    Equation c1 = Equation::make(parse("x^3"), Expr(1), Expr(1), parse("u^2"), parse("u"));
    CHECK(enumerate_simplest(c1).at(0).id == "1");
    CHECK_THROWS_AS(enumerate_extended(c1), Error);
    Equation none = Equation::make(parse("x^3"), Expr(1), parse("x"), parse("u^2"), parse("u"));
    CHECK_THROWS_AS(enumerate_simplest(none), Error);
}

TEST_CASE("potential conservation laws") {
    auto laws = potential_laws();
    REQUIRE(laws.size() == 4);
    for (const auto& l : laws) {
        INFO("law " << l.id);
        CHECK(compatibility(l.system).tier == Tier::Zero);
        PotentialCheck c = verify_potential_law(l.system, l.F, l.G, l.rules);
        INFO("residual " << c.residual);
        CHECK(c.tier == Tier::Zero);
    }
    PotentialLaw flipped = flipped_sign_variant();
    PotentialCheck bad = verify_potential_law(flipped.system, flipped.F, flipped.G, flipped.rules);
    CHECK(bad.tier == Tier::NonZero);

    PotentialCheck no_rule = verify_potential_law(laws[1].system, laws[1].F, laws[1].G);
    CHECK(no_rule.tier == Tier::NonZero);
}

TEST_CASE("classifying residual of the potential systems") {
    Equation c5 = Equation::make(parse("x^-2"), Expr(1), Expr(1), parse("u^-2"), Expr(0));
    Expr sigma = Expr::opaque("sigma", {sym::t(), Expr::jet("v")});
    Expr r = potential_classifying_residual(c5, sym::x(), pow(sym::x(), -2) * sigma, Expr(0), sigma_rule());
    CHECK(r.is_zero());
    Expr r2 = potential_classifying_residual(c5, sym::x(), pow(sym::x(), -2) * sigma, Expr(0));
    CHECK_FALSE(is_zero(r2).zero());

    auto checks = negative_spot_checks();
    CHECK(checks.size() == 36);
    for (const auto& c : checks) {
        INFO(c.case_id << " A = " << c.nonlinearity << " F = " << c.candidate);
        CHECK(c.tier == Tier::NonZero);
    }
}
