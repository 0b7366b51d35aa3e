#include <doctest.h>

#include "jetcl/catalog.hpp"
#include "jetcl/equivalence.hpp"
#include "jetcl/errors.hpp"

#include <random>

using namespace jetcl;

namespace {

Equation generic() {
    Expr x = sym::x(), u = sym::u();
    return Equation::make(sym::f(x), sym::g(x), sym::h(x), sym::A(u), sym::B(u));
}

bool same_value(const Expr& a, const Expr& b, const SampleDomain& d = {}) { return is_zero(a - b, d).zero(); }

}  // namespace

TEST_CASE("gauge transformation normalizes g") {
    Equation eq = Equation::make(parse("x^2 + 1"), parse("x^2"), parse("x"), parse("u^2 + 1"), parse("u"));
    EquivTransform tr = gauge(eq);
    CHECK(tr.X == parse("-1/x"));
    tr.X_inverse = parse("-1/x");
    Equation img = apply_to_equation(tr, eq);
    CHECK(img.g.is_one());
    CHECK(same_value(img.f, substitute(eq.g * eq.f, {{sym::x(), parse("-1/x")}}), img.domain));
    PointTransform pt = tr.point(eq.domain);
    CHECK(same_value(operator_factor(pt, eq, img), parse("x^2"), img.domain));
}

TEST_CASE("gauge with an opaque inverse") {
    Equation eq = Equation::make(parse("1"), parse("exp(-x)"), parse("1"), parse("A(u)"), parse("0"));
    EquivTransform tr = gauge(eq);
    CHECK(tr.X == parse("exp(x)"));
    Equation img = apply_to_equation(tr, eq);
    CHECK(img.g.is_one());
    PointTransform pt = tr.point(eq.domain);
    CHECK(pt.rules.size() == 1);
    Expr k = operator_factor(pt, eq, img);
    CHECK(k == parse("exp(Xinv(x))", SymbolTable::standard().declare_function("Xinv", 1)));
    CHECK(verify(eq, sym::u(), parse("-exp(-x)*A(u)*u_x")).valid);
    auto img_v = pushforward_vector(pt, eq, img, sym::u(), parse("-exp(-x)*A(u)*u_x"));
    CHECK(verify(img, img_v.first, img_v.second).valid);
}

TEST_CASE("extended group action on the arbitrary elements") {
    Equation eq = generic();
    EquivTransform tr;
    tr.e4 = Expr(3);
    tr.e3 = Expr(2);
    Equation img = apply_to_equation(tr, eq);
    CHECK(img.B == parse("2*B(u) + 6*A(u)"));
    CHECK(img.int_b == parse("2*IntB(u) + 6*IntA(u)"));
    PointTransform pt = tr.point(eq.domain);
    CHECK_NOTHROW(operator_factor(pt, eq, img));

    EquivTransform big;
    big.d1 = Expr(2);
    big.d2 = Expr(Rational(1, 3));
    big.d3 = Expr(-3);
    big.d4 = Expr(1);
    big.e1 = Expr(5);
    big.e2 = Expr(Rational(1, 2));
    big.e3 = Expr(7);
    big.e4 = Expr(-1);
    big.X = parse("2*x - 1");
    Equation img2 = apply_to_equation(big, eq);
    CHECK(img2.A == parse("A((u - 1)/(-3))/2"));
    CHECK_NOTHROW(operator_factor(big.point(eq.domain), eq, img2));
    CHECK_THROWS_AS(operator_factor(big.point(eq.domain), eq, eq), Error);
}

TEST_CASE("translation of the second law of 5a") {
    auto steps = demonstrate_generation("5a");
    REQUIRE(steps.size() == 1);
    INFO(steps[0].detail);
    CHECK(steps[0].passed);
    auto f1 = demonstrate_generation("5a-f1");
    REQUIRE(f1.size() == 2);
    CHECK(f1[0].passed);
    INFO(f1[1].detail);
    CHECK(f1[1].passed);
    CHECK(f1[1].detail.find("(-u, -A u_x) is not conserved") != std::string::npos);
}

TEST_CASE("maps of 5b, 5c and 5d onto B = 0") {
    Expr A = sym::A(sym::u());
    SUBCASE("5b") {
        Equation src = instantiate_host(catalog_case("5b"));
        DerivedTarget d = derive_target(reduce_5b(), src);
        CHECK(d.target.B.is_zero());
        CHECK(d.target.f.is_one());
        CHECK(d.target.A == A);
        CHECK(d.kappa.is_one());
        Expr lam = pushforward_characteristic(reduce_5b(), src, d.target, parse("x + t"));
        CHECK(lam == sym::x());
    }
    SUBCASE("5c") {
        Equation src = instantiate_host(catalog_case("5c"));
        DerivedTarget d = derive_target(reduce_5c(), src);
        CHECK(d.target.B.is_zero());
        CHECK(same_value(d.target.f, parse("exp(x)"), d.target.domain));
        Expr lam = pushforward_characteristic(reduce_5c(), src, d.target, parse("exp(t)*(x + t)"));
        CHECK(same_value(lam, sym::x(), d.target.domain));
        Expr one = pushforward_characteristic(reduce_5c(), src, d.target, parse("exp(t)"));
        CHECK(same_value(one, Expr(1), d.target.domain));
    }
    SUBCASE("5d") {
        for (int m : {0, 1, 2, -1}) {
            Expr mu(m);
            Equation src = instantiate_host(catalog_case("5d"), {{Expr::parameter("mu"), mu}});
            PointTransform pt = reduce_5d(mu);
            DerivedTarget d = derive_target(pt, src);
            INFO("mu = " << m << ", f~ = " << d.target.f);
            CHECK(d.target.B.is_zero());
            CHECK(same_value(d.target.f, pow(sym::x(), mu - 1), d.target.domain));
            auto ts = templates_for(catalog_case("5d"), src, {{Expr::parameter("mu"), mu}});
            for (const auto& l : ts) {
                Expr lam = pushforward_characteristic(pt, src, d.target, l.lambda);
                CHECK(is_zero(adjoint_frechet_apply(d.target, lam), d.target.domain).zero());
                auto v = pushforward_vector(pt, src, d.target, l.F, l.G);
                CHECK(verify(d.target, v.first, v.second).valid);
            }
        }
    }
}

TEST_CASE("reflection of case 7") {
    auto steps = demonstrate_generation("7");
    REQUIRE(steps.size() == 4);
    for (const auto& s : steps) {
        INFO(s.description << ": " << s.detail);
        CHECK(s.passed);
    }
}

TEST_CASE("generation replays") {
    for (const auto& id : generation_cases()) {
        for (const auto& s : demonstrate_generation(id)) {
            INFO(id << ": " << s.description << ": " << s.detail);
            CHECK(s.passed);
        }
    }
    CHECK_THROWS_AS(demonstrate_generation("9"), Error);
}

TEST_CASE("infinitesimal action") {
    Equation heat = Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(0));
    auto v = infinitesimal_action(heat, {Expr(0), Expr(1), Expr(0)}, parse("x*u"), parse("-x*u_x + u"));
    CHECK(v.first == parse("-u"));
    CHECK(v.second == parse("u_x"));
    Equation c6 = instantiate_host(catalog_case("6"));
    auto ts = templates_for(catalog_case("6"), c6, {});
    auto w = infinitesimal_action(c6, {Expr(1), Expr(0), Expr(0)}, ts[0].F, ts[0].G);
    CHECK(equivalent(c6, w, {-Expr::parameter("mu") * ts[0].F, -Expr::parameter("mu") * ts[0].G}));
}

TEST_CASE("composition") {
    Equation eq = generic();
    EquivTransform a = translate_x(Expr(2)), b = translate_x(Expr(-2));
    EquivTransform id = compose(a, b);
    CHECK(id.X == sym::x());
    CHECK(apply_to_equation(id, eq).same_as(eq));

    eq = Equation::make(parse("f(x)"), parse("x"), parse("x^2"), parse("A(u)"), parse("B(u)"));
    EquivTransform s = scale(Expr(2), Expr(3), Expr(5));
    EquivTransform sh = shift_b(Expr(1));
    EquivTransform c = compose(sh, s);
    Equation seq = apply_to_equation(sh, apply_to_equation(s, eq));
    Equation once = apply_to_equation(c, eq);
    SampleDomain d = once.domain;
    for (auto [p, q] : {std::pair{seq.f, once.f}, {seq.g, once.g}, {seq.h, once.h}, {seq.A, once.A}, {seq.B, once.B}})
        CHECK(same_value(p, q, d));

    Equation gq = Equation::make(Expr(1), parse("x^2"), Expr(1), parse("A(u)"), Expr(0));
    EquivTransform g = gauge(gq);
    g.X_inverse = parse("-1/x");
    EquivTransform back = g;
    CHECK(compose(back, g).X == sym::x());
}

TEST_CASE("pushforward and characteristics agree on a transform corpus") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pick(1, 4);
    auto r = [&]() { return Expr(Rational(pick(rng) * (pick(rng) % 2 ? 1 : -1), pick(rng))); };
    const std::vector<std::string> ids = {"1", "3", "4", "5a", "6", "7", "8"};
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        const CatalogCase& c = catalog_case(ids[i % ids.size()]);
        Equation eq = instantiate_host(c, c.parameters.empty() ? Bindings{} : Bindings{{Expr::parameter("mu"), Expr(1)}});
        EquivTransform tr;
        tr.d1 = Expr(Rational(pick(rng)));
        tr.d2 = r();
        tr.d3 = r();
        tr.d4 = r();
        tr.e1 = r();
        tr.e2 = r();
        tr.e3 = r();
        tr.e4 = i % 3 == 0 ? r() : Expr(0);
        tr.X = i % 4 == 1 ? parse("x^3 + x") : Expr(Rational(pick(rng))) * sym::x() + r();
        Equation img = apply_to_equation(tr, eq);
        PointTransform pt = tr.point(eq.domain);
        auto ts = templates_for(c, eq, c.parameters.empty() ? Bindings{} : Bindings{{Expr::parameter("mu"), Expr(1)}});
        for (const auto& l : ts) {
            INFO("case " << c.id << ", transform " << i);
            auto v = pushforward_vector(pt, eq, img, l.F, l.G);
            CHECK(verify(img, v.first, v.second).valid);
            Expr lv = characteristic_of(img, v.first, v.second);
            Expr lp = pushforward_characteristic(pt, eq, img, l.lambda);
            CHECK(is_zero(reduce_mod_equation(lv - lp, img), img.domain).zero());
            ++checked;
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("transforms that leave the class are rejected") {
    PointTransform bad;
    bad.x_new = sym::x() + sym::u();
    CHECK_THROWS_AS(jacobian(bad), Error);
    Equation heat = Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), Expr(0));
    CHECK_THROWS_AS(named_transform("spin", heat, Expr(1)), Error);
}
