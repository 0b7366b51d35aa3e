#include <doctest.h>

#include "jetcl/catalog.hpp"
#include "jetcl/errors.hpp"

#include <fstream>
#include <sstream>

using namespace jetcl;

namespace {

SymbolTable mu_table() {
    SymbolTable t = SymbolTable::standard();
    t.declare_parameter("mu");
    return t;
}

Expr mu() { return Expr::parameter("mu"); }

std::vector<std::string> ids(const std::vector<Match>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms) out.push_back(m.entry->id);
    return out;
}

}  // namespace

TEST_CASE("every catalog row verifies with its listed characteristic") {
    for (const auto& c : catalog()) {
        std::vector<Bindings> bindings{{}};
        for (const auto& v : c.samples) bindings.push_back({{mu(), Expr(v)}});
        for (const auto& b : bindings) {
            Equation host = instantiate_host(c, b);
            auto templates = templates_for(c, host, b);
            auto laws = laws_for(c, b);
            REQUIRE(laws.size() == templates.size());
            for (std::size_t i = 0; i < laws.size(); ++i) {
                INFO("case " << c.id << " law " << i + 1);
                CHECK(laws[i].lambda == templates[i].lambda);
                CHECK(is_zero(adjoint_frechet_apply(host, laws[i].lambda), host.domain).zero());
                CHECK(is_zero(classifying_residual(host, diff(laws[i].F, sym::u())), host.domain).zero());
            }
        }
    }
}

TEST_CASE("laws_for examples") {
    auto l7 = laws_for(catalog_case("7"), {{mu(), Expr(1)}});
    REQUIRE(l7.size() == 2);
    CHECK(l7[0].lambda == parse("exp(3*t)*(x - 1)"));
    CHECK(l7[1].lambda == parse("exp(t)*(x + 1)"));
    auto l9 = laws_for(catalog_case("9"));
    REQUIRE(l9.size() == 1);
    CHECK(l9[0].F == parse("alpha(t,x)*f(x)*u"));
    CHECK(l9[0].G == parse("-alpha(t,x)*u_x + alpha[0,1](t,x)*u"));
    auto l5 = laws_for(catalog_case("5a"));
    REQUIRE(l5.size() == 2);
    CHECK(l5[0].lambda == Expr(1));
    CHECK(l5[1].lambda == sym::x());
    CHECK_THROWS_AS(laws_for(catalog_case("1"), {{mu(), Expr(1)}}), Error);
}

TEST_CASE("match") {
    Expr x = sym::x(), u = sym::u();
    auto m = match(Equation::make(Expr(1), Expr(1), Expr(1), sym::A(u), sym::B(u)));
    CHECK(ids(m) == std::vector<std::string>{"1"});

    m = match(Equation::make(parse("x^2"), Expr(1), parse("x^3"), sym::A(u), Expr(1)));
    REQUIRE(ids(m) == std::vector<std::string>{"5d"});
    CHECK(m[0].parameters.at(mu()) == Expr(3));

    m = match(Equation::make(Expr(1), Expr(1), Expr(1), sym::A(u), u));
    CHECK(ids(m) == std::vector<std::string>{"1"});

    m = match(Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), sym::B(u)));
    CHECK(m.empty());

    m = match(Equation::make(parse("(x - 1)^(1/2)*(x + 1)^(-7/2)"), Expr(1), parse("(x - 1)^(3/2)*(x + 1)^(-5/2)"),
                             sym::A(u), Expr(1)));
    REQUIRE(ids(m) == std::vector<std::string>{"7"});
    CHECK(m[0].parameters.at(mu()) == Expr(2));

    Equation lin = Equation::make(parse("x^2 + 1"), Expr(1), sym::h(x), Expr(1), Expr(0));
    m = match(lin);
    CHECK(ids(m) == std::vector<std::string>{"5a", "9"});
    auto laws = laws_for(m[1], lin);
    REQUIRE(laws.size() == 1);
    CHECK(laws[0].lambda == parse("alpha(t,x)"));

    Equation gauged = Equation::make(Expr(1), parse("x"), Expr(1), sym::A(u), sym::B(u));
    CHECK_THROWS_AS(match(gauged), Error);
}

TEST_CASE("matched laws specialize to the user equation") {
    Expr u = sym::u();
    Equation eq = Equation::make(parse("x^2"), Expr(1), parse("x^3"), parse("1 + u^2"), Expr(1));
    auto m = match(eq);
    REQUIRE(ids(m) == std::vector<std::string>{"5d"});
    auto laws = laws_for(m[0], eq);
    REQUIRE(laws.size() == 2);
    CHECK(laws[1].lambda == parse("exp(4*t)*x"));
    CHECK(laws[1].G == parse("exp(4*t)*(-x*(1 + u^2)*u_x - x^4*u + u + u^3/3)"));
}

TEST_CASE("determining system") {
    Expr x = sym::x(), u = sym::u();
    Equation generic = Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), sym::B(u));
    DeterminingSystem s = determining_system(generic, Expr::opaque("F1", {sym::t(), x}));
    CHECK(s.flux_linear.is_zero());
    CHECK(s.flux_coupling.is_zero());

    Equation c1 = Equation::make(sym::f(x), Expr(1), Expr(1), sym::A(u), sym::B(u));
    s = determining_system(c1, sym::f(x));
    CHECK(s.balance.is_zero());
    CHECK(s.classifying.is_zero());

    Equation c1h = Equation::make(sym::f(x), Expr(1), Expr(1), sym::A(u), sym::B(u));
    CHECK(classifying_residual(c1h, sym::t() * sym::f(x)) == sym::f(x));
}

TEST_CASE("classifying residual") {
    Expr x = sym::x(), u = sym::u();
    Equation c3 = instantiate_host(catalog_case("3"));
    CHECK(classifying_residual(c3, parse("exp(t)*h[1](x)")).is_zero());
    Equation c5 = instantiate_host(catalog_case("5a"));
    CHECK(classifying_residual(c5, parse("x*f(x)")).is_zero());
    Equation generic = Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), sym::B(u));
    CHECK_FALSE(is_zero(classifying_residual(generic, sym::f(x))).zero());
    CHECK_FALSE(is_zero(classifying_residual(generic, parse("x*f(x)"))).zero());
    CHECK_FALSE(is_zero(classifying_residual(generic, parse("exp(t)*f(x)"))).zero());
}

TEST_CASE("span rank") {
    Expr u = sym::u();
    CHECK(span_rank({sym::A(u), sym::B(u), Expr(1)}, u) == 3);
    CHECK(span_rank({sym::A(u), parse("2*A(u) + 3"), Expr(1)}, u) == 2);
    CHECK(span_rank({parse("u^2"), u, Expr(1)}, u) == 3);
    CHECK(span_rank({Expr(0)}, u) == 0);
}

TEST_CASE("catalog file is byte-stable and parses back") {
    std::string text = catalog_text();
    CHECK(text == catalog_text());
    std::ifstream in(std::string(JETCL_SOURCE_DIR) + "/data/catalog.txt");
    REQUIRE(in);
    std::stringstream golden;
    golden << in.rdbuf();
    CHECK(golden.str() == text);

    CaseFile file = parse_casefile(text);
    auto laws = file.named("law");
    std::size_t n = 0;
    for (const auto& c : catalog()) n += c.laws.size();
    REQUIRE(laws.size() == n);
    std::size_t k = 0;
    for (const auto& c : catalog())
        for (const auto& l : c.laws) {
            const CaseSection* s = laws[k++];
            CHECK(parse_entry(*s->find("F"), mu_table()) == l.F);
            CHECK(parse_entry(*s->find("G"), mu_table()) == l.G);
            CHECK(parse_entry(*s->find("lambda"), mu_table()) == l.lambda);
        }
}
