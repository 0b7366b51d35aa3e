#include <doctest.h>

#include "jetcl/catalog.hpp"
#include "jetcl/contraction.hpp"
#include "jetcl/errors.hpp"

#include <cmath>

using namespace jetcl;

namespace {

const LimitItem& item(const LimitReport& r, const std::string& label) {
    for (const auto& i : r.items)
        if (i.label == label) return i;
    throw Error("missing item " + label);
}

const PointSeries& at(const LimitItem& i, double t, double x) {
    for (const auto& p : i.points)
        if (p.t == t && p.x == x) return p;
    throw Error("missing point");
}

}  // namespace

TEST_CASE("power family: exact first characteristic") {
    LimitReport r = check_limit(power_contraction());
    const LimitItem& l1 = item(r, "lambda1");
    REQUIRE(l1.points.size() == 9);
    for (const auto& p : l1.points)
        for (double e : p.errors) CHECK(e == 0.0);
    CHECK(l1.converges);
}

TEST_CASE("power family: second characteristic at (1, 1)") {
    LimitReport r = check_limit(power_contraction(), {{1.0, 1.0}});
    const double two_e = 5.436563656918090;
    for (const char* label : {"lambda2", "lambda2-expanded"}) {
        const PointSeries& p = at(item(r, label), 1.0, 1.0);
        CHECK(p.strictly_decreasing);
        CHECK(p.errors.back() < 1e-3);
        for (std::size_t i = 0; i < r.schedule.size(); ++i) {
            double mu = r.schedule[i];
            double oracle = std::exp(1.0) * (std::expm1(1.0 / mu) * mu + std::exp(1.0 / mu));
            CHECK(p.values[i] == doctest::Approx(oracle).epsilon(1e-10));
            CHECK(p.errors[i] == doctest::Approx(oracle - two_e).epsilon(1e-6));
        }
    }
    CHECK(item(r, "lambda2").converges);
    const LimitItem& rev = item(r, "lambda2-reversed");
    CHECK_FALSE(rev.converges);
    CHECK(rev.final_error == doctest::Approx(2 * two_e).epsilon(1e-3));
    CHECK(r.passed);
}

TEST_CASE("power family over the default grid") {
    LimitReport r = check_limit(power_contraction());
    const LimitItem& l2 = item(r, "lambda2");
    for (const auto& p : l2.points) CHECK(p.strictly_decreasing);
    CHECK(at(l2, 1.0, 1.5).errors.back() < 1e-3);
    CHECK(at(l2, 1.5, 1.0).errors.back() > 1e-3);
    CHECK_FALSE(r.passed);

    LimitReport eq = check_equation_limit(power_contraction());
    for (const auto& i : eq.items)
        for (const auto& p : i.points) CHECK(p.monotone);
    CHECK(at(item(eq, "f"), 1.0, 0.5).errors.back() == doctest::Approx(std::exp(0.5) - std::pow(1.00005, 9999.0)));
    CHECK(item(eq, "h").converges);
}

TEST_CASE("case 7 family") {
    LimitReport r = check_limit(case7_contraction());
    CHECK(item(r, "lambda1").converges);
    CHECK_FALSE(item(r, "lambda1-unscaled").converges);
    CHECK(item(r, "lambda2").converges);
    CHECK(item(r, "lambda2-asymmetric").converges);
    CHECK(item(r, "lambda2").final_error < 1e-7);
    CHECK(r.passed);

    LimitReport eq = check_equation_limit(case7_contraction());
    CHECK(eq.passed);
    LimitReport eq2 = check_equation_limit(case7_contraction(Rational(2)));
    CHECK(eq2.passed);
}

TEST_CASE("target characteristics are cosymmetries") {
    for (const auto& spec : {power_contraction(), case7_contraction(), case7_contraction(Rational(3))}) {
        for (const auto& c : check_targets(spec)) {
            INFO(spec.id << " " << c.label);
            CHECK(c.tier != Tier::NonZero);
        }
    }
}

TEST_CASE("identity contraction") {
    Equation eq = instantiate_host(catalog_case("5c"));
    ContractionSpec spec = identity_contraction(eq);
    LimitReport r = check_equation_limit(spec);
    CHECK(r.passed);
    for (const auto& i : r.items)
        for (const auto& p : i.points)
            for (double e : p.errors) CHECK(e == 0.0);
}

TEST_CASE("contraction input errors") {
    ContractionSpec spec = power_contraction();
    CHECK_THROWS_AS(check_limit(spec, default_sample_points(), {100.0, 10.0}), Error);
    spec.correspondences[0].source = parse("ln(x - 3)");
    CHECK_THROWS_AS(check_limit(spec), DomainError);
    spec.x_of = pow(sym::x(), Expr(2)) / contraction_parameter();
    CHECK_THROWS_AS(check_equation_limit(spec), Error);

    CHECK_THROWS_AS(contraction_from(parse_casefile("[contraction c]\nsource.f = 1\nsource.h = 1\ntarget.f = 1\n")),
                    CaseFileError);
    CHECK_THROWS_AS(contraction_from(parse_casefile("[contraction c]\nsource.f = 1\nsource.h = 1\nsource.A = u\n"
                                                    "target.f = 1\ntarget.h = 1\n")),
                    CaseFileError);
    ContractionSpec again = contraction_from(parse_casefile(contraction_text("case7-to-exponential")));
    CHECK(again.correspondences.size() == 4);
    CHECK(again.target.f == parse("x^-3*exp(-1/x)"));
}
