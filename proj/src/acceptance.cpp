#include "jetcl/acceptance.hpp"

#include "jetcl/catalog.hpp"
#include "jetcl/contraction.hpp"
#include "jetcl/corpus.hpp"
#include "jetcl/equivalence.hpp"
#include "jetcl/errors.hpp"
#include "jetcl/jet.hpp"
#include "jetcl/numeric.hpp"
#include "jetcl/potential.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace jetcl {
namespace {

Expr mu() { return Expr::parameter("mu"); }

std::vector<Bindings> sample_bindings(const CatalogCase& c) {
    std::vector<Bindings> out{{}};
    for (const auto& v : c.samples) out.push_back({{mu(), Expr(v)}});
    return out;
}

std::string binding_label(const Bindings& b) {
    if (b.empty()) return "";
    std::ostringstream s;
    s << " (mu = " << b.begin()->second << ")";
    return s.str();
}

struct Tally {
    int checks = 0;
    int zero = 0;
    int probably = 0;
    std::vector<std::string> failures;

    void record(Tier tier, const std::string& what) {
        ++checks;
        if (tier == Tier::Zero)
            ++zero;
        else if (tier == Tier::ProbablyZero)
            ++probably;
        else
            fail(what);
    }
    void fail(const std::string& what) { failures.push_back(what); }
    bool ok() const { return failures.empty(); }
    std::string summary() const {
        std::ostringstream s;
        s << checks << " checks, " << zero << " Zero, " << probably << " ProbablyZero";
        if (!failures.empty()) {
            s << ", " << failures.size() << " failed: " << failures.front();
            if (failures.size() > 1) s << " and " << failures.size() - 1 << " more";
        }
        return s.str();
    }
};

CriterionResult golden_suite(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    Tally t;
    std::set<std::string> rows;
    auto start = std::chrono::steady_clock::now();
    for (const auto& c : catalog()) {
        rows.insert(c.id);
        for (const auto& b : sample_bindings(c)) {
            std::string where = "case " + c.id + binding_label(b);
            Equation host = instantiate_host(c, b);
            auto templates = templates_for(c, host, b);
            auto laws = laws_for(c, b, zo);
            if (laws.size() != templates.size()) {
                t.fail(where + ": law count");
                continue;
            }
            for (std::size_t i = 0; i < laws.size(); ++i) {
                std::string what = where + " law " + std::to_string(i + 1);
                Verification v = verify(host, laws[i].F, laws[i].G, zo);
                t.record(v.valid ? v.tier : Tier::NonZero, what);
                if (!(laws[i].lambda == templates[i].lambda)) t.fail(what + ": characteristic differs from the table");
            }
        }
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CriterionResult r;
    std::ostringstream d;
    d << rows.size() << " rows, " << t.summary();
    if (s >= 10.0) d << ", over the 10 s budget";
    r.detail = d.str();
    r.passed = t.ok() && rows.size() == 12 && s < 10.0;
    return r;
}

CriterionResult euler_annihilation(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    std::mt19937_64 rng(o.seed);
    CorpusOptions co;
    co.atoms = jet_atoms(2);
    co.depth = 3;
    co.max_terms = 40;
    Tally t;
    for (int i = 0; i < o.random_pairs; ++i) {
        Expr F = normalize(random_expr(rng, co));
        Expr G = normalize(random_expr(rng, co));
        t.record(is_zero(euler_operator(divergence(F, G)), {}, zo).tier, "pair " + std::to_string(i));
    }
    CriterionResult r;
    r.detail = std::to_string(o.random_pairs) + " pairs, " + t.summary();
    r.passed = t.ok() && o.random_pairs >= 200;
    return r;
}

CriterionResult cosymmetry(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    Tally t;
    for (const auto& c : catalog()) {
        for (const auto& b : sample_bindings(c)) {
            Equation host = instantiate_host(c, b);
            auto templates = templates_for(c, host, b);
            for (std::size_t i = 0; i < templates.size(); ++i)
                t.record(is_zero(adjoint_frechet_apply(host, templates[i].lambda), host.domain, zo).tier,
                         "case " + c.id + binding_label(b) + " law " + std::to_string(i + 1));
        }
    }
    CriterionResult r;
    r.detail = t.summary();
    r.passed = t.ok();
    return r;
}

void gauge_check(Tally& t, const ZeroTestOptions& zo) {
    Equation eq = Equation::make(parse("x^2 + 1"), parse("x^2"), parse("x"), parse("u^2 + 1"), parse("u"));
    EquivTransform tr = gauge(eq);
    tr.X_inverse = parse("-1/x");
    Equation img = apply_to_equation(tr, eq);
    if (!img.g.is_one()) t.fail("gauge: g~ is not 1");
    Expr expected = substitute(eq.g * eq.f, {{sym::x(), *tr.X_inverse}});
    t.record(is_zero(img.f - expected, img.domain, zo).tier, "gauge: f~ differs from g f");
}

// Pushes every law of a case onto the B = 0 image and compares it with the
// 5a combination that has the same characteristic.
void reduction_check(Tally& t, const std::string& id, const PointTransform& pt, const Bindings& b,
                     const ZeroTestOptions& zo) {
    const CatalogCase& c = catalog_case(id);
    Equation src = instantiate_host(c, b);
    std::string where = "case " + id + binding_label(b);
    DerivedTarget d = derive_target(pt, src, zo);
    const Equation& tgt = d.target;
    const Match* m5a = nullptr;
    auto matches = match(tgt, zo);
    for (const auto& m : matches)
        if (m.entry->id == "5a") m5a = &m;
    if (!m5a) {
        t.fail(where + ": image is not a 5a equation");
        return;
    }
    auto basis = laws_for(*m5a, tgt, zo);
    for (const auto& l : templates_for(c, src, b)) {
        auto v = pushforward_vector(pt, src, tgt, l.F, l.G);
        Verification ver = verify(tgt, v.first, v.second, zo);
        t.record(ver.valid ? ver.tier : Tier::NonZero, where + ": pushed vector fails verify");
        Expr lam = normalize(pushforward_characteristic(pt, src, tgt, l.lambda, zo));
        Expr c1 = normalize(diff(lam, sym::x()));
        Expr c0 = normalize(lam - c1 * sym::x());
        bool constant = true;
        for (const Expr& k : {c0, c1})
            for (const Expr& var : {sym::t(), sym::x()})
                constant = constant && is_zero(diff(k, var), tgt.domain, zo).zero();
        if (!constant) {
            t.fail(where + ": image characteristic is not in the 5a span");
            continue;
        }
        ConservedVector w = linear_combination({{c0, basis[0]}, {c1, basis[1]}});
        if (equivalent(tgt, v, {w.F, w.G}, zo))
            t.record(Tier::Zero, where);
        else
            t.fail(where + ": pushed vector not equivalent to a 5a law");
    }
}

void corpus_check(Tally& t, std::uint64_t seed, const ZeroTestOptions& zo) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, 4);
    auto r = [&]() { return Expr(Rational(pick(rng) * (pick(rng) % 2 ? 1 : -1), pick(rng))); };
    const std::vector<std::string> ids = {"1", "3", "4", "5a", "6", "7", "8"};
    for (int i = 0; i < 20; ++i) {
        const CatalogCase& c = catalog_case(ids[i % ids.size()]);
        Bindings b = c.parameters.empty() ? Bindings{} : Bindings{{mu(), Expr(1)}};
        Equation eq = instantiate_host(c, b);
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
        std::string where = "transform " + std::to_string(i) + " on case " + c.id;
        for (const auto& l : templates_for(c, eq, b)) {
            auto v = pushforward_vector(pt, eq, img, l.F, l.G);
            Verification ver = verify(img, v.first, v.second, zo);
            t.record(ver.valid ? ver.tier : Tier::NonZero, where + ": pushed vector fails verify");
            Expr lv = characteristic_of(img, v.first, v.second, zo);
            Expr lp = pushforward_characteristic(pt, eq, img, l.lambda, zo);
            t.record(is_zero(reduce_mod_equation(lv - lp, img), img.domain, zo).tier,
                     where + ": characteristics disagree");
        }
    }
}

CriterionResult equivalence_suite(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    Tally gauge_t, reduce_t, corpus_t;
    gauge_check(gauge_t, zo);
    reduction_check(reduce_t, "5b", reduce_5b(), {}, zo);
    reduction_check(reduce_t, "5c", reduce_5c(), {}, zo);
    for (const auto& v : catalog_case("5d").samples)
        reduction_check(reduce_t, "5d", reduce_5d(Expr(v)), {{mu(), Expr(v)}}, zo);
    corpus_check(corpus_t, o.seed, zo);
    CriterionResult r;
    r.detail = "gauge: " + gauge_t.summary() + "; reductions: " + reduce_t.summary() +
               "; corpus of 20 transforms: " + corpus_t.summary();
    r.passed = gauge_t.ok() && reduce_t.ok() && corpus_t.ok();
    return r;
}

CriterionResult generation_replay(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    int steps = 0;
    std::vector<std::string> failed;
    for (const auto& id : generation_cases()) {
        for (const auto& s : demonstrate_generation(id, zo)) {
            ++steps;
            if (!s.passed) failed.push_back(id + ": " + s.description);
        }
    }
    CriterionResult r;
    std::ostringstream d;
    d << generation_cases().size() << " cases, " << steps << " steps, " << failed.size() << " failed";
    if (!failed.empty()) d << " (" << failed.front() << ")";
    r.detail = d.str();
    r.passed = failed.empty() && steps > 0;
    return r;
}

CriterionResult potential_suite(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    Tally systems, laws;
    for (const auto& s : listed_systems(zo)) {
        PotentialCheck c = compatibility(s, zo);
        if (c.tier == Tier::Zero)
            systems.record(Tier::Zero, s.id);
        else
            systems.fail("system " + s.id + " at " + tier_name(c.tier));
    }
    for (const auto& l : potential_laws(zo)) {
        PotentialCheck c = verify_potential_law(l.system, l.F, l.G, l.rules, zo);
        if (c.valid && c.tier == Tier::Zero)
            laws.record(Tier::Zero, l.id);
        else
            laws.fail("law " + l.id + " at " + tier_name(c.tier));
    }
    CriterionResult r;
    r.detail = "systems: " + systems.summary() + "; potential laws: " + laws.summary();
    r.passed = systems.ok() && laws.ok() && systems.checks == 15 && laws.checks == 4;
    return r;
}

const LimitItem& item(const LimitReport& r, const std::string& label) {
    for (const auto& i : r.items)
        if (i.label == label) return i;
    throw Error("missing correspondence " + label);
}

CriterionResult contraction_limits(const AcceptanceOptions&) {
    std::ostringstream d;
    d << std::setprecision(3);
    bool ok = true;

    LimitReport one = check_limit(power_contraction());
    bool exact = true;
    for (const auto& p : item(one, "lambda1").points)
        for (double e : p.errors) exact = exact && e == 0.0;
    ok = ok && exact;
    d << "power family: lambda1 error " << (exact ? "exactly 0" : "nonzero");

    const LimitItem& l2 = item(one, "lambda2");
    const PointSeries* center = nullptr;
    for (const auto& p : l2.points)
        if (p.t == 1.0 && p.x == 1.0) center = &p;
    if (!center) throw Error("point (1, 1) missing from the sample grid");
    bool center_ok = center->strictly_decreasing && center->errors.back() < 1e-3;
    ok = ok && center_ok;
    d << ", mu(lambda2 - lambda1) at (1, 1) final error " << center->errors.back()
      << (center->strictly_decreasing ? " strictly decreasing" : " not strictly decreasing");

    LimitReport two = check_limit(case7_contraction());
    const LimitItem& first = item(two, "lambda1");
    ok = ok && first.converges;
    d << "; case 7 family: first correspondence " << (first.converges ? "converges" : "does not converge")
      << " (final error " << first.final_error << ")";
    int converging = 0;
    for (const auto& i : two.items) {
        if (i.role != LimitRole::Alternative) continue;
        bool monotone = std::all_of(i.points.begin(), i.points.end(), [](const PointSeries& p) { return p.monotone; });
        d << ", " << i.label << (i.converges ? " converges" : " does not converge") << " (final error "
          << i.final_error << ")";
        if (i.converges) {
            ++converging;
            ok = ok && monotone;
            if (!monotone) d << " but not monotonically";
        }
    }
    ok = ok && converging > 0;

    CriterionResult r;
    r.detail = d.str();
    r.passed = ok;
    return r;
}

CriterionResult numeric_audits(const AcceptanceOptions&) {
    auto start = std::chrono::steady_clock::now();
    auto instances = audit_instances();
    std::set<std::string> cases;
    int laws = 0, potential_hosts = 0;
    double worst_r = 0.0, lo = 1e9, hi = -1e9;
    std::vector<std::string> failed;
    for (const auto& in : instances) {
        cases.insert(in.cases.begin(), in.cases.end());
        if (in.id.rfind("potential", 0) == 0) ++potential_hosts;
        auto rs = convergence_orders(in.eq, in.config, in.laws);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            ++laws;
            worst_r = std::max(worst_r, rs[i].residual_n);
            bool good = rs[i].residual_n < 1e-5 && !rs[i].saturated() && *rs[i].order >= 1.5 && *rs[i].order <= 2.5;
            if (!rs[i].saturated()) {
                lo = std::min(lo, *rs[i].order);
                hi = std::max(hi, *rs[i].order);
            }
            if (!good) failed.push_back(in.id + " " + in.laws[i].label);
        }
    }
    AuditInstance bad = corrupted_control();
    auto brs = convergence_orders(bad.eq, bad.config, bad.laws);
    bool control_fails =
        !brs.empty() && std::all_of(brs.begin(), brs.end(), [](const Refinement& r) { return r.residual_n >= 1e-5; });
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool spans = cases.count("1") && cases.count("3") && cases.count("5a") && potential_hosts > 0;
    std::ostringstream d;
    d << std::setprecision(3) << instances.size() << " instances, " << laws << " laws, max R at N = 512 " << worst_r
      << ", orders in [" << lo << ", " << hi << "], control " << (control_fails ? "fails" : "passes") << " the audit";
    if (!failed.empty()) d << ", failed: " << failed.front();
    if (!spans) d << ", instances do not span the required cases";
    if (s >= 60.0) d << ", over the 60 s budget";
    CriterionResult r;
    r.detail = d.str();
    r.passed = failed.empty() && instances.size() >= 5 && spans && control_fails && s < 60.0;
    return r;
}

CriterionResult negative_checks(const AcceptanceOptions& o) {
    ZeroTestOptions zo;
    zo.seed = o.seed;
    Expr x = sym::x(), u = sym::u(), t = sym::t();
    Equation generic = Equation::make(sym::f(x), Expr(1), sym::h(x), sym::A(u), sym::B(u));
    auto matches = match(generic, zo);

    Equation case1 = instantiate_host(catalog_case("1"));
    std::vector<std::pair<const Equation*, Expr>> wrong = {
        {&generic, sym::f(x)},
        {&generic, x * sym::f(x)},
        {&case1, t * sym::f(x)},
        {&case1, x * sym::f(x)},
        {&case1, exp(t) * sym::f(x)},
    };
    int nonzero = 0;
    for (const auto& [eq, F1] : wrong)
        if (is_zero(classifying_residual(*eq, F1), eq->domain, zo).tier == Tier::NonZero) ++nonzero;

    auto spots = negative_spot_checks(zo);
    int spot_nonzero = static_cast<int>(
        std::count_if(spots.begin(), spots.end(), [](const SpotCheck& s) { return s.tier == Tier::NonZero; }));

    std::ostringstream d;
    d << "generic equation matches " << matches.size() << " cases; " << nonzero << " of " << wrong.size()
      << " wrong candidates NonZero; potential spot checks " << spot_nonzero << " of " << spots.size() << " NonZero";
    CriterionResult r;
    r.detail = d.str();
    r.passed = matches.empty() && nonzero == static_cast<int>(wrong.size()) && nonzero >= 3 &&
               spot_nonzero == static_cast<int>(spots.size());
    return r;
}

}  // namespace

std::string criterion_title(int id) {
    switch (id) {
    case 1: return "golden suite of the classification table";
    case 2: return "Euler operator annihilates divergences";
    case 3: return "characteristics are cosymmetries";
    case 4: return "equivalence group suite";
    case 5: return "generating set replay";
    case 6: return "potential systems and potential laws";
    case 7: return "contraction limits";
    case 8: return "numeric conservation audits";
    case 9: return "negative spot checks";
    default: throw Error("no acceptance criterion " + std::to_string(id));
    }
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
    CriterionResult r;
    std::string title = criterion_title(id);
    auto start = std::chrono::steady_clock::now();
    try {
        switch (id) {
        case 1: r = golden_suite(options); break;
        case 2: r = euler_annihilation(options); break;
        case 3: r = cosymmetry(options); break;
        case 4: r = equivalence_suite(options); break;
        case 5: r = generation_replay(options); break;
        case 6: r = potential_suite(options); break;
        case 7: r = contraction_limits(options); break;
        case 8: r = numeric_audits(options); break;
        case 9: r = negative_checks(options); break;
        }
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.id = id;
    r.title = title;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress) {
    std::vector<int> ids = options.only;
    if (ids.empty())
        for (int i = 1; i <= 9; ++i) ids.push_back(i);
    std::vector<CriterionResult> out;
    for (int id : ids) {
        out.push_back(run_criterion(id, options));
        if (progress) progress(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream s;
    s << "criterion " << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << r.title << " (" << r.detail << ") ["
      << std::fixed << std::setprecision(2) << r.seconds << " s]";
    return s.str();
}

}  // namespace jetcl
