#include "jetcl/potential.hpp"

#include "jetcl/errors.hpp"

namespace jetcl {

namespace {

Expr v() { return Expr::jet("v"); }
Expr sigma() { return Expr::opaque("sigma", {sym::t(), v()}); }
Expr sigma(int nt, int nv) { return Expr::opaque("sigma", {sym::t(), v()}, {nt, nv}); }
Expr alpha(int nt = 0, int nx = 0) { return Expr::opaque("alpha", {sym::t(), sym::x()}, {nt, nx}); }

Equation with_rules(const Equation& eq, const RuleSet& extra) {
    Equation out = eq;
    out.rules.insert(out.rules.end(), extra.begin(), extra.end());
    return out;
}

PotentialCheck check(const Equation& eq, const Expr& e, const ZeroTestOptions& options) {
    Expr r = reduce_mod_equation(e, eq);
    ZeroTest z = is_zero(r, eq.domain, options);
    return {z.zero(), z.tier, r};
}

struct SystemSpec {
    std::string id;
    std::string case_id;
    std::string level;
    std::vector<std::pair<std::string, std::vector<Rational>>> potentials;
};

const std::vector<SystemSpec>& specs() {
    static const std::vector<SystemSpec> s = {
        {"1", "1", "simplest", {{"v", {1}}}},
        {"1", "5a", "simplest", {{"v", {1, 0}}}},
        {"2", "2", "simplest", {{"v", {1}}}},
        {"3", "3", "simplest", {{"v", {1}}}},
        {"4", "4", "simplest", {{"v", {1}}}},
        {"5", "5a", "simplest", {{"v", {0, 1}}}},
        {"6.1", "6", "simplest", {{"v", {1, 0}}}},
        {"6.2", "6", "simplest", {{"v", {0, 1}}}},
        {"7.1", "7", "simplest", {{"v", {Rational(1, 2), Rational(1, 2)}}}},
        {"7.2", "7", "simplest", {{"v", {Rational(1, 2), Rational(-1, 2)}}}},
        {"7.3", "7", "simplest", {{"v", {1, 0}}}},
        {"8", "8", "simplest", {{"v", {1, 0}}}},
        {"5'", "5a", "extended", {{"v", {1, 0}}, {"w", {0, 1}}}},
        {"6'", "6", "extended", {{"v", {1, 0}}, {"w", {0, 1}}}},
        {"7'", "7", "extended", {{"v", {1, 0}}, {"w", {0, 1}}}},
        {"8'", "8", "extended", {{"v", {1, 0}}, {"w", {0, 1}}}},
    };
    return s;
}

PotentialSystem instantiate(const SystemSpec& spec, const std::vector<ConservedVector>& laws,
                            const ZeroTestOptions& options) {
    PotentialSystem sys;
    bool first = true;
    for (const auto& [name, coeffs] : spec.potentials) {
        std::vector<std::pair<Expr, ConservedVector>> parts;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i] != 0) parts.push_back({Expr(coeffs[i]), laws.at(i)});
        ConservedVector law = linear_combination(parts);
        if (first) {
            sys = build(law.eq, law.F, law.G, name, options);
            first = false;
        } else {
            add_potential(sys, law.F, law.G, name, options);
        }
    }
    sys.id = spec.id;
    sys.level = spec.level;
    return sys;
}

std::vector<PotentialSystem> enumerate(const Equation& eq, const std::string& level, const ZeroTestOptions& options) {
    std::vector<PotentialSystem> out;
    for (const auto& m : match(eq, options)) {
        if (m.entry->id == "9") continue;
        std::vector<ConservedVector> laws;
        for (const auto& spec : specs()) {
            if (spec.case_id != m.entry->id || spec.level != level) continue;
            if (laws.empty()) laws = laws_for(m, eq, options);
            out.push_back(instantiate(spec, laws, options));
        }
    }
    return out;
}

}  // namespace

RuleSet sigma_rule() { return {{"sigma", {sym::t(), v()}, 0, -sigma(0, 2)}}; }
RuleSet alpha_rule() { return {{"alpha", {sym::t(), sym::x()}, 0, -alpha(0, 2)}}; }

JetContext PotentialSystem::context(const RuleSet& extra) const {
    JetContext ctx = host->context();
    ctx.rules.insert(ctx.rules.end(), extra.begin(), extra.end());
    for (const auto& p : potentials) ctx.potentials.push_back({p.name, p.vx, p.vt});
    return ctx;
}

PotentialSystem build(std::shared_ptr<const Equation> eq, const Expr& F, const Expr& G, const std::string& name,
                      const ZeroTestOptions& options) {
    PotentialSystem sys;
    sys.host = std::move(eq);
    add_potential(sys, F, G, name, options);
    return sys;
}

void add_potential(PotentialSystem& sys, const Expr& F, const Expr& G, const std::string& name,
                   const ZeroTestOptions& options) {
    for (const auto& p : sys.potentials)
        if (p.name == name) throw Error("potential " + name + " already defined");
    Verification ver = verify(*sys.host, F, G, options);
    if (!ver.valid) throw Error("law fails verification, residual " + to_string(ver.residual));
    Expr lambda = characteristic_of(*sys.host, F, G, options);
    if (is_zero(reduce_mod_equation(lambda, *sys.host), sys.host->domain, options).zero()) sys.degenerate = true;
    sys.potentials.push_back({name, normalize(F), normalize(-G), lambda});
}

PotentialCheck compatibility(const PotentialSystem& sys, const ZeroTestOptions& options) {
    JetContext ctx = sys.host->context();
    PotentialCheck worst{true, Tier::Zero, Expr(0)};
    for (const auto& p : sys.potentials) {
        Expr e = total_derivative(p.vx, Dir::T, ctx) - total_derivative(p.vt, Dir::X, ctx);
        PotentialCheck c = check(*sys.host, e, options);
        if (!c.valid || (c.tier == Tier::ProbablyZero && worst.tier == Tier::Zero)) worst = c;
        if (!c.valid) break;
    }
    return worst;
}

PotentialCheck verify_potential_law(const PotentialSystem& sys, const Expr& F, const Expr& G, const RuleSet& rules,
                                    const ZeroTestOptions& options) {
    Equation eq = with_rules(*sys.host, rules);
    JetContext ctx = sys.context(rules);
    return check(eq, divergence(F, G, ctx), options);
}

std::vector<PotentialSystem> enumerate_simplest(const Equation& eq, const ZeroTestOptions& options) {
    auto out = enumerate(eq, "simplest", options);
    if (out.empty()) throw Error("equation matches no case with a listed potential system");
    return out;
}

std::vector<PotentialSystem> enumerate_extended(const Equation& eq, const ZeroTestOptions& options) {
    auto out = enumerate(eq, "extended", options);
    if (out.empty()) throw Error("extended systems need two independent laws; none listed for this equation");
    return out;
}

std::vector<PotentialSystem> listed_systems(const ZeroTestOptions& options) {
    std::vector<PotentialSystem> out;
    for (const auto& spec : specs()) {
        if (spec.id == "1" && spec.case_id == "5a") continue;
        auto laws = laws_for(catalog_case(spec.case_id), {}, options);
        out.push_back(instantiate(spec, laws, options));
    }
    return out;
}

std::vector<PotentialLaw> potential_laws(const ZeroTestOptions& options) {
    Expr u = sym::u(), ux = sym::u(1), x = sym::x();
    Expr A = sym::A(u);
    std::vector<PotentialLaw> out;
    {
        auto eq = std::make_shared<Equation>(Equation::make(Expr(1), Expr(1), Expr(1), A, sym::int_a(u) + u * A));
        eq->int_b = u * sym::int_a(u);
        auto sys = build(eq, u, -A * ux - eq->int_b, "v", options);
        sys.id = "1";
        out.push_back({"1", "int B = u int A, f = 1: D_t(e^v) - D_x(e^v int A) = 0", sys, exp(v()),
                       -exp(v()) * sym::int_a(u), {}});
    }
    {
        auto eq = std::make_shared<Equation>(Equation::make(Expr(1), Expr(1), Expr(1), pow(u, -2), Expr(0)));
        auto sys = build(eq, u, -pow(u, -2) * ux, "v", options);
        sys.id = "1";
        out.push_back({"2", "A = u^-2, B = 0, f = 1: D_t(sigma) + D_x(sigma_v/u) = 0", sys, sigma(),
                       sigma(0, 1) / u, sigma_rule()});
    }
    {
        auto eq = std::make_shared<Equation>(Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), 2 * u));
        auto sys = build(eq, u, -ux - eq->int_b, "v", options);
        sys.id = "1";
        out.push_back({"3", "A = 1, B = 2u, f = 1: D_t(alpha e^v) + D_x(alpha_x e^v - alpha u e^v) = 0", sys,
                       alpha() * exp(v()), alpha(0, 1) * exp(v()) - alpha() * u * exp(v()), alpha_rule()});
    }
    {
        auto eq = std::make_shared<Equation>(Equation::make(pow(x, -2), Expr(1), Expr(1), pow(u, -2), Expr(0)));
        auto sys = build(eq, x * eq->f * u, -x * eq->A * ux + eq->int_a, "v", options);
        sys.id = "5";
        out.push_back({"4", "A = u^-2, B = 0, f = x^-2: D_t(x^-2 sigma) + D_x(x^-1 sigma_v/u) = 0", sys,
                       pow(x, -2) * sigma(), sigma(0, 1) / (x * u), sigma_rule()});
    }
    return out;
}

PotentialLaw flipped_sign_variant(const ZeroTestOptions& options) {
    PotentialLaw law = potential_laws(options).front();
    law.id = "1-flipped";
    law.description = "int B = u int A, f = 1: D_t(e^v) + D_x(e^v int A) = 0";
    law.G = -law.G;
    return law;
}

Expr potential_classifying_residual(const Equation& eq, const Expr& lambda, const Expr& F, const Expr& Ghat,
                                    const RuleSet& rules) {
    Expr t = sym::t(), x = sym::x(), u = sym::u();
    Expr IA = eq.int_a;
    Expr hB = eq.B.is_zero() ? Expr(0) : eq.h * eq.B;
    Expr Fv = diff(F, v());
    Expr lx = diff(lambda, x);
    Expr r = diff(F, t) + Fv * (lambda * hB * u - lx * IA) - diff(lambda * Fv, x) * IA + diff(Ghat, x) -
             lambda * lambda * eq.f * diff(Fv, v()) * u * IA + lambda * eq.f * diff(Ghat, v()) * u;
    RuleSet all = eq.rules;
    all.insert(all.end(), rules.begin(), rules.end());
    return apply_rules(r, all);
}

std::vector<SpotCheck> negative_spot_checks(const ZeroTestOptions& options) {
    Expr u = sym::u();
    std::vector<SpotCheck> out;
    const std::vector<std::pair<std::string, Expr>> nonlinearities = {{"u", u}, {"exp(u)", exp(u)}};
    const std::vector<std::pair<std::string, std::size_t>> hosts = {{"3", 0}, {"4", 0}, {"5a", 1},
                                                                     {"6", 0}, {"7", 0}, {"8", 0}};
    for (const auto& [id, law_index] : hosts) {
        const CatalogCase& c = catalog_case(id);
        for (const auto& [aname, A] : nonlinearities) {
            Equation host = instantiate_host(c);
            Equation eq = Equation::make(host.f, host.g, host.h, A, host.B);
            eq.domain = host.domain;
            eq.parameters = host.parameters;
            Expr lambda = templates_for(c, eq, {}).at(law_index).lambda;
            Expr ratio = eq.B.is_zero() ? Expr(0) : divide(eq.h, eq.f);
            Expr w = pow(lambda, -2);
            const std::vector<std::tuple<std::string, Expr, Expr>> candidates = {
                {"lambda^-2 sigma", w * sigma(), -ratio * w * sigma()},
                {"sigma", sigma(), Expr(0)},
                {"exp(v)", exp(v()), Expr(0)},
            };
            for (const auto& [cname, F, Gh] : candidates) {
                Expr r = potential_classifying_residual(eq, lambda, F, Gh, sigma_rule());
                out.push_back({id, aname, cname, is_zero(r, eq.domain, options).tier});
            }
        }
    }
    return out;
}

}  // namespace jetcl
