#include "jetcl/catalog.hpp"

#include "jetcl/errors.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace jetcl {

namespace {

SymbolTable table() {
    SymbolTable t = SymbolTable::standard();
    t.declare_parameter("mu");
    return t;
}

Expr P(const std::string& text) { return parse(text, table()); }

struct Builder {
    CatalogCase c;

    Builder(std::string id, std::string title) {
        c.id = std::move(id);
        c.title = std::move(title);
    }
    Builder& elements(const std::string& f, const std::string& h, const std::string& A, const std::string& B) {
        c.host = Equation::make(P(f), Expr(1), P(h), P(A), P(B));
        return *this;
    }
    Builder& parameter(const std::string& name, const std::string& solver) {
        c.parameters.push_back(name);
        c.solvers[name] = P(solver);
        c.host.parameters.push_back(name);
        c.samples = {Rational(0), Rational(1), Rational(2), Rational(-1)};
        return *this;
    }
    Builder& require(const std::string& e) {
        c.constraints.push_back({ConstraintKind::Identity, P(e)});
        return *this;
    }
    Builder& nonzero(const std::string& e) {
        c.constraints.push_back({ConstraintKind::NonZero, P(e)});
        return *this;
    }
    Builder& rule(const std::string& text) {
        c.host.rules.push_back(parse_rule({"rule", text, 0}, table()));
        return *this;
    }
    Builder& law(const std::string& F, const std::string& G, const std::string& lambda) {
        c.laws.push_back({specialize(P(F), c.host), specialize(P(G), c.host), P(lambda)});
        return *this;
    }
    // (lambda f u, -lambda (A u_x + h u) + lambda_x IntA), the form shared by the B = 1 cases.
    Builder& lambda_law(const std::string& lambda) {
        Expr l = P(lambda);
        Expr F = l * c.host.f * sym::u();
        Expr G = -l * (c.host.A * sym::u(1) + c.host.h * sym::u()) + diff(l, sym::x()) * c.host.int_a;
        c.laws.push_back({F, G, l});
        return *this;
    }
};

std::vector<CatalogCase> build() {
    std::vector<CatalogCase> out;
    const std::string rest = "B(u) - 1";

    out.push_back(Builder("1", "h = 1")
                      .elements("f(x)", "1", "A(u)", "B(u)")
                      .require("h(x) - 1")
                      .law("f(x)*u", "-A(u)*u_x - IntB(u)", "1")
                      .c);
    out.push_back(Builder("2", "A = 1, B_u != 0, f = -h (1/h)_xx")
                      .elements("-h(x)*(2*h[1](x)^2*h(x)^-3 - h[2](x)*h(x)^-2)", "h(x)", "1", "B(u)")
                      .require("A(u) - 1")
                      .nonzero("B[1](u)")
                      .require("f(x) + h(x)*(2*h[1](x)^2*h(x)^-3 - h[2](x)*h(x)^-2)")
                      .law("exp(t)*(2*h[1](x)^2*h(x)^-3 - h[2](x)*h(x)^-2)*u",
                           "exp(t)*(u_x/h(x) + h[1](x)*h(x)^-2*u + IntB(u))", "-exp(t)/h(x)")
                      .c);
    out.push_back(Builder("3", "B = 1, f = h_x")
                      .elements("h[1](x)", "h(x)", "A(u)", "1")
                      .require(rest)
                      .require("f(x) - h[1](x)")
                      .lambda_law("exp(t)")
                      .c);
    out.push_back(Builder("4", "B = 1, f = h_x + h/x")
                      .elements("h[1](x) + h(x)/x", "h(x)", "A(u)", "1")
                      .require(rest)
                      .require("f(x) - h[1](x) - h(x)/x")
                      .lambda_law("exp(t)*x")
                      .c);
    out.push_back(Builder("5a", "B = 0")
                      .elements("f(x)", "h(x)", "A(u)", "0")
                      .require("B(u)")
                      .law("f(x)*u", "-A(u)*u_x", "1")
                      .law("x*f(x)*u", "-x*A(u)*u_x + IntA(u)", "x")
                      .c);
    out.push_back(Builder("5b", "B = 1, f = 1, h = 1")
                      .elements("1", "1", "A(u)", "1")
                      .require(rest)
                      .require("f(x) - 1")
                      .require("h(x) - 1")
                      .lambda_law("1")
                      .lambda_law("x + t")
                      .c);
    out.push_back(Builder("5c", "B = 1, f = exp(x), h = exp(x)")
                      .elements("exp(x)", "exp(x)", "A(u)", "1")
                      .require(rest)
                      .require("f(x) - exp(x)")
                      .require("h(x) - exp(x)")
                      .lambda_law("exp(t)")
                      .lambda_law("exp(t)*(x + t)")
                      .c);
    out.push_back(Builder("5d", "B = 1, f = x^(mu-1), h = x^mu")
                      .elements("x^(mu - 1)", "x^mu", "A(u)", "1")
                      .parameter("mu", "x*h[1](x)/h(x)")
                      .require(rest)
                      .require("f(x) - x^(mu - 1)")
                      .require("h(x) - x^mu")
                      .lambda_law("exp(mu*t)")
                      .lambda_law("exp((mu + 1)*t)*x")
                      .c);
    out.push_back(Builder("6", "B = 1, f = exp(-mu/x) x^-3, h = exp(-mu/x)/x")
                      .elements("exp(-mu/x)*x^-3", "exp(-mu/x)/x", "A(u)", "1")
                      .parameter("mu", "x^2*h[1](x)/h(x) + x")
                      .require(rest)
                      .require("f(x) - exp(-mu/x)*x^-3")
                      .require("h(x) - exp(-mu/x)/x")
                      .lambda_law("exp(mu*t)*x")
                      .lambda_law("exp(mu*t)*(t*x - 1)")
                      .c);
    CatalogCase c7 = Builder("7", "B = 1, f = (x-1)^(mu-3/2) (x+1)^(-mu-3/2), h = (x-1)^(mu-1/2) (x+1)^(-mu-1/2), x > 1")
                         .elements("(x - 1)^(mu - 3/2)*(x + 1)^(-mu - 3/2)", "(x - 1)^(mu - 1/2)*(x + 1)^(-mu - 1/2)",
                                   "A(u)", "1")
                         .parameter("mu", "((x^2 - 1)*h[1](x)/h(x) + x)/2")
                         .require(rest)
                         .require("f(x) - (x - 1)^(mu - 3/2)*(x + 1)^(-mu - 3/2)")
                         .require("h(x) - (x - 1)^(mu - 1/2)*(x + 1)^(-mu - 1/2)")
                         .lambda_law("exp((2*mu + 1)*t)*(x - 1)")
                         .lambda_law("exp((2*mu - 1)*t)*(x + 1)")
                         .c;
    c7.host.domain.set("x", 1.2, 2.2);
    out.push_back(c7);
    out.push_back(Builder("8", "B = 1, f = exp(mu atan(x)) (x^2+1)^(-3/2), h = exp(mu atan(x)) (x^2+1)^(-1/2)")
                      .elements("exp(mu*atan(x))*(x^2 + 1)^(-3/2)", "exp(mu*atan(x))*(x^2 + 1)^(-1/2)", "A(u)", "1")
                      .parameter("mu", "(x^2 + 1)*h[1](x)/h(x) + x")
                      .require(rest)
                      .require("f(x) - exp(mu*atan(x))*(x^2 + 1)^(-3/2)")
                      .require("h(x) - exp(mu*atan(x))*(x^2 + 1)^(-1/2)")
                      .lambda_law("exp(mu*t)*(x*cos(t) + sin(t))")
                      .lambda_law("exp(mu*t)*(x*sin(t) - cos(t))")
                      .c);
    out.push_back(Builder("9", "A = 1, B = 0, f alpha_t + alpha_xx = 0")
                      .elements("f(x)", "h(x)", "1", "0")
                      .rule("alpha[1,0](t,x) = -alpha[0,2](t,x)/f(x)")
                      .require("A(u) - 1")
                      .require("B(u)")
                      .law("alpha(t,x)*f(x)*u", "-alpha(t,x)*u_x + alpha[0,1](t,x)*u", "alpha(t,x)")
                      .c);
    return out;
}

std::optional<Rational> rationalize(double v) {
    if (!std::isfinite(v)) return std::nullopt;
    for (long q = 1; q <= 1000; ++q) {
        double p = std::round(v * static_cast<double>(q));
        if (std::abs(v - p / static_cast<double>(q)) < 1e-9 * std::max(1.0, std::abs(v)))
            return Rational(static_cast<long>(p), q);
    }
    return std::nullopt;
}

bool is_constant(const Expr& e) {
    for (const auto& s : free_symbols(e))
        if (s.role() != Role::Parameter) return false;
    return !contains_kind(e, Kind::Opaque) && !contains_kind(e, Kind::Primitive);
}

std::optional<Expr> solve_parameter(const Expr& solver, const Equation& eq, const ZeroTestOptions& options) {
    if (is_constant(solver)) return solver;
    RandomModel model(options.seed);
    std::mt19937_64 rng(options.seed);
    std::optional<Rational> value;
    for (int attempt = 0, good = 0; attempt < options.max_retries && good < 2; ++attempt) {
        try {
            double v = eval_numeric(solver, sample_point(free_symbols(solver), eq.domain, rng), model);
            auto r = rationalize(v);
            if (!r || (value && *value != *r)) return std::nullopt;
            value = r;
            ++good;
        } catch (const DomainError&) {
        }
    }
    if (!value) return std::nullopt;
    return Expr(*value);
}

}  // namespace

const std::vector<CatalogCase>& catalog() {
    static const std::vector<CatalogCase> cases = build();
    return cases;
}

const CatalogCase& catalog_case(const std::string& id) {
    for (const auto& c : catalog())
        if (c.id == id) return c;
    throw Error("unknown catalog case '" + id + "'");
}

std::map<std::string, FunctionDef> generic_definitions(const Equation& eq) {
    Expr x = sym::x(), u = sym::u();
    return {{"f", {{x}, eq.f}}, {"g", {{x}, eq.g}}, {"h", {{x}, eq.h}}, {"A", {{u}, eq.A}}, {"B", {{u}, eq.B}}};
}

Expr specialize(const Expr& generic, const Equation& eq) {
    Expr u = sym::u();
    Expr e = replace_subtrees(generic, {{sym::int_a(u), eq.int_a}, {sym::int_b(u), eq.int_b}});
    return substitute_functions(e, generic_definitions(eq));
}

Equation instantiate_host(const CatalogCase& entry, const Bindings& parameters) {
    for (const auto& [p, v] : parameters) {
        bool known = false;
        for (const auto& name : entry.parameters) known = known || p == Expr::parameter(name);
        if (!known) throw Error("case " + entry.id + " has no parameter " + to_string(p));
    }
    const Equation& h = entry.host;
    Equation eq = Equation::make(substitute(h.f, parameters), h.g, substitute(h.h, parameters), h.A, h.B);
    eq.domain = h.domain;
    eq.order_cap = h.order_cap;
    for (const auto& p : h.parameters)
        if (!parameters.count(Expr::parameter(p))) eq.parameters.push_back(p);
    for (auto r : h.rules) {
        r.rule = substitute(r.rule, parameters);
        eq.rules.push_back(std::move(r));
    }
    return eq;
}

std::vector<LawTemplate> templates_for(const CatalogCase& entry, const Equation& eq, const Bindings& parameters) {
    std::vector<LawTemplate> out;
    for (const auto& l : entry.laws)
        out.push_back({specialize(substitute(l.F, parameters), eq), specialize(substitute(l.G, parameters), eq),
                       specialize(substitute(l.lambda, parameters), eq)});
    return out;
}

namespace {

std::vector<ConservedVector> build_laws(const CatalogCase& entry, std::shared_ptr<const Equation> eq,
                                        const Bindings& parameters, const ZeroTestOptions& options) {
    std::vector<ConservedVector> out;
    for (const auto& t : templates_for(entry, *eq, parameters)) {
        Verification v = verify(*eq, t.F, t.G, options);
        if (!v.valid) throw Error("case " + entry.id + ": template fails verification, residual " + to_string(v.residual));
        out.push_back(make_conserved_vector(eq, t.F, t.G, options));
    }
    return out;
}

}  // namespace

std::vector<ConservedVector> laws_for(const CatalogCase& entry, const Bindings& parameters,
                                      const ZeroTestOptions& options) {
    auto eq = std::make_shared<const Equation>(instantiate_host(entry, parameters));
    return build_laws(entry, eq, parameters, options);
}

std::vector<ConservedVector> laws_for(const Match& m, const Equation& eq, const ZeroTestOptions& options) {
    Equation target = eq;
    for (auto r : m.entry->host.rules) {
        r.rule = specialize(substitute(r.rule, m.parameters), eq);
        target.rules.push_back(std::move(r));
    }
    return build_laws(*m.entry, std::make_shared<const Equation>(std::move(target)), m.parameters, options);
}

std::vector<Match> match(const Equation& eq, const ZeroTestOptions& options) {
    if (!eq.g.is_one()) throw Error("equation is not gauged: g must be 1");
    std::vector<Match> out;
    for (const auto& entry : catalog()) {
        Match m{&entry, {}};
        bool ok = true;
        for (const auto& p : entry.parameters) {
            auto v = solve_parameter(specialize(entry.solvers.at(p), eq), eq, options);
            if (!v) {
                ok = false;
                break;
            }
            m.parameters[Expr::parameter(p)] = *v;
        }
        for (std::size_t i = 0; ok && i < entry.constraints.size(); ++i) {
            const Constraint& c = entry.constraints[i];
            try {
                ZeroTest z = is_zero(substitute(specialize(c.expr, eq), m.parameters), eq.domain, options);
                ok = c.kind == ConstraintKind::Identity ? z.zero() : !z.zero();
            } catch (const IndeterminateError&) {
                ok = false;
            }
        }
        if (ok) out.push_back(std::move(m));
    }
    return out;
}

Expr classifying_residual(const Equation& eq, const Expr& F1) {
    Expr x = sym::x();
    Expr r = eq.A * diff(divide(F1, eq.f), x, 2) - eq.B * diff(divide(eq.h * F1, eq.f), x) + diff(F1, sym::t());
    return apply_rules(r, eq.rules);
}

DeterminingSystem determining_system(const Equation& eq, const Expr& F1, const Expr& F0, const Expr& G0) {
    Expr x = sym::x(), u = sym::u(), t = sym::t();
    DeterminingSystem s;
    s.F = F1 * u + F0;
    s.G1 = diff(divide(F1, eq.f), x) * eq.int_a - divide(eq.h * F1, eq.f) * eq.int_b + G0;
    Expr Fu = diff(s.F, u);
    s.flux_linear = diff(s.F, u, 2);
    s.flux_coupling = apply_rules(
        divide(eq.h * eq.B * Fu, eq.f) - eq.A * diff(divide(Fu, eq.f), x) + diff(s.G1, u), eq.rules);
    s.balance = apply_rules(diff(s.F, t) + diff(s.G1, x), eq.rules);
    s.classifying = classifying_residual(eq, F1);
    return s;
}

int span_rank(const std::vector<Expr>& functions, const Expr& var, const SampleDomain& domain, std::uint64_t seed,
              int points) {
    RandomModel model(seed);
    std::mt19937_64 rng(seed);
    std::vector<Expr> others;
    for (const auto& fn : functions)
        for (const auto& s : free_symbols(fn))
            if (s != var) others.push_back(s);
    Point base = sample_point(others, domain, rng);
    Interval r = domain.range_for(var);
    std::vector<std::vector<double>> m;
    for (int i = 0; i < points; ++i) {
        Point p = base;
        p[var.key()] = r.lo + (r.hi - r.lo) * (i + 0.5) / points + 0.01 * std::uniform_real_distribution<>(-1, 1)(rng);
        std::vector<double> row;
        for (const auto& fn : functions) row.push_back(eval_numeric(fn, p, model));
        m.push_back(std::move(row));
    }
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0;
    int rank = 0;
    std::size_t cols = functions.size();
    for (std::size_t c = 0; c < cols && rank < points; ++c) {
        std::size_t pivot = rank;
        for (std::size_t i = rank; i < m.size(); ++i)
            if (std::abs(m[i][c]) > std::abs(m[pivot][c])) pivot = i;
        if (std::abs(m[pivot][c]) < 1e-8 * scale) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            double k = m[i][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= k * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

CaseFile catalog_casefile() {
    CaseFile file;
    for (const auto& c : catalog()) {
        CaseSection& s = file.add("case", c.id);
        s.add("title", c.title);
        if (!c.parameters.empty()) {
            std::string names, samples;
            for (const auto& p : c.parameters) names += (names.empty() ? "" : ", ") + p;
            for (const auto& v : c.samples) samples += (samples.empty() ? "" : ", ") + v.get_str();
            s.add("parameters", names);
            s.add("samples", samples);
            for (const auto& [p, e] : c.solvers) s.add("solve." + p, to_string(e));
        }
        s.add("f", to_string(c.host.f)).add("h", to_string(c.host.h)).add("A", to_string(c.host.A));
        s.add("B", to_string(c.host.B));
        for (const auto& r : c.host.rules) s.add("rule", rule_text(r));
        for (const auto& [k, iv] : c.host.domain.ranges) {
            std::ostringstream v;
            v << iv.lo << ", " << iv.hi;
            s.add("domain." + k, v.str());
        }
        for (const auto& k : c.constraints)
            s.add(k.kind == ConstraintKind::Identity ? "require" : "nonzero", to_string(k.expr));
        int n = 0;
        for (const auto& l : c.laws) {
            CaseSection& ls = file.add("law", c.id + "." + std::to_string(++n));
            ls.add("F", to_string(l.F)).add("G", to_string(l.G)).add("lambda", to_string(l.lambda));
        }
    }
    return file;
}

std::string catalog_text() {
    return "# Conservation law catalog. Regenerate with `jetcl catalog`.\n\n" + write_casefile(catalog_casefile());
}

}  // namespace jetcl
