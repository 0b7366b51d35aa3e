#include "jetcl/jet.hpp"

#include "jetcl/errors.hpp"

namespace jetcl {

Expr apply_rules(const Expr& e, const RuleSet& rules) {
    if (rules.empty()) return normalize(e);
    return map_opaque(e, [&](const Expr& app) -> Expr {
        for (const auto& r : rules) {
            if (r.name != app.name() || r.slots.size() != app.children().size()) continue;
            if (app.orders()[r.slot] < 1) continue;
            std::vector<int> rest = app.orders();
            --rest[r.slot];
            Expr body = r.rule;
            for (std::size_t i = 0; i < r.slots.size(); ++i) body = diff(body, r.slots[i], rest[i]);
            Bindings b;
            for (std::size_t i = 0; i < r.slots.size(); ++i) b.emplace(r.slots[i], app.children()[i]);
            return apply_rules(substitute(body, b), rules);
        }
        return app;
    });
}

Expr total_derivative(const Expr& e, Dir dir, const JetContext& ctx) {
    auto on_symbol = [&](const Expr& s) -> Expr {
        switch (s.role()) {
        case Role::Independent:
            if (s.name() == "t") return Expr(dir == Dir::T ? 1 : 0);
            if (s.name() == "x") return Expr(dir == Dir::X ? 1 : 0);
            return Expr(0);
        case Role::Jet: {
            if (s.nt() == 0 && s.nx() == 0) {
                for (const auto& p : ctx.potentials)
                    if (p.name == s.name()) return dir == Dir::X ? p.vx : p.vt;
            }
            int nt = s.nt() + (dir == Dir::T ? 1 : 0);
            int nx = s.nx() + (dir == Dir::X ? 1 : 0);
            if (nt + nx > ctx.order_cap)
                throw OrderCapExceeded("jet order " + std::to_string(nt + nx) + " exceeds the cap of " +
                                       std::to_string(ctx.order_cap));
            return Expr::jet(s.name(), nt, nx);
        }
        default:
            return Expr(0);
        }
    };
    return apply_rules(derive(e, on_symbol), ctx.rules);
}

Expr total_derivative(const Expr& e, Dir dir, int times, const JetContext& ctx) {
    Expr out = normalize(e);
    for (int i = 0; i < times && !out.is_zero(); ++i) out = total_derivative(out, dir, ctx);
    return out;
}

Expr divergence(const Expr& F, const Expr& G, const JetContext& ctx) {
    return total_derivative(F, Dir::T, ctx) + total_derivative(G, Dir::X, ctx);
}

Expr euler_operator(const Expr& e, const std::string& dependent, const JetContext& ctx) {
    std::vector<Expr> parts;
    for (const auto& j : jets_of(e, dependent)) {
        Expr p = diff(e, j);
        for (int a = 0; a < j.nt(); ++a) p = -total_derivative(p, Dir::T, ctx);
        for (int b = 0; b < j.nx(); ++b) p = -total_derivative(p, Dir::X, ctx);
        parts.push_back(p);
    }
    return Expr::sum(std::move(parts));
}

// ---------------------------------------------------------------------------
// Equation

Expr Equation::antiderivative(const Expr& in_u) {
    return Expr::primitive(substitute(in_u, {{sym::u(), Expr::dummy()}}), sym::u());
}

Equation Equation::make(const Expr& f, const Expr& g, const Expr& h, const Expr& A, const Expr& B) {
    Equation eq;
    eq.f = normalize(f);
    eq.g = normalize(g);
    eq.h = normalize(h);
    eq.A = normalize(A);
    eq.B = normalize(B);
    eq.int_a = antiderivative(eq.A);
    eq.int_b = antiderivative(eq.B);
    return eq;
}

JetContext Equation::context() const { return JetContext{rules, {}, order_cap}; }

Expr Equation::lhs() const {
    Expr ux = sym::u(1);
    return f * sym::ut() - total_derivative(g * A * ux, Dir::X, context()) - h * B * ux;
}

Expr Equation::rhs() const {
    Expr ux = sym::u(1);
    return divide(total_derivative(g * A * ux, Dir::X, context()) + h * B * ux, f);
}

void Equation::validate(std::uint64_t seed) const {
    ZeroTestOptions opt;
    opt.seed = seed;
    if (is_zero(f * g * A, domain, opt).zero()) throw Error("f g A vanishes identically");
}

bool Equation::same_as(const Equation& o) const {
    return f == o.f && g == o.g && h == o.h && A == o.A && B == o.B && int_a == o.int_a && int_b == o.int_b &&
           parameters == o.parameters;
}

Expr reduce_mod_equation(const Expr& e_in, const Equation& eq) {
    Expr e = normalize(e_in);
    std::vector<Expr> timed;
    for (const auto& j : jets_of(e, "u"))
        if (j.nt() >= 1) timed.push_back(j);
    if (timed.empty()) return apply_rules(e, eq.rules);

    JetContext ctx = eq.context();
    std::map<std::pair<int, int>, Expr> memo;
    const Expr r = eq.rhs();

    std::function<Expr(int, int)> rep;
    auto eliminate_first = [&](const Expr& x) {
        Bindings b;
        for (const auto& j : jets_of(x, "u"))
            if (j.nt() == 1) b.emplace(j, rep(1, j.nx()));
        return b.empty() ? x : substitute(x, b);
    };
    rep = [&](int a, int k) -> Expr {
        auto key = std::make_pair(a, k);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Expr v;
        if (a == 1)
            v = k == 0 ? r : total_derivative(rep(1, k - 1), Dir::X, ctx);
        else
            v = eliminate_first(total_derivative(rep(a - 1, k), Dir::T, ctx));
        memo.emplace(key, v);
        return v;
    };
    Bindings b;
    for (const auto& j : timed) b.emplace(j, rep(j.nt(), j.nx()));
    return apply_rules(substitute(e, b), eq.rules);
}

Expr adjoint_frechet_apply(const Equation& eq, const Expr& lambda) {
    JetContext ctx = eq.context();
    Expr L = eq.lhs();
    std::vector<Expr> parts;
    for (const auto& j : jets_of(L, "u")) {
        Expr p = lambda * diff(L, j);
        for (int a = 0; a < j.nt(); ++a) p = -total_derivative(p, Dir::T, ctx);
        for (int b = 0; b < j.nx(); ++b) p = -total_derivative(p, Dir::X, ctx);
        parts.push_back(p);
    }
    return reduce_mod_equation(Expr::sum(std::move(parts)), eq);
}

}  // namespace jetcl
