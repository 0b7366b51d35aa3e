#include "jetcl/conservation.hpp"

#include "jetcl/errors.hpp"

namespace jetcl {

namespace {

ZeroTest test_zero(const Equation& eq, const Expr& e, const ZeroTestOptions& options) {
    return is_zero(e, eq.domain, options);
}

int x_order(const Expr& e) {
    int r = -1;
    for (const auto& j : jets_of(e, "u")) r = std::max(r, j.nx());
    return r;
}

}  // namespace

Verification verify(const Equation& eq, const Expr& F, const Expr& G, const ZeroTestOptions& options) {
    Expr div = reduce_mod_equation(divergence(F, G, eq.context()), eq);
    ZeroTest z = test_zero(eq, div, options);
    return {z.zero(), z.tier, div};
}

Lowered lower_order(const Equation& eq, const Expr& F_in, const Expr& G_in) {
    JetContext ctx = eq.context();
    Expr F = reduce_mod_equation(F_in, eq);
    Expr G = reduce_mod_equation(G_in, eq);
    Expr H(0);
    for (int r = x_order(F); r >= 1; r = x_order(F)) {
        Expr top = sym::u(r);
        Collected parts;
        try {
            parts = collect(F, {top});
        } catch (const NonPolynomialError&) {
            throw Error("density is not linear in " + to_string(top) + "; the vector is not conserved");
        }
        for (const auto& [powers, coeff] : parts)
            if (powers[0] > 1) throw Error("density is not linear in " + to_string(top) + "; the vector is not conserved");
        auto it = parts.find({1});
        if (it == parts.end()) throw Error("cannot lower the density order");
        Expr below = sym::u(r - 1);
        Expr piece = Expr::primitive(substitute(it->second, {{below, Expr::dummy()}}), below);
        H += piece;
        F = F - total_derivative(piece, Dir::X, ctx);
        G = G + total_derivative(piece, Dir::T, ctx);
        if (x_order(F) >= r) throw Error("cannot lower the density order");
    }
    return {F, reduce_mod_equation(G, eq), H};
}

Expr characteristic_of(const Equation& eq, const Expr& F, const Expr& G, const ZeroTestOptions& options) {
    Lowered low = lower_order(eq, F, G);
    Expr div = divergence(low.F, low.G, eq.context());
    Collected parts = collect(div, {sym::ut()});
    Expr coeff(0);
    for (const auto& [powers, c] : parts) {
        if (powers[0] > 1) throw Error("divergence is not linear in u_t");
        if (powers[0] == 1) coeff = c;
    }
    Expr lambda = divide(coeff, eq.f);
    ZeroTest z = test_zero(eq, div - lambda * eq.lhs(), options);
    if (!z.zero()) throw Error("divergence is not a multiple of the equation");
    return lambda;
}

bool is_trivial(const Equation& eq, const Expr& F, const Expr& G, const ZeroTestOptions& options) {
    Expr lambda = reduce_mod_equation(characteristic_of(eq, F, G, options), eq);
    return test_zero(eq, lambda, options).zero();
}

bool equivalent(const Equation& eq, const std::pair<Expr, Expr>& a, const std::pair<Expr, Expr>& b,
                const ZeroTestOptions& options) {
    return is_trivial(eq, a.first - b.first, a.second - b.second, options);
}

ConservedVector make_conserved_vector(std::shared_ptr<const Equation> eq, const Expr& F, const Expr& G,
                                      const ZeroTestOptions& options) {
    Expr lambda = characteristic_of(*eq, F, G, options);
    return {std::move(eq), F, G, lambda};
}

ConservedVector linear_combination(const std::vector<std::pair<Expr, ConservedVector>>& laws) {
    if (laws.empty()) throw Error("empty combination");
    ConservedVector out{laws.front().second.eq, Expr(0), Expr(0), Expr(0)};
    for (const auto& [c, law] : laws) {
        if (law.eq != out.eq && !law.eq->same_as(*out.eq)) throw Error("laws belong to different equations");
        out.F += c * law.F;
        out.G += c * law.G;
        out.lambda += c * law.lambda;
    }
    return out;
}

}  // namespace jetcl
