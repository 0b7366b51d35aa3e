#pragma once

#include "jetcl/eval.hpp"
#include "jetcl/expr.hpp"

#include <string>
#include <vector>

namespace jetcl {

/// An opaque function constrained by a differential equation: its first
/// derivative in `slot` is replaced by `rule`, written in terms of `slots`.
struct ConstrainedSymbol {
    std::string name;
    std::vector<Expr> slots;
    std::size_t slot = 0;
    Expr rule;
};

using RuleSet = std::vector<ConstrainedSymbol>;

/// Rewrites every derivative of a constrained symbol that involves its slot.
Expr apply_rules(const Expr& e, const RuleSet& rules);

/// A potential whose x- and t-derivatives are given by a defining pair.
struct PotentialRule {
    std::string name;
    Expr vx;
    Expr vt;
};

struct JetContext {
    RuleSet rules;
    std::vector<PotentialRule> potentials;
    int order_cap = 8;
};

enum class Dir { T, X };

Expr total_derivative(const Expr& e, Dir dir, const JetContext& ctx = {});
Expr total_derivative(const Expr& e, Dir dir, int times, const JetContext& ctx);

/// D_t F + D_x G.
Expr divergence(const Expr& F, const Expr& G, const JetContext& ctx = {});

/// Sum over jet coordinates u_(a,b) of (-D_t)^a (-D_x)^b applied to the partial derivative.
Expr euler_operator(const Expr& e, const std::string& dependent = "u", const JetContext& ctx = {});

/// f(x) u_t = (g(x) A(u) u_x)_x + h(x) B(u) u_x.
class Equation {
public:
    Expr f = Expr(1);
    Expr g = Expr(1);
    Expr h = Expr(1);
    Expr A = Expr(1);
    Expr B = Expr(0);
    Expr int_a;
    Expr int_b;
    std::vector<std::string> parameters;
    RuleSet rules;
    SampleDomain domain;
    int order_cap = 8;

    /// Builds an equation with antiderivatives taken formally in u.
    static Equation make(const Expr& f, const Expr& g, const Expr& h, const Expr& A, const Expr& B);

    Expr lhs() const;
    Expr rhs() const;
    JetContext context() const;
    /// Checks that f g A does not vanish at sampled points.
    void validate(std::uint64_t seed = 42) const;
    /// Antiderivative of an expression in u, taken with the dummy variable.
    static Expr antiderivative(const Expr& in_u);

    bool same_as(const Equation& other) const;
};

/// Replaces every u_(a,b) with a >= 1 by the corresponding differential
/// consequence of the equation.
Expr reduce_mod_equation(const Expr& e, const Equation& eq);

/// Adjoint of the Frechet derivative of the equation applied to lambda, reduced.
Expr adjoint_frechet_apply(const Equation& eq, const Expr& lambda);

}  // namespace jetcl
