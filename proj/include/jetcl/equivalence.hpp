#pragma once

#include "jetcl/conservation.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jetcl {

/// Point change of variables (t, x, u) -> (t~, x~, u~) with t~ and x~ free of u.
/// Forward maps are written in the old variables, inverse maps in the new ones.
struct PointTransform {
    std::string label;
    Expr t_new = sym::t();
    Expr x_new = sym::x();
    Expr u_new = sym::u();
    Expr t_old = sym::t();
    Expr x_old = sym::x();
    Expr u_old = sym::u();
    /// Old parameters in terms of the new ones.
    Bindings parameters;
    /// Rules for opaque inverse functions appearing in the inverse maps.
    RuleSet rules;
    /// Sampling domain of the image; the source domain when absent.
    std::optional<SampleDomain> domain;
    /// Sign of the image nonlinearity relative to A(u) when the target is derived.
    int a_sign = 1;
};

/// Element of the extended equivalence group:
///   t~ = d1 t + d2, x~ = X(x), u~ = d3 u + d4,
///   f~ = e1 d1 phi f / X_x, g~ = (e1/e2) X_x phi g, h~ = (e1/e3) phi h,
///   A~ = e2 A, B~ = e3 (B + e4 A), phi = exp(-e4 Int h/g dx).
struct EquivTransform {
    std::string label;
    Expr d1 = Expr(1), d2 = Expr(0), d3 = Expr(1), d4 = Expr(0);
    Expr e1 = Expr(1), e2 = Expr(1), e3 = Expr(1), e4 = Expr(0);
    Expr X = sym::x();
    /// Closed-form inverse of X; an opaque inverse is used when absent and X is not affine.
    std::optional<Expr> X_inverse;

    PointTransform point(const SampleDomain& source = {}) const;
};

/// this applied after `first`.
EquivTransform compose(const EquivTransform& second, const EquivTransform& first);

/// Image of the equation under the group action.
Equation apply_to_equation(const EquivTransform& tr, const Equation& eq);

/// The source operator written in the new variables.
Expr operator_in_new_variables(const PointTransform& pt, const Equation& source, const Equation& target);

/// Factor kappa with L expressed in the new variables equal to kappa L~.
/// Throws Error when the two operators are not proportional.
Expr operator_factor(const PointTransform& pt, const Equation& source, const Equation& target,
                     const ZeroTestOptions& options = {});

struct DerivedTarget {
    Equation target;
    Expr kappa;
};

/// Image equation of a point transformation, gauged so that g~ = 1.
/// Throws Error when the image leaves the class.
DerivedTarget derive_target(const PointTransform& pt, const Equation& source, const ZeroTestOptions& options = {});

/// Old expression (free of old time derivatives after reduction) in the new variables.
Expr to_new_variables(const PointTransform& pt, const Expr& e, const Equation& source, const Equation& target);

/// Total Jacobian det(D x~ / D x) in the new variables.
Expr jacobian(const PointTransform& pt);

/// F~ = (T_t F + T_x G)/J, G~ = (X_t F + X_x G)/J, reduced on the target.
std::pair<Expr, Expr> pushforward_vector(const PointTransform& pt, const Equation& source, const Equation& target,
                                         const Expr& F, const Expr& G);

/// lambda~ = kappa lambda / J, reduced on the target.
Expr pushforward_characteristic(const PointTransform& pt, const Equation& source, const Equation& target,
                                const Expr& lambda, const ZeroTestOptions& options = {});

/// Point symmetry generator xi_t d_t + xi_x d_x + eta d_u.
struct Generator {
    Expr xi_t = Expr(0);
    Expr xi_x = Expr(0);
    Expr eta = Expr(0);
};

/// F~^i = -X F^i + (D_j xi^i) F^j - (D_j xi^j) F^i, reduced on the equation.
std::pair<Expr, Expr> infinitesimal_action(const Equation& eq, const Generator& gen, const Expr& F, const Expr& G);

// Named transformations.

EquivTransform identity_transform();
EquivTransform gauge(const Equation& eq);
/// Inverse of X = a phi(x) + b with phi a power of x, exp(k x) or ln x,
/// checked by composition on the domain; empty for other forms.
std::optional<Expr> closed_form_inverse(const Expr& X, const SampleDomain& domain = {},
                                        const ZeroTestOptions& options = {});
EquivTransform translate_x(const Expr& a);
EquivTransform translate_t(const Expr& a);
EquivTransform scale(const Expr& t_factor, const Expr& x_factor, const Expr& u_factor);
EquivTransform shift_b(const Expr& e4);
/// Maps of the cases 5b, 5c and 5d onto B = 0, which depend on the parameter mu for 5d.
PointTransform reduce_5b();
PointTransform reduce_5c();
PointTransform reduce_5d(const Expr& mu);
/// t~ = -t, x~ = -x, mu~ = -mu, with the image nonlinearity -A.
PointTransform reflect();

/// Names accepted by named_transform.
std::vector<std::string> transform_names();
/// Builds a named transformation. `value` is the translation, scaling or shift
/// amount and the parameter for reduce-5d.
PointTransform named_transform(const std::string& name, const Equation& eq, const Expr& value);
/// Whether the named transformation comes from the equivalence group.
std::optional<EquivTransform> named_equivalence(const std::string& name, const Equation& eq, const Expr& value);

/// One replayed generation of a listed law from another one.
struct GenerationStep {
    std::string case_id;
    std::string description;
    bool passed = false;
    std::string detail;
};

/// Replays the generation of catalog laws by transformations for a case id:
/// 1, 2, 3, 4, 5a, 5a-f1, 6, 7, 8.
std::vector<GenerationStep> demonstrate_generation(const std::string& case_id, const ZeroTestOptions& options = {});
std::vector<std::string> generation_cases();

}  // namespace jetcl
