#pragma once

#include "jetcl/jet.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace jetcl {

struct Verification {
    bool valid = false;
    Tier tier = Tier::NonZero;
    Expr residual;
};

/// Checks that D_t F + D_x G vanishes modulo the equation.
Verification verify(const Equation& eq, const Expr& F, const Expr& G, const ZeroTestOptions& options = {});

/// Equivalent vector with F' = F - D_x H of order zero and G' = G + D_t H of order at most one.
struct Lowered {
    Expr F;
    Expr G;
    Expr H;
};

Lowered lower_order(const Equation& eq, const Expr& F, const Expr& G);

/// Multiplier of the equation in the divergence of the lowered vector.
/// Throws Error if Div - lambda L does not vanish identically.
Expr characteristic_of(const Equation& eq, const Expr& F, const Expr& G, const ZeroTestOptions& options = {});

bool is_trivial(const Equation& eq, const Expr& F, const Expr& G, const ZeroTestOptions& options = {});

bool equivalent(const Equation& eq, const std::pair<Expr, Expr>& a, const std::pair<Expr, Expr>& b,
                const ZeroTestOptions& options = {});

struct ConservedVector {
    std::shared_ptr<const Equation> eq;
    Expr F;
    Expr G;
    Expr lambda;
};

/// Builds a conserved vector on eq, extracting its characteristic.
ConservedVector make_conserved_vector(std::shared_ptr<const Equation> eq, const Expr& F, const Expr& G,
                                      const ZeroTestOptions& options = {});

/// Componentwise combination. Throws Error when the laws live on different equations.
ConservedVector linear_combination(const std::vector<std::pair<Expr, ConservedVector>>& laws);

}  // namespace jetcl
