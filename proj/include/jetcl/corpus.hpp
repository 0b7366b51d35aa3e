#pragma once

#include "jetcl/expr.hpp"

#include <random>
#include <vector>

namespace jetcl {

/// Generator settings for random expression trees used by property checks.
struct CorpusOptions {
    int depth = 3;
    std::vector<Expr> atoms;
    bool functions = true;
    bool opaque = true;
    std::size_t max_terms = 200;
};

/// Atoms t, x, u, u_x, ..., u_{max_order}.
std::vector<Expr> jet_atoms(int max_order);

/// Random raw tree. Trees whose expansion would exceed max_terms or that are
/// undefined (such as 0^-1) are redrawn.
Expr random_expr(std::mt19937_64& rng, const CorpusOptions& options);

}  // namespace jetcl
