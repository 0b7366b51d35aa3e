#pragma once

#include "jetcl/casefile.hpp"
#include "jetcl/conservation.hpp"

#include <map>
#include <string>
#include <vector>

namespace jetcl {

enum class ConstraintKind { Identity, NonZero };

/// Condition on the arbitrary elements written with the generic symbols
/// f(x), h(x), A(u), B(u): Identity requires the expression to vanish,
/// NonZero requires it not to.
struct Constraint {
    ConstraintKind kind = ConstraintKind::Identity;
    Expr expr;
};

struct LawTemplate {
    Expr F;
    Expr G;
    Expr lambda;
};

struct CatalogCase {
    std::string id;
    std::string title;
    std::vector<std::string> parameters;
    /// Expression in the generic symbols that equals the parameter on a matching equation.
    std::map<std::string, Expr> solvers;
    /// Parameter values exercised by the golden suite.
    std::vector<Rational> samples;
    Equation host;
    std::vector<Constraint> constraints;
    std::vector<LawTemplate> laws;
};

const std::vector<CatalogCase>& catalog();
const CatalogCase& catalog_case(const std::string& id);

/// Definitions of the generic symbols taken from an equation.
std::map<std::string, FunctionDef> generic_definitions(const Equation& eq);

/// Rewrites an expression in the generic symbols for a concrete equation.
Expr specialize(const Expr& generic, const Equation& eq);

/// The host equation of a case with parameters bound.
Equation instantiate_host(const CatalogCase& entry, const Bindings& parameters = {});

struct Match {
    const CatalogCase* entry = nullptr;
    Bindings parameters;
};

/// Cases whose constraints hold for a gauged equation (g = 1).
std::vector<Match> match(const Equation& eq, const ZeroTestOptions& options = {});

/// Instantiated laws of a case on its host equation.
std::vector<ConservedVector> laws_for(const CatalogCase& entry, const Bindings& parameters = {},
                                      const ZeroTestOptions& options = {});

/// Instantiated laws of a matched case on the given equation.
std::vector<ConservedVector> laws_for(const Match& m, const Equation& eq, const ZeroTestOptions& options = {});

/// The listed templates with the generic symbols and parameters specialized to eq.
std::vector<LawTemplate> templates_for(const CatalogCase& entry, const Equation& eq, const Bindings& parameters);

/// Splitting of the divergence for the ansatz F = F1(t,x) u + F0(t,x) and the
/// flux part G1 solved from the first two equations.
struct DeterminingSystem {
    Expr F;
    Expr G1;
    Expr flux_linear;    // F_uu
    Expr flux_coupling;  // (h/f) B F_u - A (F_u/f)_x + G1_u
    Expr balance;        // F_t + G1_x
    Expr classifying;    // A (F1/f)_xx - B (h F1/f)_x + F1_t
};

DeterminingSystem determining_system(const Equation& eq, const Expr& F1, const Expr& F0 = Expr(0),
                                     const Expr& G0 = Expr(0));

Expr classifying_residual(const Equation& eq, const Expr& F1);

/// Numerical rank of functions of `var` sampled at `points` values, other
/// symbols fixed at one random draw.
int span_rank(const std::vector<Expr>& functions, const Expr& var, const SampleDomain& domain = {},
              std::uint64_t seed = 42, int points = 4);

/// Serialization in the case-file format; byte-stable.
CaseFile catalog_casefile();
std::string catalog_text();

}  // namespace jetcl
