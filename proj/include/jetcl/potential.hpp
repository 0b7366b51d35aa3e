#pragma once

#include "jetcl/catalog.hpp"

#include <memory>
#include <string>
#include <vector>

namespace jetcl {

struct Potential {
    std::string name;
    Expr vx;
    Expr vt;
    /// Characteristic of the generating law.
    Expr lambda;
};

struct PotentialSystem {
    std::string id;
    std::string level = "simplest";
    std::shared_ptr<const Equation> host;
    std::vector<Potential> potentials;
    /// Set when a generating law is trivial, so the potential is a function of the jet.
    bool degenerate = false;

    JetContext context(const RuleSet& extra = {}) const;
};

/// v_x = F, v_t = -G for a law verified on eq. Throws Error when the law fails.
PotentialSystem build(std::shared_ptr<const Equation> eq, const Expr& F, const Expr& G, const std::string& name = "v",
                      const ZeroTestOptions& options = {});

/// Adds a second potential for another verified law on the same host.
void add_potential(PotentialSystem& system, const Expr& F, const Expr& G, const std::string& name,
                   const ZeroTestOptions& options = {});

struct PotentialCheck {
    bool valid = false;
    Tier tier = Tier::NonZero;
    Expr residual;
};

/// D_t(v_x) - D_x(v_t) modulo the host equation, worst over the potentials.
PotentialCheck compatibility(const PotentialSystem& system, const ZeroTestOptions& options = {});

/// D_t F + D_x G with potential derivatives, u_t and constrained symbols eliminated.
PotentialCheck verify_potential_law(const PotentialSystem& system, const Expr& F, const Expr& G,
                                    const RuleSet& rules = {}, const ZeroTestOptions& options = {});

/// Listed potential systems applicable to a gauged equation; throws Error without a match.
std::vector<PotentialSystem> enumerate_simplest(const Equation& eq, const ZeroTestOptions& options = {});
/// Two-potential systems for equations with two basis laws; throws Error otherwise.
std::vector<PotentialSystem> enumerate_extended(const Equation& eq, const ZeroTestOptions& options = {});

/// Every listed system instantiated on its catalog host with symbolic parameters.
std::vector<PotentialSystem> listed_systems(const ZeroTestOptions& options = {});

struct PotentialLaw {
    std::string id;
    std::string description;
    PotentialSystem system;
    Expr F;
    Expr G;
    RuleSet rules;
};

/// The potential conservation laws of the nonlinear equations with g = 1.
std::vector<PotentialLaw> potential_laws(const ZeroTestOptions& options = {});

/// The h = 1, int B = u int A law with the flux sign D_x(+e^v int A).
PotentialLaw flipped_sign_variant(const ZeroTestOptions& options = {});

/// Left side of the classifying equation for F(t,x,v), G = -lambda F_v int A + Ghat(t,x,v)
/// on a system v_x = lambda f u, v_t = lambda (A u_x + h B u) - lambda_x int A with constant B.
Expr potential_classifying_residual(const Equation& eq, const Expr& lambda, const Expr& F, const Expr& Ghat,
                                    const RuleSet& rules = {});

struct SpotCheck {
    std::string case_id;
    std::string nonlinearity;
    std::string candidate;
    Tier tier = Tier::Zero;
};

/// Classifying residuals for A = u and A = exp(u) on cases 3 to 8 with the
/// density forms of the potential laws; all are expected to be NonZero.
std::vector<SpotCheck> negative_spot_checks(const ZeroTestOptions& options = {});

RuleSet sigma_rule();
RuleSet alpha_rule();

}  // namespace jetcl
