#pragma once

#include "jetcl/conservation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetcl {

/// An expression turned into a stack program over a fixed list of symbols.
/// Opaque functions and formal antiderivatives are rejected with MissingModelError.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const std::vector<Expr>& symbols);

    /// Values in the order of the symbols; NaN on a domain error.
    double operator()(const double* values) const;
    double operator()(std::initializer_list<double> values) const { return (*this)(values.begin()); }

private:
    enum class Op : std::uint8_t { Const, Var, Add, Mul, PowInt, Pow, Exp, Ln, Sin, Cos, Sinh, Cosh, Atan, Abs };
    struct Instr {
        Op op;
        int arg;
        double value;
    };
    std::vector<Instr> program_;
    int depth_ = 0;

    void emit(const Expr& e, const std::vector<Expr>& symbols, int& depth);
};

enum class Boundary { Periodic, Dirichlet };

const char* boundary_name(Boundary b);
Boundary parse_boundary(const std::string& name);

struct InitialProfile {
    /// gaussian, sine or bump.
    std::string kind = "gaussian";
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
    double offset = 0.0;

    double operator()(double x, double a, double b) const;
};

struct SimConfig {
    double a = -10.0;
    double b = 10.0;
    int N = 512;
    double T = 1.0;
    Boundary boundary = Boundary::Dirichlet;
    InitialProfile initial;
    /// Number of stored profiles after the initial one.
    int snapshots = 40;
};

/// u, u_x and u_xx at one end of the interval.
struct BoundaryState {
    double u = 0.0;
    double ux = 0.0;
    double uxx = 0.0;
};

struct Solution {
    SimConfig config;
    std::vector<double> x;
    double dx = 0.0;
    double dt = 0.0;
    int steps = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> profiles;
    /// Per step, including t = 0.
    std::vector<double> trace_times;
    std::vector<BoundaryState> left;
    std::vector<BoundaryState> right;
};

/// Explicit RK4 method of lines for f u_t = (A u_x)_x + h B u_x with g = 1.
/// dt = 0.25 dx^2 min(1, min f) / max |A| over the initial data.
/// Throws Error on instability (norm growth over ten times the initial norm)
/// and DomainError when A is not positive on the data.
Solution solve(const Equation& eq, const SimConfig& config);

struct AuditLaw {
    std::string label;
    Expr F;
    Expr G;
};

std::vector<AuditLaw> audit_laws(const std::vector<ConservedVector>& laws);

struct LawSeries {
    std::string label;
    std::vector<double> M;
    std::vector<double> R;
    double max_residual = 0.0;
};

/// M(t) by the composite trapezoid rule and R(t) = M(t) - M(0) + int_0^t [G(b) - G(a)].
struct AuditSeries {
    int N = 0;
    double dt = 0.0;
    std::vector<double> times;
    std::vector<LawSeries> laws;
};

AuditSeries audit(const Solution& solution, const Equation& eq, const std::vector<AuditLaw>& laws);

struct Refinement {
    double residual_n = 0.0;
    double residual_2n = 0.0;
    double dt_n = 0.0;
    double dt_2n = 0.0;
    /// Empty when the finer residual is at the round-off floor.
    std::optional<double> order;
    bool saturated() const { return !order.has_value(); }
};

/// Runs at N and 2N and returns log2 of the ratio of max |R|.
std::vector<Refinement> convergence_orders(const Equation& eq, const SimConfig& config,
                                           const std::vector<AuditLaw>& laws, double floor = 1e-11);
Refinement convergence_order(const Equation& eq, const SimConfig& config, const AuditLaw& law,
                             double floor = 1e-11);

struct AuditInstance {
    std::string id;
    /// Every catalog case the equation matches.
    std::vector<std::string> cases;
    std::string description;
    Equation eq;
    SimConfig config;
    std::vector<AuditLaw> laws;
};

/// Concrete instances of cases 1, 3, 5a and of the hosts of the potential laws.
std::vector<AuditInstance> audit_instances();

/// An instance whose flux sign is flipped; its audit must fail.
AuditInstance corrupted_control();

}  // namespace jetcl
