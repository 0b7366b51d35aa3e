#pragma once

#include "jetcl/casefile.hpp"
#include "jetcl/conservation.hpp"

#include <string>
#include <vector>

namespace jetcl {

/// How a correspondence enters the overall verdict. Every Required one must
/// converge; among Alternative ones at least one must; Informational ones are
/// only reported.
enum class LimitRole { Required, Alternative, Informational };

const char* role_name(LimitRole role);

struct Correspondence {
    std::string label;
    /// Combination of source characteristics, in the contraction parameter mu.
    Expr source;
    Expr target;
    /// Set when source is already written in the contracted variables.
    bool in_target_variables = false;
    LimitRole role = LimitRole::Required;
};

/// A family of equations f u_t = (c_A(mu) A u_x)_x + h u_x under the affine
/// change x = X(x~, mu), t = T(t~, mu), and its limit as mu grows.
struct ContractionSpec {
    std::string id;
    std::string title;
    Expr source_f;
    Expr source_h;
    /// Factor c_A(mu) multiplying A in the source family.
    Expr source_a_scale = Expr(1);
    /// Old variables in terms of the new ones.
    Expr x_of;
    Expr t_of;
    Equation target;
    std::vector<Correspondence> correspondences;
};

/// The contraction parameter.
Expr contraction_parameter();

struct PointSeries {
    double t = 0.0;
    double x = 0.0;
    std::vector<double> values;
    std::vector<double> errors;
    bool monotone = false;
    bool strictly_decreasing = false;
};

struct LimitItem {
    std::string label;
    LimitRole role = LimitRole::Required;
    std::string source_text;
    std::string target_text;
    std::vector<PointSeries> points;
    /// Monotone at every point with final error below the tolerance.
    bool converges = false;
    double final_error = 0.0;
};

struct LimitReport {
    std::string id;
    std::vector<double> schedule;
    std::vector<LimitItem> items;
    bool passed = false;
};

struct LimitOptions {
    double tolerance = 1e-3;
    double slack = 1e-12;
};

/// (t~, x~) pairs.
using SamplePoints = std::vector<std::pair<double, double>>;

SamplePoints default_sample_points();
std::vector<double> default_schedule();

/// Evaluates every correspondence along the mu schedule. Throws DomainError
/// when an evaluation is undefined and Error when the schedule is not increasing.
LimitReport check_limit(const ContractionSpec& spec, const SamplePoints& points = default_sample_points(),
                        const std::vector<double>& schedule = default_schedule(), const LimitOptions& options = {});

/// Normalized source coefficients a^2 f(X)/(b c_A) and a h(X)/c_A, with
/// a = dX/dx~ and b = dT/dt~, against the target's f and h.
LimitReport check_equation_limit(const ContractionSpec& spec, const SamplePoints& points = default_sample_points(),
                                 const std::vector<double>& schedule = default_schedule(),
                                 const LimitOptions& options = {});

struct TargetCheck {
    std::string label;
    Tier tier = Tier::NonZero;
};

/// Cosymmetry test of each target characteristic on the target equation.
std::vector<TargetCheck> check_targets(const ContractionSpec& spec, const ZeroTestOptions& options = {});

/// Reads `[contraction id]` and its `[correspondence label]` sections.
ContractionSpec contraction_from(const CaseFile& file);

ContractionSpec power_contraction();
/// nu is the target's exponent parameter.
ContractionSpec case7_contraction(const Rational& nu = Rational(1));
/// Source equal to target, no change of variables.
ContractionSpec identity_contraction(const Equation& eq);

/// Case-file text of a built-in contraction: power-to-exponential or case7-to-exponential.
std::string contraction_text(const std::string& id);

}  // namespace jetcl
