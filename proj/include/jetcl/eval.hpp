#pragma once

#include "jetcl/expr.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace jetcl {

/// Values of symbols keyed by Expr::key().
using Point = std::unordered_map<std::string, double>;

/// Supplies values of opaque function applications and formal antiderivatives.
class OpaqueModel {
public:
    virtual ~OpaqueModel() = default;
    virtual double opaque(const std::string& name, const std::vector<int>& orders,
                          const std::vector<double>& args) const = 0;
    virtual double primitive(const Expr& body, double arg) const;
};

/// Model with no opaque symbols; any use raises MissingModelError.
class NoOpaqueModel final : public OpaqueModel {
public:
    double opaque(const std::string& name, const std::vector<int>& orders,
                  const std::vector<double>& args) const override;
};

/// Deterministic pseudo-random values: every (name, derivative index, arguments)
/// combination gets an independent value. Base values lie in [0.5, 1.5],
/// derivatives in [-1, 1].
class RandomModel final : public OpaqueModel {
public:
    explicit RandomModel(std::uint64_t seed) : seed_(seed) {}
    double opaque(const std::string& name, const std::vector<int>& orders,
                  const std::vector<double>& args) const override;
    double primitive(const Expr& body, double arg) const override;

private:
    std::uint64_t seed_;
};

double eval_numeric(const Expr& e, const Point& point, const OpaqueModel& model);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Sampling ranges for randomized evaluation. Unlisted symbols use role-based
/// defaults: t in [0.2,1.2], x and y in [1.2,2.2], parameters and u in
/// [0.5,1.5], derivatives and potentials in [-1,1].
struct SampleDomain {
    std::map<std::string, Interval> ranges;
    std::map<std::string, double> fixed;

    Interval range_for(const Expr& symbol) const;
    SampleDomain& set(const std::string& key, double lo, double hi);
    SampleDomain& fix(const std::string& key, double value);
};

enum class Tier { Zero, ProbablyZero, NonZero };

const char* tier_name(Tier tier);

struct ZeroTestOptions {
    std::uint64_t seed = 42;
    int samples = 8;
    double tolerance = 1e-9;
    int max_retries = 64;
};

struct ZeroTest {
    Tier tier = Tier::Zero;
    double worst_ratio = 0.0;  // max |value| / scale over the samples
    bool zero() const { return tier != Tier::NonZero; }
};

/// Exact test on the canonical form, then randomized evaluation.
ZeroTest is_zero(const Expr& e, const SampleDomain& domain = {}, const ZeroTestOptions& options = {});

/// Draws values for the given symbols.
Point sample_point(const std::vector<Expr>& symbols, const SampleDomain& domain, std::mt19937_64& rng);

}  // namespace jetcl
