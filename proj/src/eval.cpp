#include "jetcl/eval.hpp"

#include "jetcl/errors.hpp"

#include <cmath>

namespace jetcl {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t quantize(double v) { return static_cast<std::uint64_t>(std::llround(v * 1e9)); }

double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
    return v;
}

double eval_node(const Expr& e, const Point& point, const OpaqueModel& model) {
    switch (e.kind()) {
    case Kind::Number:
        return e.value().get_d();
    case Kind::Symbol: {
        auto it = point.find(e.key());
        if (it == point.end()) throw MissingModelError("no value for symbol " + e.key());
        return it->second;
    }
    case Kind::Sum: {
        double s = 0.0;
        for (const auto& c : e.children()) s += eval_node(c, point, model);
        return checked(s, "sum");
    }
    case Kind::Product: {
        double p = 1.0;
        for (const auto& c : e.children()) p *= eval_node(c, point, model);
        return checked(p, "product");
    }
    case Kind::Power: {
        double b = eval_node(e.base(), point, model);
        const Expr& ex = e.exponent();
        if (ex.is_integer()) {
            double n = ex.value().get_d();
            if (b == 0.0 && n < 0) throw DomainError("division by zero");
            return checked(std::pow(b, n), "power");
        }
        double p = eval_node(ex, point, model);
        if (b < 0.0) {
            double r = std::round(p);
            if (r != p) throw DomainError("fractional power of a negative value");
        }
        if (b == 0.0 && p <= 0.0) throw DomainError("division by zero");
        return checked(std::pow(b, p), "power");
    }
    case Kind::Function: {
        double a = eval_node(e.arg(), point, model);
        switch (e.func()) {
        case Func::Exp: return checked(std::exp(a), "exp");
        case Func::Ln:
            if (a <= 0.0) throw DomainError("ln of a nonpositive value");
            return std::log(a);
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Sinh: return checked(std::sinh(a), "sinh");
        case Func::Cosh: return checked(std::cosh(a), "cosh");
        case Func::Atan: return std::atan(a);
        case Func::Abs: return std::fabs(a);
        }
        return 0.0;
    }
    case Kind::Opaque: {
        std::vector<double> args;
        args.reserve(e.children().size());
        for (const auto& c : e.children()) args.push_back(eval_node(c, point, model));
        return checked(model.opaque(e.name(), e.orders(), args), "opaque function");
    }
    case Kind::Primitive:
        return checked(model.primitive(e.children()[0], eval_node(e.children()[1], point, model)), "antiderivative");
    }
    return 0.0;
}

}  // namespace

double OpaqueModel::primitive(const Expr& body, double) const {
    throw MissingModelError("no numeric model for antiderivative Int(" + to_string(body) + ")");
}

double NoOpaqueModel::opaque(const std::string& name, const std::vector<int>&, const std::vector<double>&) const {
    throw MissingModelError("no numeric model for " + name);
}

double RandomModel::opaque(const std::string& name, const std::vector<int>& orders,
                           const std::vector<double>& args) const {
    std::uint64_t h = mix64(seed_ ^ std::hash<std::string>{}(name));
    bool derived = false;
    for (int o : orders) {
        h = mix64(h ^ static_cast<std::uint64_t>(o));
        derived = derived || o != 0;
    }
    for (double a : args) h = mix64(h ^ quantize(a));
    double r = to_unit(h);
    return derived ? 2.0 * r - 1.0 : 0.5 + r;
}

double RandomModel::primitive(const Expr& body, double arg) const {
    std::uint64_t h = mix64(seed_ ^ 0x1f3d5b79ULL ^ body.hash());
    h = mix64(h ^ quantize(arg));
    return 0.5 + to_unit(h);
}

double eval_numeric(const Expr& e, const Point& point, const OpaqueModel& model) {
    return eval_node(normalize(e), point, model);
}

Interval SampleDomain::range_for(const Expr& s) const {
    auto it = ranges.find(s.key());
    if (it != ranges.end()) return it->second;
    switch (s.role()) {
    case Role::Independent:
        if (s.name() == "t") return {0.2, 1.2};
        return {1.2, 2.2};
    case Role::Parameter:
        return {0.5, 1.5};
    case Role::Jet:
        if (s.nt() == 0 && s.nx() == 0) return s.name() == "u" ? Interval{0.5, 1.5} : Interval{-1.0, 1.0};
        return {-1.0, 1.0};
    case Role::Dummy:
        return {0.5, 1.5};
    }
    return {0.0, 1.0};
}

SampleDomain& SampleDomain::set(const std::string& key, double lo, double hi) {
    ranges[key] = {lo, hi};
    return *this;
}

SampleDomain& SampleDomain::fix(const std::string& key, double value) {
    fixed[key] = value;
    return *this;
}

const char* tier_name(Tier tier) {
    switch (tier) {
    case Tier::Zero: return "Zero";
    case Tier::ProbablyZero: return "ProbablyZero";
    case Tier::NonZero: return "NonZero";
    }
    return "?";
}

Point sample_point(const std::vector<Expr>& symbols, const SampleDomain& domain, std::mt19937_64& rng) {
    Point p;
    for (const auto& s : symbols) {
        std::string k = s.key();
        auto fx = domain.fixed.find(k);
        if (fx != domain.fixed.end()) {
            p[k] = fx->second;
            continue;
        }
        Interval iv = domain.range_for(s);
        p[k] = std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng);
    }
    return p;
}

ZeroTest is_zero(const Expr& e, const SampleDomain& domain, const ZeroTestOptions& options) {
    Expr n = normalize(e);
    if (n.is_zero()) return {Tier::Zero, 0.0};
    if (contains_kind(n, Kind::Sum) && terms_of(n).size() <= 400) {
        try {
            if (clear_denominators(n).is_zero()) return {Tier::Zero, 0.0};
        } catch (const Error&) {
        }
    }
    auto symbols = free_symbols(n);
    std::mt19937_64 rng(options.seed);
    std::vector<Expr> terms = terms_of(n);
    ZeroTest result{Tier::ProbablyZero, 0.0};
    int retries = 0;
    for (int sample = 0; sample < options.samples; ++sample) {
        for (;;) {
            Point p = sample_point(symbols, domain, rng);
            RandomModel model(options.seed * 0x100000001b3ULL + static_cast<std::uint64_t>(sample) * 7919ULL +
                              static_cast<std::uint64_t>(retries));
            double value = 0.0;
            double scale = 0.0;
            try {
                for (const auto& t : terms) {
                    double v = eval_node(t, p, model);
                    value += v;
                    scale += std::fabs(v);
                }
            } catch (const DomainError&) {
                if (++retries > options.max_retries)
                    throw IndeterminateError("no valid sample points for " + to_string(n));
                continue;
            }
            double ratio = scale > 0.0 ? std::fabs(value) / scale : 0.0;
            if (terms.size() == 1 && value != 0.0) ratio = 1.0;
            result.worst_ratio = std::max(result.worst_ratio, ratio);
            if (std::fabs(value) > options.tolerance * scale || (terms.size() == 1 && value != 0.0)) {
                result.tier = Tier::NonZero;
                return result;
            }
            break;
        }
    }
    return result;
}

}  // namespace jetcl
