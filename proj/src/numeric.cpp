#include "jetcl/numeric.hpp"

#include "jetcl/catalog.hpp"
#include "jetcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace jetcl {

namespace {

constexpr int kMaxDepth = 64;

const std::vector<Expr>& field_symbols() {
    static const std::vector<Expr> s = {sym::t(), sym::x(), sym::u(), sym::u(1), sym::u(2)};
    return s;
}

CompiledExpr compile_in(const Expr& e, const Expr& var) { return CompiledExpr(e, {var}); }

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<Expr>& symbols) {
    int depth = 0;
    emit(normalize(e), symbols, depth);
}

void CompiledExpr::emit(const Expr& e, const std::vector<Expr>& symbols, int& depth) {
    auto push = [&](Instr in) {
        program_.push_back(in);
        ++depth;
        depth_ = std::max(depth_, depth);
        if (depth_ > kMaxDepth) throw Error("expression too deep to compile");
    };
    switch (e.kind()) {
    case Kind::Number:
        push({Op::Const, 0, e.value().get_d()});
        return;
    case Kind::Symbol: {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i] == e) {
                push({Op::Var, static_cast<int>(i), 0.0});
                return;
            }
        throw MissingModelError("no numeric value for symbol " + e.key());
    }
    case Kind::Opaque:
        throw MissingModelError("no numeric model for " + e.name());
    case Kind::Primitive:
        throw MissingModelError("no closed form for " + to_string(e));
    case Kind::Sum:
    case Kind::Product: {
        for (const auto& c : e.children()) emit(c, symbols, depth);
        int n = static_cast<int>(e.children().size());
        program_.push_back({e.kind() == Kind::Sum ? Op::Add : Op::Mul, n, 0.0});
        depth -= n - 1;
        return;
    }
    case Kind::Power: {
        emit(e.base(), symbols, depth);
        if (e.exponent().is_integer() && abs(e.exponent().value()) <= 64) {
            program_.push_back({Op::PowInt, static_cast<int>(e.exponent().value().get_num().get_si()), 0.0});
            return;
        }
        emit(e.exponent(), symbols, depth);
        program_.push_back({Op::Pow, 0, 0.0});
        --depth;
        return;
    }
    case Kind::Function: {
        emit(e.arg(), symbols, depth);
        static const Op ops[] = {Op::Exp, Op::Ln, Op::Sin, Op::Cos, Op::Sinh, Op::Cosh, Op::Atan, Op::Abs};
        program_.push_back({ops[static_cast<int>(e.func())], 0, 0.0});
        return;
    }
    }
}

double CompiledExpr::operator()(const double* values) const {
    double stack[kMaxDepth];
    int sp = 0;
    for (const auto& in : program_) {
        switch (in.op) {
        case Op::Const: stack[sp++] = in.value; break;
        case Op::Var: stack[sp++] = values[in.arg]; break;
        case Op::Add: {
            double s = 0.0;
            for (int i = 0; i < in.arg; ++i) s += stack[--sp];
            stack[sp++] = s;
            break;
        }
        case Op::Mul: {
            double p = 1.0;
            for (int i = 0; i < in.arg; ++i) p *= stack[--sp];
            stack[sp++] = p;
            break;
        }
        case Op::PowInt: {
            double b = stack[sp - 1];
            int n = in.arg;
            double r = 1.0;
            for (int k = std::abs(n); k > 0; --k) r *= b;
            stack[sp - 1] = n < 0 ? 1.0 / r : r;
            break;
        }
        case Op::Pow: {
            double p = stack[--sp];
            double b = stack[sp - 1];
            stack[sp - 1] = b < 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::pow(b, p);
            break;
        }
        case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
        case Op::Ln: stack[sp - 1] = std::log(stack[sp - 1]); break;
        case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
        case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
        case Op::Sinh: stack[sp - 1] = std::sinh(stack[sp - 1]); break;
        case Op::Cosh: stack[sp - 1] = std::cosh(stack[sp - 1]); break;
        case Op::Atan: stack[sp - 1] = std::atan(stack[sp - 1]); break;
        case Op::Abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
        }
    }
    return stack[0];
}

const char* boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "dirichlet"; }

Boundary parse_boundary(const std::string& name) {
    if (name == "periodic") return Boundary::Periodic;
    if (name == "dirichlet") return Boundary::Dirichlet;
    throw Error("unknown boundary condition '" + name + "'");
}

double InitialProfile::operator()(double x, double a, double b) const {
    if (kind == "gaussian") {
        double r = (x - center) / width;
        return offset + amplitude * std::exp(-r * r);
    }
    if (kind == "sine") return offset + amplitude * std::sin(2.0 * std::numbers::pi * (x - a) / (b - a));
    if (kind == "bump") {
        double r = (x - center) / width;
        return std::abs(r) < 1.0 ? offset + amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r)) : offset;
    }
    throw Error("unknown initial profile '" + kind + "'");
}

Solution solve(const Equation& eq, const SimConfig& cfg) {
    if (cfg.N < 16) throw Error("grid needs N >= 16");
    if (!(cfg.b > cfg.a) || !(cfg.T > 0.0)) throw Error("empty interval or end time");
    if (!eq.g.is_one()) throw Error("the solver needs a gauged equation (g = 1)");
    const int N = cfg.N;
    const bool periodic = cfg.boundary == Boundary::Periodic;
    Solution sol;
    sol.config = cfg;
    sol.dx = (cfg.b - cfg.a) / N;
    const double dx = sol.dx;
    sol.x.resize(N + 1);
    for (int j = 0; j <= N; ++j) sol.x[j] = cfg.a + j * dx;

    CompiledExpr cf = compile_in(eq.f, sym::x()), ch = compile_in(eq.h, sym::x());
    CompiledExpr cA = compile_in(eq.A, sym::u()), cB = compile_in(eq.B, sym::u());
    std::vector<double> f(N + 1), hv(N + 1);
    double fmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= N; ++j) {
        f[j] = cf({sol.x[j]});
        hv[j] = ch({sol.x[j]});
        if (!std::isfinite(f[j]) || !std::isfinite(hv[j]) || f[j] <= 0.0)
            throw DomainError("f must be positive and h finite on the interval");
        fmin = std::min(fmin, f[j]);
    }
    std::vector<double> u(N + 1);
    for (int j = 0; j <= N; ++j) u[j] = cfg.initial(sol.x[j], cfg.a, cfg.b);
    if (periodic) u[N] = u[0];
    double amax = 0.0, norm0 = 0.0;
    for (double v : u) {
        double a = cA({v});
        if (!(a > 0.0)) throw DomainError("A must be positive on the initial data");
        amax = std::max(amax, a);
        norm0 = std::max(norm0, std::abs(v));
    }
    double dt0 = 0.25 * dx * dx * std::min(1.0, fmin) / amax;
    sol.steps = static_cast<int>(std::ceil(cfg.T / dt0));
    sol.dt = cfg.T / sol.steps;
    const double dt = sol.dt;

    const int lo = periodic ? 0 : 1, hi = periodic ? N - 1 : N - 1;
    auto at = [&](const std::vector<double>& w, int j) {
        if (periodic) return w[((j % N) + N) % N];
        return w[j];
    };
    std::vector<double> aface(N + 1);
    auto rhs = [&](const std::vector<double>& w, std::vector<double>& out) {
        for (int j = lo - 1; j <= hi; ++j) {
            double m = 0.5 * (at(w, j) + at(w, j + 1));
            aface[j - lo + 1] = cA({m});
        }
        for (int j = lo; j <= hi; ++j) {
            double wl = at(w, j - 1), wc = w[j], wr = at(w, j + 1);
            double diffusion = (aface[j - lo + 1] * (wr - wc) - aface[j - lo] * (wc - wl)) / (dx * dx);
            double convection = hv[j] * cB({wc}) * (wr - wl) / (2.0 * dx);
            out[j] = (diffusion + convection) / f[j];
        }
        if (periodic) out[N] = out[0];
    };
    auto boundary = [&](const std::vector<double>& w, bool left) {
        BoundaryState s;
        if (periodic) {
            double wl = w[N - 1], wc = w[0], wr = w[1];
            s = {wc, (wr - wl) / (2 * dx), (wr - 2 * wc + wl) / (dx * dx)};
            return s;
        }
        int j0 = left ? 0 : N, d = left ? 1 : -1;
        double w0 = w[j0], w1 = w[j0 + d], w2 = w[j0 + 2 * d], w3 = w[j0 + 3 * d];
        s.u = w0;
        s.ux = d * (-3 * w0 + 4 * w1 - w2) / (2 * dx);
        s.uxx = (2 * w0 - 5 * w1 + 4 * w2 - w3) / (dx * dx);
        return s;
    };

    int stride = std::max(1, sol.steps / std::max(1, cfg.snapshots));
    auto record = [&](double t, int step) {
        sol.trace_times.push_back(t);
        sol.left.push_back(boundary(u, true));
        sol.right.push_back(boundary(u, false));
        if (step % stride == 0 || step == sol.steps) {
            sol.times.push_back(t);
            sol.profiles.push_back(u);
        }
    };
    record(0.0, 0);

    std::vector<double> k1(N + 1, 0.0), k2(N + 1, 0.0), k3(N + 1, 0.0), k4(N + 1, 0.0), w(u);
    for (int step = 1; step <= sol.steps; ++step) {
        rhs(u, k1);
        for (int j = lo; j <= hi; ++j) w[j] = u[j] + 0.5 * dt * k1[j];
        if (periodic) w[N] = w[0];
        rhs(w, k2);
        for (int j = lo; j <= hi; ++j) w[j] = u[j] + 0.5 * dt * k2[j];
        if (periodic) w[N] = w[0];
        rhs(w, k3);
        for (int j = lo; j <= hi; ++j) w[j] = u[j] + dt * k3[j];
        if (periodic) w[N] = w[0];
        rhs(w, k4);
        double norm = 0.0;
        for (int j = lo; j <= hi; ++j) {
            u[j] += dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
            norm = std::max(norm, std::abs(u[j]));
        }
        if (periodic) u[N] = u[0];
        if (!std::isfinite(norm) || norm > 10.0 * std::max(norm0, 1e-300))
            throw Error("instability at t = " + std::to_string(step * dt) + ": max |u| grew from " +
                        std::to_string(norm0) + " to " + std::to_string(norm));
        record(step * dt, step);
    }
    return sol;
}

std::vector<AuditLaw> audit_laws(const std::vector<ConservedVector>& laws) {
    std::vector<AuditLaw> out;
    for (std::size_t i = 0; i < laws.size(); ++i)
        out.push_back({"law " + std::to_string(i + 1), laws[i].F, laws[i].G});
    return out;
}

AuditSeries audit(const Solution& sol, const Equation& eq, const std::vector<AuditLaw>& laws) {
    AuditSeries out;
    const int N = sol.config.N;
    const double dx = sol.dx;
    const bool periodic = sol.config.boundary == Boundary::Periodic;
    out.N = N;
    out.dt = sol.dt;
    out.times = sol.times;
    for (const auto& law : laws) {
        CompiledExpr F(reduce_mod_equation(law.F, eq), field_symbols());
        CompiledExpr G(reduce_mod_equation(law.G, eq), field_symbols());
        LawSeries series;
        series.label = law.label;
        for (std::size_t s = 0; s < sol.times.size(); ++s) {
            const auto& u = sol.profiles[s];
            double t = sol.times[s], m = 0.0;
            for (int j = 0; j <= N; ++j) {
                int jl = j - 1, jr = j + 1;
                double ux, uxx;
                if (j == 0 || j == N) {
                    if (periodic) {
                        ux = (u[1] - u[N - 1]) / (2 * dx);
                        uxx = (u[1] - 2 * u[j] + u[N - 1]) / (dx * dx);
                    } else {
                        int d = j == 0 ? 1 : -1;
                        ux = d * (-3 * u[j] + 4 * u[j + d] - u[j + 2 * d]) / (2 * dx);
                        uxx = (2 * u[j] - 5 * u[j + d] + 4 * u[j + 2 * d] - u[j + 3 * d]) / (dx * dx);
                    }
                } else {
                    ux = (u[jr] - u[jl]) / (2 * dx);
                    uxx = (u[jr] - 2 * u[j] + u[jl]) / (dx * dx);
                }
                double v = F({t, sol.x[j], u[j], ux, uxx});
                if (!std::isfinite(v)) throw DomainError("density of " + law.label + " is not finite");
                m += (j == 0 || j == N ? 0.5 : 1.0) * v * dx;
            }
            series.M.push_back(m);
        }
        std::vector<double> flux(sol.trace_times.size());
        for (std::size_t k = 0; k < flux.size(); ++k) {
            double t = sol.trace_times[k];
            const BoundaryState &l = sol.left[k], &r = sol.right[k];
            flux[k] = G({t, sol.config.b, r.u, r.ux, r.uxx}) - G({t, sol.config.a, l.u, l.ux, l.uxx});
            if (!std::isfinite(flux[k])) throw DomainError("flux of " + law.label + " is not finite");
        }
        double integral = 0.0;
        std::size_t k = 0;
        for (std::size_t s = 0; s < sol.times.size(); ++s) {
            while (k + 1 < flux.size() && sol.trace_times[k + 1] <= sol.times[s] + 0.5 * sol.dt) {
                integral += 0.5 * (flux[k] + flux[k + 1]) * (sol.trace_times[k + 1] - sol.trace_times[k]);
                ++k;
            }
            double r = series.M[s] - series.M[0] + integral;
            series.R.push_back(r);
            series.max_residual = std::max(series.max_residual, std::abs(r));
        }
        out.laws.push_back(std::move(series));
    }
    return out;
}

std::vector<Refinement> convergence_orders(const Equation& eq, const SimConfig& config,
                                           const std::vector<AuditLaw>& laws, double floor) {
    SimConfig fine = config;
    fine.N = 2 * config.N;
    AuditSeries coarse = audit(solve(eq, config), eq, laws);
    AuditSeries refined = audit(solve(eq, fine), eq, laws);
    std::vector<Refinement> out;
    for (std::size_t i = 0; i < laws.size(); ++i) {
        Refinement r;
        r.residual_n = coarse.laws[i].max_residual;
        r.residual_2n = refined.laws[i].max_residual;
        r.dt_n = coarse.dt;
        r.dt_2n = refined.dt;
        if (r.residual_2n > floor && r.residual_n > floor) r.order = std::log2(r.residual_n / r.residual_2n);
        out.push_back(r);
    }
    return out;
}

Refinement convergence_order(const Equation& eq, const SimConfig& config, const AuditLaw& law, double floor) {
    return convergence_orders(eq, config, {law}, floor).front();
}

namespace {

AuditInstance instance(const std::string& id, const std::string& description, Equation eq, SimConfig cfg) {
    AuditInstance in;
    in.id = id;
    in.description = description;
    in.config = cfg;
    auto matches = match(eq);
    if (matches.empty()) throw Error("audit instance " + id + " matches no catalog case");
    for (const auto& m : matches) {
        in.cases.push_back(m.entry->id);
        auto laws = audit_laws(laws_for(m, eq));
        for (std::size_t i = 0; i < laws.size(); ++i) {
            bool seen = std::any_of(in.laws.begin(), in.laws.end(), [&](const AuditLaw& l) { return l.F == laws[i].F; });
            if (seen) continue;
            laws[i].label = "case " + m.entry->id + " law " + std::to_string(i + 1);
            in.laws.push_back(laws[i]);
        }
    }
    in.eq = std::move(eq);
    return in;
}

}  // namespace

std::vector<AuditInstance> audit_instances() {
    std::vector<AuditInstance> out;
    auto P = [](const char* s) { return parse(s); };
    {
        SimConfig c;
        c.a = -3;
        c.b = 3;
        c.T = 0.1;
        c.initial = {"gaussian", 0.5, 0.0, 0.6, 0.0};
        out.push_back(instance("case1", "f = 1 + x^2/4, A = 1 + u^2, B = u^2",
                               Equation::make(P("1 + x^2/4"), Expr(1), Expr(1), P("1 + u^2"), P("u^2")), c));
    }
    {
        SimConfig c;
        c.a = -1;
        c.b = 4;
        c.T = 0.1;
        c.initial = {"gaussian", 0.25, 1.5, 0.4, 0.0};
        out.push_back(instance("case3", "f = h = exp(x), A = 1, B = 1",
                               Equation::make(P("exp(x)"), Expr(1), P("exp(x)"), Expr(1), Expr(1)), c));
    }
    {
        SimConfig c;
        c.a = -3;
        c.b = 3;
        c.T = 0.1;
        c.initial = {"gaussian", 0.6, 0.3, 0.6, 0.0};
        out.push_back(instance("case5a", "f = 1, A = 1 + u^2, B = 0",
                               Equation::make(Expr(1), Expr(1), Expr(1), P("1 + u^2"), Expr(0)), c));
    }
    {
        SimConfig c;
        c.a = -3;
        c.b = 3;
        c.T = 0.1;
        c.initial = {"gaussian", 0.5, 0.0, 0.6, 0.0};
        Equation eq = Equation::make(Expr(1), Expr(1), Expr(1), P("1 + u^2"), P("2*u + 4/3*u^3"));
        out.push_back(instance("potential1", "f = h = 1, A = 1 + u^2, int B = u int A", std::move(eq), c));
    }
    {
        SimConfig c;
        c.a = -3;
        c.b = 3;
        c.T = 0.1;
        c.initial = {"gaussian", 0.5, 0.3, 0.6, 1.0};
        out.push_back(instance("potential2", "f = 1, A = u^-2, B = 0 on u > 0",
                               Equation::make(Expr(1), Expr(1), Expr(1), P("u^-2"), Expr(0)), c));
    }
    {
        SimConfig c;
        c.a = -3;
        c.b = 3;
        c.T = 0.1;
        c.initial = {"gaussian", 0.3, 0.0, 0.6, 0.0};
        out.push_back(instance("potential3", "f = 1, A = 1, B = 2u",
                               Equation::make(Expr(1), Expr(1), Expr(1), Expr(1), P("2*u")), c));
    }
    {
        SimConfig c;
        c.a = 0.5;
        c.b = 2;
        c.T = 0.05;
        c.initial = {"gaussian", 0.5, 1.25, 0.2, 2.0};
        out.push_back(instance("potential4", "f = x^-2, A = u^-2, B = 0 on x, u > 0",
                               Equation::make(P("x^-2"), Expr(1), Expr(1), P("u^-2"), Expr(0)), c));
    }
    return out;
}

AuditInstance corrupted_control() {
    AuditInstance in = audit_instances()[2];
    in.id = "corrupted";
    in.description = "case 5a instance with the sign of the flux flipped, data not decaying at the ends";
    in.config.initial = {"gaussian", 0.6, 2.0, 0.8, 0.0};
    for (auto& l : in.laws) {
        l.G = -l.G;
        l.label += " (flux sign flipped)";
    }
    return in;
}

}  // namespace jetcl
