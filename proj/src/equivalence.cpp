#include "jetcl/equivalence.hpp"

#include "jetcl/catalog.hpp"
#include "jetcl/errors.hpp"

#include <sstream>

namespace jetcl {

namespace {

bool is_affine(const Expr& X) { return diff(X, sym::x(), 2).is_zero(); }

/// Inverse of x -> a x + b.
Expr affine_inverse(const Expr& X) {
    Expr a = diff(X, sym::x());
    Expr b = substitute(X, {{sym::x(), Expr(0)}});
    return divide(sym::x() - b, a);
}

std::optional<Expr> closed_inverse(const EquivTransform& tr) {
    if (is_affine(tr.X)) return affine_inverse(tr.X);
    return tr.X_inverse;
}

std::optional<double> numeric(const Expr& e) {
    if (!free_symbols(e).empty()) return std::nullopt;
    try {
        return eval_numeric(e, {}, NoOpaqueModel());
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<Interval> map_interval(const Expr& map, const Expr& var, Interval in) {
    auto lo = numeric(substitute(map, {{var, Expr(Rational(in.lo))}}));
    auto hi = numeric(substitute(map, {{var, Expr(Rational(in.hi))}}));
    if (!lo || !hi) return std::nullopt;
    return Interval{std::min(*lo, *hi), std::max(*lo, *hi)};
}

/// Substitution of the old independent variables, parameters and u by their
/// expressions in the new variables.
Bindings old_in_new(const PointTransform& pt) {
    Bindings b = pt.parameters;
    b[sym::t()] = pt.t_old;
    b[sym::x()] = pt.x_old;
    b[sym::u()] = pt.u_old;
    return b;
}

Expr in_new(const PointTransform& pt, const Expr& e) { return substitute(e, old_in_new(pt)); }

struct Partials {
    Expr tt, tx, xt, xx;  // d t~/dt, d t~/dx, d x~/dt, d x~/dx in the new variables
};

Partials partials(const PointTransform& pt) {
    if (depends_on(pt.t_new, sym::u()) || depends_on(pt.x_new, sym::u()))
        throw Error("point transformation mixes u into t or x");
    Bindings b = pt.parameters;
    b[sym::t()] = pt.t_old;
    b[sym::x()] = pt.x_old;
    return {substitute(diff(pt.t_new, sym::t()), b), substitute(diff(pt.t_new, sym::x()), b),
            substitute(diff(pt.x_new, sym::t()), b), substitute(diff(pt.x_new, sym::x()), b)};
}

Equation skeleton(const PointTransform& pt, const Equation& source) {
    Equation eq = source;
    eq.rules.insert(eq.rules.end(), pt.rules.begin(), pt.rules.end());
    if (pt.domain) eq.domain = *pt.domain;
    return eq;
}

}  // namespace

// ---------------------------------------------------------------------------
// Group elements

PointTransform EquivTransform::point(const SampleDomain& source) const {
    PointTransform pt;
    pt.label = label;
    Expr t = sym::t(), x = sym::x(), u = sym::u();
    pt.t_new = d1 * t + d2;
    pt.t_old = divide(t - d2, d1);
    pt.u_new = d3 * u + d4;
    pt.u_old = divide(u - d4, d3);
    pt.x_new = X;
    if (auto inv = closed_inverse(*this)) {
        pt.x_old = *inv;
    } else {
        Expr inv_x = Expr::opaque("Xinv", {x});
        pt.x_old = inv_x;
        pt.rules.push_back({"Xinv", {x}, 0, Expr(1) / substitute(diff(X, x), {{x, inv_x}})});
    }
    SampleDomain dom = source;
    if (auto r = map_interval(pt.t_new, t, source.range_for(t))) dom.ranges["t"] = *r;
    if (auto r = map_interval(pt.x_new, x, source.range_for(x))) dom.ranges["x"] = *r;
    pt.domain = dom;
    return pt;
}

EquivTransform compose(const EquivTransform& s, const EquivTransform& f) {
    EquivTransform c;
    c.label = s.label + " o " + f.label;
    c.d1 = s.d1 * f.d1;
    c.d2 = s.d1 * f.d2 + s.d2;
    c.d3 = s.d3 * f.d3;
    c.d4 = s.d3 * f.d4 + s.d4;
    c.e1 = s.e1 * f.e1;
    c.e2 = s.e2 * f.e2;
    c.e3 = s.e3 * f.e3;
    c.e4 = f.e4 + divide(s.e4 * f.e2, f.e3);
    c.X = substitute(s.X, {{sym::x(), f.X}});
    auto si = closed_inverse(s);
    auto fi = closed_inverse(f);
    if (si && fi) c.X_inverse = substitute(*fi, {{sym::x(), *si}});
    return c;
}

Equation apply_to_equation(const EquivTransform& tr, const Equation& eq) {
    PointTransform pt = tr.point(eq.domain);
    Expr x = sym::x(), u = sym::u();
    Expr phi(1);
    if (!tr.e4.is_zero()) {
        Expr ratio = divide(eq.h, eq.g);
        phi = exp(-tr.e4 * Expr::primitive(substitute(ratio, {{x, Expr::dummy()}}), x));
    }
    Bindings at_x{{x, pt.x_old}};
    Bindings at_u{{u, pt.u_old}};
    Expr Xx = substitute(diff(tr.X, x), at_x);
    Expr ph = substitute(phi, at_x);
    Expr f = substitute(eq.f, at_x), g = substitute(eq.g, at_x), h = substitute(eq.h, at_x);
    Expr A = substitute(eq.A, at_u), B = substitute(eq.B, at_u);

    Equation out = Equation::make(divide(tr.e1 * tr.d1 * ph * f, Xx), divide(tr.e1 * Xx * ph * g, tr.e2),
                                  divide(tr.e1 * ph * h, tr.e3), tr.e2 * A, tr.e3 * (B + tr.e4 * A));
    out.int_a = tr.e2 * tr.d3 * substitute(eq.int_a, at_u);
    out.int_b = tr.e3 * tr.d3 * substitute(eq.int_b + tr.e4 * eq.int_a, at_u);
    out.parameters = eq.parameters;
    out.rules = eq.rules;
    out.rules.insert(out.rules.end(), pt.rules.begin(), pt.rules.end());
    out.domain = *pt.domain;
    out.order_cap = eq.order_cap;
    return out;
}

// ---------------------------------------------------------------------------
// Change of variables

Expr to_new_variables(const PointTransform& pt, const Expr& e, const Equation&, const Equation& target) {
    JetContext ctx = target.context();
    Partials p = partials(pt);
    auto d_old_t = [&](const Expr& v) {
        return p.tt * total_derivative(v, Dir::T, ctx) + p.xt * total_derivative(v, Dir::X, ctx);
    };
    auto d_old_x = [&](const Expr& v) {
        return p.tx * total_derivative(v, Dir::T, ctx) + p.xx * total_derivative(v, Dir::X, ctx);
    };
    Bindings b = old_in_new(pt);
    std::map<std::pair<int, int>, Expr> memo;
    for (const auto& j : jets_of(normalize(e), "u")) {
        if (j.nt() == 0 && j.nx() == 0) continue;
        Expr v = pt.u_old;
        for (int a = 0; a < j.nt(); ++a) v = d_old_t(v);
        for (int k = 0; k < j.nx(); ++k) v = d_old_x(v);
        b[j] = v;
    }
    return apply_rules(substitute(e, b), ctx.rules);
}

Expr operator_in_new_variables(const PointTransform& pt, const Equation& source, const Equation& target) {
    return to_new_variables(pt, source.lhs(), source, target);
}

Expr operator_factor(const PointTransform& pt, const Equation& source, const Equation& target,
                     const ZeroTestOptions& options) {
    Expr L = operator_in_new_variables(pt, source, target);
    Collected parts = collect(L, {sym::ut()});
    Expr ct(0);
    for (const auto& [powers, c] : parts) {
        if (powers[0] > 1) throw Error("transformed operator is not linear in u_t");
        if (powers[0] == 1) ct = c;
    }
    Expr kappa = divide(ct, target.f);
    if (!jets_of(kappa, "u").empty() || depends_on(kappa, sym::u()))
        throw Error("transformed operator is not a function multiple of the target");
    ZeroTest z = is_zero(L - kappa * target.lhs(), target.domain, options);
    if (!z.zero()) throw Error("transformed operator is not a multiple of the target operator");
    return kappa;
}

DerivedTarget derive_target(const PointTransform& pt, const Equation& source, const ZeroTestOptions& options) {
    Equation work = skeleton(pt, source);
    Expr L = operator_in_new_variables(pt, source, work);
    Expr ut = sym::ut(), uxx = sym::u(2), ux = sym::u(1), u = sym::u();
    Collected parts = collect(L, {ut, uxx, ux});
    Expr ct(0), cxx(0), cx(0);
    for (const auto& [pw, c] : parts) {
        if (pw == std::vector<int>{1, 0, 0}) ct = c;
        else if (pw == std::vector<int>{0, 1, 0}) cxx = c;
        else if (pw == std::vector<int>{0, 0, 1}) cx = c;
        else if (pw != std::vector<int>{0, 0, 2}) throw Error("image leaves the class of equations");
    }
    auto u_free = [&](const Expr& e) { return jets_of(e, "u").empty() && !depends_on(e, u); };

    Expr A = Expr(pt.a_sign) * in_new(pt, source.A);
    Expr kappa = divide(-cxx, A);
    if (!u_free(kappa)) throw Error("image nonlinearity is not proportional to A");
    Expr f = divide(ct, kappa);
    Expr B(0), h(1);
    if (!is_zero(cx, work.domain, options).zero()) {
        B = in_new(pt, source.B);
        if (B.is_zero()) throw Error("image has a first-order term but the source has B = 0");
        h = divide(-cx, kappa * B);
        if (!u_free(h)) throw Error("image first-order term does not factor as h(x) B(u)");
    }
    Equation target = Equation::make(f, Expr(1), h, A, B);
    Expr du = diff(pt.u_old, u);
    if (!depends_on(du, u)) {
        target.int_a = divide(Expr(pt.a_sign) * in_new(pt, source.int_a), du);
        if (!B.is_zero() && !B.is_number()) target.int_b = divide(in_new(pt, source.int_b), du);
    }
    target.parameters = source.parameters;
    target.rules = work.rules;
    target.domain = work.domain;
    target.order_cap = source.order_cap;
    Expr k = operator_factor(pt, source, target, options);
    return {std::move(target), k};
}

Expr jacobian(const PointTransform& pt) {
    Partials p = partials(pt);
    return p.tt * p.xx - p.tx * p.xt;
}

std::pair<Expr, Expr> pushforward_vector(const PointTransform& pt, const Equation& source, const Equation& target,
                                         const Expr& F, const Expr& G) {
    Partials p = partials(pt);
    Expr J = p.tt * p.xx - p.tx * p.xt;
    Expr Fn = to_new_variables(pt, reduce_mod_equation(F, source), source, target);
    Expr Gn = to_new_variables(pt, reduce_mod_equation(G, source), source, target);
    Expr Ft = divide(p.tt * Fn + p.tx * Gn, J);
    Expr Gt = divide(p.xt * Fn + p.xx * Gn, J);
    return {reduce_mod_equation(Ft, target), reduce_mod_equation(Gt, target)};
}

Expr pushforward_characteristic(const PointTransform& pt, const Equation& source, const Equation& target,
                                const Expr& lambda, const ZeroTestOptions& options) {
    Expr kappa = operator_factor(pt, source, target, options);
    Expr ln = to_new_variables(pt, reduce_mod_equation(lambda, source), source, target);
    return reduce_mod_equation(divide(kappa * ln, jacobian(pt)), target);
}

std::pair<Expr, Expr> infinitesimal_action(const Equation& eq, const Generator& gen, const Expr& F, const Expr& G) {
    JetContext ctx = eq.context();
    auto Dt = [&](const Expr& e) { return total_derivative(e, Dir::T, ctx); };
    auto Dx = [&](const Expr& e) { return total_derivative(e, Dir::X, ctx); };
    Expr Q = gen.eta - gen.xi_t * sym::ut() - gen.xi_x * sym::u(1);
    auto prolonged = [&](const Expr& E) {
        Expr out = gen.xi_t * Dt(E) + gen.xi_x * Dx(E);
        for (const auto& j : jets_of(E, "u")) {
            Expr q = Q;
            for (int a = 0; a < j.nt(); ++a) q = Dt(q);
            for (int b = 0; b < j.nx(); ++b) q = Dx(q);
            out += q * diff(E, j);
        }
        return out;
    };
    Expr Ft = -prolonged(F) + Dx(gen.xi_t) * G - Dx(gen.xi_x) * F;
    Expr Gt = -prolonged(G) + Dt(gen.xi_x) * F - Dt(gen.xi_t) * G;
    return {reduce_mod_equation(Ft, eq), reduce_mod_equation(Gt, eq)};
}

// ---------------------------------------------------------------------------
// Named transformations

EquivTransform identity_transform() {
    EquivTransform tr;
    tr.label = "identity";
    return tr;
}

EquivTransform gauge(const Equation& eq) {
    EquivTransform tr;
    tr.label = "gauge";
    tr.X = Expr::primitive(substitute(Expr(1) / eq.g, {{sym::x(), Expr::dummy()}}), sym::x());
    return tr;
}

std::optional<Expr> closed_form_inverse(const Expr& X, const SampleDomain& domain, const ZeroTestOptions& options) {
    const Expr x = sym::x();
    Expr dX = diff(X, x);
    auto accept = [&](const Expr& inv) -> std::optional<Expr> {
        if (is_zero(substitute(inv, {{x, X}}) - x, domain, options).zero()) return inv;
        return std::nullopt;
    };
    auto constant = [&](const Expr& e) { return !depends_on(e, x); };
    const std::vector<Rational> ks = {Rational(1),  Rational(-1),    Rational(2),    Rational(-2),   Rational(3),
                                      Rational(-3), Rational(1, 2), Rational(-1, 2), Rational(1, 3), Rational(-1, 3)};
    for (const auto& k : ks) {
        Expr a = normalize(dX / (Expr(k) * pow(x, Expr(k - 1))));
        if (!constant(a)) continue;
        Expr b = normalize(X - a * pow(x, Expr(k)));
        if (!constant(b)) continue;
        if (auto inv = accept(normalize(pow((x - b) / a, Expr(Rational(1) / k))))) return inv;
    }
    for (const auto& k : ks) {
        Expr a = normalize(dX / (Expr(k) * exp(Expr(k) * x)));
        if (!constant(a)) continue;
        Expr b = normalize(X - a * exp(Expr(k) * x));
        if (!constant(b)) continue;
        if (auto inv = accept(normalize(ln((x - b) / a) / Expr(k)))) return inv;
    }
    Expr a = normalize(dX * x);
    if (constant(a) && !a.is_zero()) {
        Expr b = normalize(X - a * ln(x));
        if (constant(b))
            if (auto inv = accept(normalize(exp((x - b) / a)))) return inv;
    }
    return std::nullopt;
}

EquivTransform translate_x(const Expr& a) {
    EquivTransform tr;
    tr.label = "translate-x";
    tr.X = sym::x() + a;
    return tr;
}

EquivTransform translate_t(const Expr& a) {
    EquivTransform tr;
    tr.label = "translate-t";
    tr.d2 = a;
    return tr;
}

EquivTransform scale(const Expr& t_factor, const Expr& x_factor, const Expr& u_factor) {
    EquivTransform tr;
    tr.label = "scale";
    tr.d1 = t_factor;
    tr.X = x_factor * sym::x();
    tr.d3 = u_factor;
    return tr;
}

EquivTransform shift_b(const Expr& e4) {
    EquivTransform tr;
    tr.label = "shift-b";
    tr.e4 = e4;
    return tr;
}

PointTransform reduce_5b() {
    PointTransform pt;
    pt.label = "reduce-5b";
    pt.x_new = sym::x() + sym::t();
    pt.x_old = sym::x() - sym::t();
    return pt;
}

PointTransform reduce_5c() {
    PointTransform pt;
    pt.label = "reduce-5c";
    Expr t = sym::t(), x = sym::x();
    pt.t_new = exp(t);
    pt.x_new = x + t;
    pt.t_old = ln(t);
    pt.x_old = x - ln(t);
    return pt;
}

PointTransform reduce_5d(const Expr& mu) {
    PointTransform pt;
    pt.label = "reduce-5d";
    Expr t = sym::t(), x = sym::x();
    pt.x_new = x * exp(t);
    if ((mu + 1).is_zero()) {
        pt.x_old = x * exp(-t);
    } else {
        Expr m = mu + 1;
        pt.t_new = divide(exp(m * t) - 1, m);
        pt.t_old = divide(ln(1 + m * t), m);
        pt.x_old = x * pow(1 + m * t, Expr(-1) / m);
        SampleDomain d;
        d.set("t", 0.1, 0.4);
        pt.domain = d;
    }
    return pt;
}

PointTransform reflect() {
    PointTransform pt;
    pt.label = "reflect";
    pt.t_new = -sym::t();
    pt.x_new = -sym::x();
    pt.t_old = -sym::t();
    pt.x_old = -sym::x();
    pt.parameters[Expr::parameter("mu")] = -Expr::parameter("mu");
    pt.a_sign = -1;
    SampleDomain d;
    d.set("x", -2.2, -1.2);
    pt.domain = d;
    return pt;
}

std::vector<std::string> transform_names() {
    return {"gauge",   "translate-x", "translate-t", "scale-t",   "scale-x",   "scale-u",
            "shift-b", "reduce-5b",   "reduce-5c",   "reduce-5d", "reflect"};
}

std::optional<EquivTransform> named_equivalence(const std::string& name, const Equation& eq, const Expr& value) {
    if (name == "gauge") return gauge(eq);
    if (name == "translate-x") return translate_x(value);
    if (name == "translate-t") return translate_t(value);
    if (name == "scale-t") return scale(value, Expr(1), Expr(1));
    if (name == "scale-x") return scale(Expr(1), value, Expr(1));
    if (name == "scale-u") return scale(Expr(1), Expr(1), value);
    if (name == "shift-b") return shift_b(value);
    return std::nullopt;
}

PointTransform named_transform(const std::string& name, const Equation& eq, const Expr& value) {
    if (auto tr = named_equivalence(name, eq, value)) {
        tr->label = name;
        return tr->point(eq.domain);
    }
    if (name == "reduce-5b") return reduce_5b();
    if (name == "reduce-5c") return reduce_5c();
    if (name == "reduce-5d") return reduce_5d(value);
    if (name == "reflect") return reflect();
    throw Error("unknown transformation '" + name + "'");
}

// ---------------------------------------------------------------------------
// Generation replays

namespace {

using Vec = std::pair<Expr, Expr>;

Vec lin(const std::vector<std::pair<Expr, Vec>>& parts) {
    Expr F(0), G(0);
    for (const auto& [c, v] : parts) {
        F += c * v.first;
        G += c * v.second;
    }
    return {F, G};
}

std::string show(const Vec& v) { return "(" + to_string(v.first) + ", " + to_string(v.second) + ")"; }

GenerationStep step(const std::string& id, const std::string& what, const Equation& eq, const Vec& got,
                    const Vec& want, const ZeroTestOptions& options) {
    GenerationStep s{id, what, false, ""};
    try {
        Verification v = verify(eq, got.first, got.second, options);
        s.passed = v.valid && equivalent(eq, got, want, options);
        s.detail = "generated " + show(got) + ", expected " + show(want) + ", conserved: " +
                   std::string(v.valid ? "yes" : "no");
    } catch (const std::exception& e) {
        s.detail = e.what();
    }
    return s;
}

Vec vec(const LawTemplate& l) { return {l.F, l.G}; }

std::vector<GenerationStep> identity_steps(const std::string& id, const ZeroTestOptions& options) {
    const CatalogCase& c = catalog_case(id);
    Equation eq = instantiate_host(c);
    PointTransform pt = identity_transform().point(eq.domain);
    Equation target = apply_to_equation(identity_transform(), eq);
    std::vector<GenerationStep> out;
    auto ts = templates_for(c, eq, {});
    for (std::size_t i = 0; i < ts.size(); ++i) {
        Vec v = vec(ts[i]);
        out.push_back(step(id, "law " + std::to_string(i + 1) + " generates itself", target,
                           pushforward_vector(pt, eq, target, v.first, v.second), v, options));
    }
    return out;
}

std::vector<GenerationStep> steps_5a(const ZeroTestOptions& options) {
    const CatalogCase& c = catalog_case("5a");
    Equation eq = instantiate_host(c);
    EquivTransform tr = translate_x(Expr(1));
    Equation target = apply_to_equation(tr, eq);
    auto src = templates_for(c, eq, {});
    auto img = templates_for(c, target, {});
    Vec pushed = pushforward_vector(tr.point(eq.domain), eq, target, src[1].F, src[1].G);
    Vec diff_vec = lin({{Expr(1), pushed}, {Expr(-1), vec(img[1])}});
    return {step("5a", "x~ = x + 1 maps the second law onto minus the first plus the second", target, diff_vec,
                 lin({{Expr(-1), vec(img[0])}}), options)};
}

std::vector<GenerationStep> steps_5a_f1(const ZeroTestOptions& options) {
    const CatalogCase& c = catalog_case("5a");
    Equation eq = Equation::make(Expr(1), Expr(1), Expr(1), sym::A(sym::u()), Expr(0));
    EquivTransform tr = translate_x(Expr(-1));
    Equation target = apply_to_equation(tr, eq);
    std::vector<GenerationStep> out;
    GenerationStep same{"5a-f1", "x~ = x - 1 is a symmetry when f = 1", target.same_as(eq), ""};
    same.detail = "image f = " + to_string(target.f);
    out.push_back(same);
    auto ts = templates_for(c, eq, {});
    Vec pushed = pushforward_vector(tr.point(eq.domain), eq, target, ts[1].F, ts[1].G);
    Vec d = lin({{Expr(1), vec(ts[1])}, {Expr(-1), pushed}});
    GenerationStep s = step("5a-f1", "second law minus its translate is minus the first law", eq, d,
                            lin({{Expr(-1), vec(ts[0])}}), options);
    Verification claimed = verify(eq, -sym::u(), -sym::A(sym::u()) * sym::u(1), options);
    s.detail += claimed.valid ? "; (-u, -A u_x) is conserved" : "; (-u, -A u_x) is not conserved";
    out.push_back(s);
    return out;
}

std::vector<GenerationStep> steps_6(const ZeroTestOptions& options) {
    const CatalogCase& c = catalog_case("6");
    Equation eq = instantiate_host(c);
    EquivTransform tr = translate_t(Expr(1));
    Equation target = apply_to_equation(tr, eq);
    std::vector<GenerationStep> out;
    out.push_back({"6", "t~ = t + 1 is a symmetry", target.same_as(eq), ""});
    auto ts = templates_for(c, eq, {});
    Vec pushed = pushforward_vector(tr.point(eq.domain), eq, target, ts[1].F, ts[1].G);
    Expr mu = Expr::parameter("mu");
    out.push_back(step("6", "second law minus exp(mu) times its translate is the first law", eq,
                       lin({{Expr(1), vec(ts[1])}, {-exp(mu), pushed}}), vec(ts[0]), options));
    Vec act = infinitesimal_action(eq, {Expr(1), Expr(0), Expr(0)}, ts[1].F, ts[1].G);
    out.push_back(step("6", "d/dt acting on the second law gives minus mu times it minus the first law", eq, act,
                       lin({{-mu, vec(ts[1])}, {Expr(-1), vec(ts[0])}}), options));
    return out;
}

std::vector<GenerationStep> steps_7(const ZeroTestOptions& options) {
    const CatalogCase& c = catalog_case("7");
    Equation eq = instantiate_host(c);
    auto ts = templates_for(c, eq, {});
    Expr mu = Expr::parameter("mu");
    Vec v1 = vec(ts[0]), v2 = vec(ts[1]);
    Vec gen = lin({{Expr(Rational(1, 2)), v1}, {Expr(Rational(1, 2)), v2}});
    std::vector<GenerationStep> out;
    {
        Expr lam = reduce_mod_equation(characteristic_of(eq, gen.first, gen.second, options), eq);
        Expr want = exp(2 * mu * sym::t()) * (sym::x() * cosh(sym::t()) - sinh(sym::t()));
        GenerationStep s{"7", "generator characteristic is exp(2 mu t)(x cosh t - sinh t)",
                         is_zero(lam - want, eq.domain, options).zero(), "characteristic " + to_string(lam)};
        out.push_back(s);
    }
    EquivTransform tr = translate_t(Expr(1));
    Vec T = pushforward_vector(tr.point(eq.domain), eq, eq, gen.first, gen.second);
    Expr a = exp(-(2 * mu + 1)), b = exp(-(2 * mu - 1));
    out.push_back(step("7", "time translation of the generator yields the first law", eq,
                       lin({{divide(Expr(2), a - b), T}, {divide(-2 * b, a - b), gen}}), v1, options));
    out.push_back(step("7", "time translation of the generator yields the second law", eq,
                       lin({{divide(Expr(2), b - a), T}, {divide(-2 * a, b - a), gen}}), v2, options));

    PointTransform pt = reflect();
    GenerationStep s{"7", "reflection maps the first characteristic to exp((2 mu - 1) t)(x + 1)", false, ""};
    try {
        DerivedTarget img = derive_target(pt, eq, options);
        Expr lam = pushforward_characteristic(pt, eq, img.target, ts[0].lambda, options);
        Expr want = exp((2 * mu - 1) * sym::t()) * (sym::x() + 1);
        Expr x = sym::x();
        Expr f7 = pow(abs(x - 1), mu - Rational(3, 2)) * pow(abs(x + 1), -mu - Rational(3, 2));
        Expr h7 = pow(abs(x - 1), mu - Rational(1, 2)) * pow(abs(x + 1), -mu - Rational(1, 2));
        bool form = is_zero(img.target.f - f7, img.target.domain, options).zero() &&
                    is_zero(img.target.h - h7, img.target.domain, options).zero() &&
                    img.target.A == -sym::A(sym::u()) && img.target.B.is_one();
        bool adj = is_zero(adjoint_frechet_apply(img.target, lam), img.target.domain, options).zero();
        Vec pushed = pushforward_vector(pt, eq, img.target, ts[0].F, ts[0].G);
        Expr lam_v = characteristic_of(img.target, pushed.first, pushed.second, options);
        bool compat = is_zero(reduce_mod_equation(lam_v - lam, img.target), img.target.domain, options).zero();
        s.passed = form && adj && compat && is_zero(lam - want, img.target.domain, options).zero();
        s.detail = "image characteristic " + to_string(lam) + ", image f = " + to_string(img.target.f) +
                   ", A~ = " + to_string(img.target.A) + ", kappa = " + to_string(img.kappa) +
                   (form ? ", case 7 form with A~ = -A on x < -1" : ", image is not of case 7 form");
    } catch (const std::exception& e) {
        s.detail = e.what();
    }
    out.push_back(s);
    return out;
}

std::vector<GenerationStep> steps_8(const ZeroTestOptions& options) {
    const CatalogCase& c = catalog_case("8");
    Equation eq = instantiate_host(c);
    auto ts = templates_for(c, eq, {});
    Expr mu = Expr::parameter("mu");
    Vec va = vec(ts[0]), vb = vec(ts[1]);
    EquivTransform tr = translate_t(Expr(1));
    PointTransform pt = tr.point(eq.domain);
    Vec Ta = pushforward_vector(pt, eq, eq, va.first, va.second);
    Vec Tb = pushforward_vector(pt, eq, eq, vb.first, vb.second);
    Expr c1 = cos(Expr(1)), s1 = sin(Expr(1));
    return {step("8", "time translation of the first law yields the second", eq,
                 lin({{divide(exp(mu), s1), Ta}, {divide(-c1, s1), va}}), vb, options),
            step("8", "time translation of the second law yields the first", eq,
                 lin({{divide(c1, s1), vb}, {divide(-exp(mu), s1), Tb}}), va, options)};
}

}  // namespace

std::vector<std::string> generation_cases() { return {"1", "2", "3", "4", "5a", "5a-f1", "6", "7", "8"}; }

std::vector<GenerationStep> demonstrate_generation(const std::string& id, const ZeroTestOptions& options) {
    if (id == "1" || id == "2" || id == "3" || id == "4") return identity_steps(id, options);
    if (id == "5a") return steps_5a(options);
    if (id == "5a-f1") return steps_5a_f1(options);
    if (id == "6") return steps_6(options);
    if (id == "7") return steps_7(options);
    if (id == "8") return steps_8(options);
    throw Error("no generation replay for case '" + id + "'");
}

}  // namespace jetcl
