#include "jetcl/contraction.hpp"

#include "jetcl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace jetcl {

namespace {

const char* kPowerFamily = R"([contraction power-to-exponential]
title = x^(mu-1) u_t = (A u_x)_x / mu + x^mu u_x onto exp(x) u_t = (A u_x)_x + exp(x) u_x
source.f = x^(mu - 1)
source.h = x^mu
source.A = A(u)/mu
x = 1 + x/mu
t = t/mu
target.f = exp(x)
target.h = exp(x)

[correspondence lambda1]
source = exp(mu*t)
target = exp(t)

[correspondence lambda2]
source = mu*(exp((mu + 1)*t)*x - exp(mu*t))
target = exp(t)*(x + t)

[correspondence lambda2-expanded]
frame = target
source = exp(t)*((exp(t/mu) - 1)*mu + x*exp(t/mu))
target = exp(t)*(x + t)

[correspondence lambda2-reversed]
role = informational
source = mu*(exp(mu*t) - exp((mu + 1)*t)*x)
target = exp(t)*(x + t)
)";

const char* kCase7Family = R"([contraction case7-to-exponential]
title = case 7 family onto x^-3 exp(-nu/x) u_t = (A u_x)_x + exp(-nu/x)/x u_x
parameters = nu
nu = 1
source.f = abs((x - 1)/(x + 1))^mu*abs(x^2 - 1)^(-3/2)
source.h = abs((x - 1)/(x + 1))^mu*abs(x^2 - 1)^(-1/2)
x = 2*mu*x/nu
t = nu*t/(2*mu)
target.f = x^-3*exp(-nu/x)
target.h = exp(-nu/x)/x

[correspondence lambda1]
source = nu/(2*mu)*exp((2*mu + 1)*t)*(x - 1)
target = exp(nu*t)*x

[correspondence lambda1-unscaled]
role = informational
frame = target
source = exp(nu*t)*exp(nu*t/(2*mu))/(nu/(2*mu))*(x - nu/(2*mu))
target = exp(nu*t)*x

[correspondence lambda2]
role = alternative
source = (exp((2*mu + 1)*t)*(x - 1) - exp((2*mu - 1)*t)*(x + 1))/2
target = exp(nu*t)*(t*x - 1)

[correspondence lambda2-asymmetric]
role = alternative
frame = target
source = exp(nu*t)*(x*(exp(nu*t/mu) - 1)/(nu/mu) - (exp(nu*t/mu) + 1)/2)*exp(nu*t/(2*mu))
target = exp(nu*t)*(t*x - 1)
)";

LimitRole parse_role(const CaseEntry* e) {
    if (!e || e->value == "required") return LimitRole::Required;
    if (e->value == "alternative") return LimitRole::Alternative;
    if (e->value == "informational") return LimitRole::Informational;
    throw CaseFileError("role must be required, alternative or informational", e->line);
}

double value_at(const Expr& e, double t, double x, double mu) {
    static const std::string kt = sym::t().key(), kx = sym::x().key(), km = contraction_parameter().key();
    Point p{{kt, t}, {kx, x}, {km, mu}};
    double v = eval_numeric(e, p, NoOpaqueModel());
    if (!std::isfinite(v)) throw DomainError("non-finite value of " + to_string(e));
    return v;
}

void check_schedule(const std::vector<double>& schedule) {
    if (schedule.empty()) throw Error("empty mu schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] > schedule[i - 1])) throw Error("mu schedule must be increasing");
}

LimitItem series(const std::string& label, LimitRole role, const Expr& source, const Expr& target, const SamplePoints& points,
                 const std::vector<double>& schedule, const LimitOptions& options) {
    LimitItem item;
    item.label = label;
    item.role = role;
    item.source_text = to_string(source);
    item.target_text = to_string(target);
    item.converges = true;
    for (auto [t, x] : points) {
        PointSeries ps;
        ps.t = t;
        ps.x = x;
        double want = value_at(target, t, x, schedule.front());
        for (double mu : schedule) {
            double v = value_at(source, t, x, mu);
            ps.values.push_back(v);
            ps.errors.push_back(std::abs(v - want));
        }
        ps.monotone = ps.strictly_decreasing = true;
        for (std::size_t i = 1; i < ps.errors.size(); ++i) {
            if (ps.errors[i] > ps.errors[i - 1] + options.slack) ps.monotone = false;
            if (!(ps.errors[i] < ps.errors[i - 1])) ps.strictly_decreasing = false;
        }
        item.final_error = std::max(item.final_error, ps.errors.back());
        if (!ps.monotone || !(ps.errors.back() < options.tolerance)) item.converges = false;
        item.points.push_back(std::move(ps));
    }
    return item;
}

bool verdict(const std::vector<LimitItem>& items) {
    bool ok = true, any_alt = false, alt_ok = false;
    for (const auto& it : items) {
        if (it.role == LimitRole::Required) ok = ok && it.converges;
        if (it.role == LimitRole::Alternative) {
            any_alt = true;
            alt_ok = alt_ok || it.converges;
        }
    }
    return ok && (!any_alt || alt_ok);
}

Expr old_to_new(const ContractionSpec& spec, const Expr& e) {
    return substitute(e, {{sym::x(), spec.x_of}, {sym::t(), spec.t_of}});
}

}  // namespace

const char* role_name(LimitRole role) {
    switch (role) {
    case LimitRole::Required: return "required";
    case LimitRole::Alternative: return "alternative";
    case LimitRole::Informational: return "informational";
    }
    return "?";
}

Expr contraction_parameter() { return Expr::parameter("mu"); }

SamplePoints default_sample_points() {
    SamplePoints out;
    for (double t : {0.5, 1.0, 1.5})
        for (double x : {0.5, 1.0, 1.5}) out.emplace_back(t, x);
    return out;
}

std::vector<double> default_schedule() { return {10.0, 100.0, 1000.0, 10000.0}; }

LimitReport check_limit(const ContractionSpec& spec, const SamplePoints& points, const std::vector<double>& schedule,
                        const LimitOptions& options) {
    check_schedule(schedule);
    LimitReport report;
    report.id = spec.id;
    report.schedule = schedule;
    for (const auto& c : spec.correspondences) {
        Expr src = c.in_target_variables ? c.source : old_to_new(spec, c.source);
        report.items.push_back(series(c.label, c.role, src, c.target, points, schedule, options));
    }
    report.passed = verdict(report.items);
    return report;
}

LimitReport check_equation_limit(const ContractionSpec& spec, const SamplePoints& points,
                                 const std::vector<double>& schedule, const LimitOptions& options) {
    check_schedule(schedule);
    Expr a = diff(spec.x_of, sym::x()), b = diff(spec.t_of, sym::t());
    for (const Expr& s : {a, b})
        if (depends_on(s, sym::x()) || depends_on(s, sym::t())) throw Error("contraction change is not affine");
    Expr f = a * a / (b * spec.source_a_scale) * old_to_new(spec, spec.source_f);
    Expr h = a / spec.source_a_scale * old_to_new(spec, spec.source_h);
    LimitReport report;
    report.id = spec.id;
    report.schedule = schedule;
    report.items.push_back(series("f", LimitRole::Required, f, spec.target.f, points, schedule, options));
    report.items.push_back(series("h", LimitRole::Required, h, spec.target.h, points, schedule, options));
    report.passed = verdict(report.items);
    return report;
}

std::vector<TargetCheck> check_targets(const ContractionSpec& spec, const ZeroTestOptions& options) {
    std::vector<TargetCheck> out;
    for (const auto& c : spec.correspondences) {
        bool seen = std::any_of(out.begin(), out.end(), [&](const TargetCheck& p) { return p.label == c.label; });
        if (seen) continue;
        Expr r = adjoint_frechet_apply(spec.target, c.target);
        out.push_back({c.label, is_zero(r, spec.target.domain, options).tier});
    }
    return out;
}

ContractionSpec contraction_from(const CaseFile& file) {
    const CaseSection* sec = file.first("contraction");
    if (!sec) throw CaseFileError("missing [contraction] section", 0);
    SymbolTable table = symbols_for(*sec);
    table.declare_parameter("mu");
    Bindings fixed;
    for (const auto& p : table.parameters) {
        if (p == "mu") continue;
        const CaseEntry* e = sec->find(p);
        if (!e) throw CaseFileError("parameter '" + p + "' needs a value", sec->line);
        fixed[Expr::parameter(p)] = parse_entry(*e, table);
    }
    auto field = [&](const CaseSection& s, const std::string& key, const Expr* fallback) {
        const CaseEntry* e = s.find(key);
        if (!e) {
            if (fallback) return *fallback;
            throw CaseFileError("missing key '" + key + "'", s.line);
        }
        return substitute(parse_entry(*e, table), fixed);
    };
    ContractionSpec spec;
    spec.id = sec->label;
    spec.title = sec->get("title");
    spec.source_f = field(*sec, "source.f", nullptr);
    spec.source_h = field(*sec, "source.h", nullptr);
    Expr A = sym::A(sym::u());
    Expr scale = normalize(field(*sec, "source.A", &A) / A);
    if (depends_on(scale, sym::u())) throw CaseFileError("source.A must be a multiple of A(u)", sec->line);
    spec.source_a_scale = scale;
    Expr xs = sym::x(), ts = sym::t();
    spec.x_of = field(*sec, "x", &xs);
    spec.t_of = field(*sec, "t", &ts);
    spec.target = Equation::make(field(*sec, "target.f", nullptr), Expr(1), field(*sec, "target.h", nullptr), A, Expr(1));
    for (const auto& e : sec->entries) {
        if (e.key.rfind("domain.", 0) != 0) continue;
        auto items = split_list(e.value);
        if (items.size() != 2) throw CaseFileError("domain needs 'lo, hi'", e.line);
        spec.target.domain.set(e.key.substr(7), std::stod(items[0]), std::stod(items[1]));
    }
    for (const CaseSection* c : file.named("correspondence")) {
        Correspondence k;
        k.label = c->label;
        k.source = field(*c, "source", nullptr);
        k.target = field(*c, "target", nullptr);
        if (depends_on(k.target, contraction_parameter()))
            throw CaseFileError("target of '" + k.label + "' depends on mu", c->line);
        std::string frame = c->get("frame", "source");
        if (frame != "source" && frame != "target") throw CaseFileError("frame must be source or target", c->line);
        k.in_target_variables = frame == "target";
        k.role = parse_role(c->find("role"));
        spec.correspondences.push_back(std::move(k));
    }
    return spec;
}

std::string contraction_text(const std::string& id) {
    if (id == "power-to-exponential") return kPowerFamily;
    if (id == "case7-to-exponential") return kCase7Family;
    throw Error("no built-in contraction '" + id + "'");
}

ContractionSpec power_contraction() { return contraction_from(parse_casefile(kPowerFamily)); }

ContractionSpec case7_contraction(const Rational& nu) {
    CaseFile file = parse_casefile(kCase7Family);
    for (auto& s : file.sections)
        if (s.name == "contraction")
            for (auto& e : s.entries)
                if (e.key == "nu") e.value = nu.get_str();
    return contraction_from(file);
}

ContractionSpec identity_contraction(const Equation& eq) {
    ContractionSpec spec;
    spec.id = "identity";
    spec.source_f = eq.f;
    spec.source_h = eq.h;
    spec.x_of = sym::x();
    spec.t_of = sym::t();
    spec.target = eq;
    return spec;
}

}  // namespace jetcl
