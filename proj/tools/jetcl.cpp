#include "jetcl/acceptance.hpp"
#include "jetcl/catalog.hpp"
#include "jetcl/contraction.hpp"
#include "jetcl/equivalence.hpp"
#include "jetcl/errors.hpp"
#include "jetcl/numeric.hpp"
#include "jetcl/potential.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace jetcl;
using Json = nlohmann::ordered_json;

namespace {

/// Bad input: unreadable files, malformed flags, missing sections.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Flags {
    std::uint64_t seed = 42;
    std::optional<double> tolerance;
    std::string format = "text";
    std::string domain;
    std::optional<int> grid;
    std::string mu;
    std::string file;
    std::string output;
    std::string check;
    std::vector<int> only;
    bool extended = false;
    bool profiles = false;
};

class Report {
public:
    explicit Report(const Flags& flags) : records_(flags.format == "records") {}

    bool records() const { return records_; }
    void line(const std::string& text) {
        if (!records_) std::cout << text << '\n';
    }
    void record(const Json& j) {
        if (records_) std::cout << j.dump() << '\n';
    }
    void fail() { ok_ = false; }
    bool ok() const { return ok_; }

private:
    bool records_;
    bool ok_ = true;
};

std::vector<double> number_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("bad number '" + item + "' in " + flag);
        }
    }
    return out;
}

std::optional<Interval> domain_flag(const Flags& f) {
    if (f.domain.empty()) return std::nullopt;
    auto v = number_list(f.domain, "--domain");
    if (v.size() != 2 || !(v[0] < v[1])) throw UsageError("--domain needs 'a,b' with a < b");
    return Interval{v[0], v[1]};
}

ZeroTestOptions zero_options(const Flags& f) {
    ZeroTestOptions o;
    o.seed = f.seed;
    if (f.tolerance) o.tolerance = *f.tolerance;
    return o;
}

CaseFile load(const Flags& f) {
    if (f.file.empty()) throw UsageError("a case file is required");
    std::ifstream in(f.file);
    if (!in) throw UsageError("cannot open case file '" + f.file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_casefile(ss.str());
}

struct Law {
    std::string label;
    Expr F;
    Expr G;
    std::optional<Expr> lambda;
    bool has_vector = false;
};

/// An equation with the laws of the file, for one value of the parameters.
struct Problem {
    std::string label;
    Equation eq;
    Bindings values;
    std::vector<Law> laws;
};

std::vector<Problem> problems(const CaseFile& file, const Flags& flags) {
    const CaseSection* sec = file.first("equation");
    if (!sec) throw CaseFileError("missing [equation] section", 0);
    SymbolTable table = symbols_for(*sec);
    std::vector<Bindings> overrides{{}};
    if (!flags.mu.empty()) {
        if (std::find(table.parameters.begin(), table.parameters.end(), "mu") == table.parameters.end())
            throw UsageError("--mu given but the equation declares no parameter mu");
        overrides.clear();
        for (const auto& item : split_list(flags.mu)) {
            CaseEntry e{"--mu", item, 0};
            overrides.push_back({{Expr::parameter("mu"), parse_entry(e, table)}});
        }
    }
    auto range = domain_flag(flags);
    std::vector<Problem> out;
    for (const auto& o : overrides) {
        Problem p;
        for (const auto& name : table.parameters)
            if (const CaseEntry* e = sec->find(name)) p.values[Expr::parameter(name)] = parse_entry(*e, table);
        for (const auto& [k, v] : o) p.values[k] = v;
        p.eq = equation_from(*sec, table, o);
        if (range) p.eq.domain.set("x", range->lo, range->hi);
        p.eq.validate(flags.seed);
        for (const CaseSection* l : file.named("law")) {
            Law law;
            law.label = l->label;
            if (const CaseEntry* e = l->find("lambda")) law.lambda = substitute(parse_entry(*e, table), p.values);
            const CaseEntry* F = l->find("F");
            const CaseEntry* G = l->find("G");
            if (F && G) {
                law.F = substitute(parse_entry(*F, table), p.values);
                law.G = substitute(parse_entry(*G, table), p.values);
                law.has_vector = true;
            } else if (!law.lambda) {
                throw CaseFileError("law needs F and G or lambda", l->line);
            }
            p.laws.push_back(std::move(law));
        }
        if (!o.empty()) p.label = "mu = " + to_string(o.begin()->second);
        out.push_back(std::move(p));
    }
    return out;
}

std::string equation_text(const Equation& eq) {
    return "f = " + to_string(eq.f) + ", g = " + to_string(eq.g) + ", h = " + to_string(eq.h) +
           ", A = " + to_string(eq.A) + ", B = " + to_string(eq.B);
}

Json equation_json(const Equation& eq) {
    return {{"f", to_string(eq.f)},
            {"g", to_string(eq.g)},
            {"h", to_string(eq.h)},
            {"A", to_string(eq.A)},
            {"B", to_string(eq.B)}};
}

void heading(Report& r, const Problem& p) {
    if (!p.label.empty()) r.line("# " + p.label);
}

std::vector<const Law*> vector_laws(const Problem& p) {
    std::vector<const Law*> out;
    for (const auto& l : p.laws)
        if (l.has_vector) out.push_back(&l);
    return out;
}

// ---------------------------------------------------------------------------

void cmd_verify(const Flags& flags, Report& r) {
    ZeroTestOptions zo = zero_options(flags);
    for (const auto& p : problems(load(flags), flags)) {
        heading(r, p);
        auto laws = vector_laws(p);
        if (laws.empty()) throw UsageError("no [law] sections with F and G");
        for (const Law* l : laws) {
            Verification v = verify(p.eq, l->F, l->G, zo);
            Json j{{"kind", "verify"}, {"parameters", p.label}, {"law", l->label}, {"conserved", v.valid},
                   {"tier", tier_name(v.tier)}};
            if (v.valid) {
                Expr lam = characteristic_of(p.eq, l->F, l->G, zo);
                j["characteristic"] = to_string(lam);
                r.line("law " + l->label + ": conserved (" + tier_name(v.tier) + "), characteristic " +
                       to_string(lam));
            } else {
                r.fail();
                j["residual"] = to_string(v.residual);
                r.line("law " + l->label + ": not conserved, residual " + to_string(v.residual));
            }
            r.record(j);
        }
    }
}

void cmd_char(const Flags& flags, Report& r) {
    ZeroTestOptions zo = zero_options(flags);
    for (const auto& p : problems(load(flags), flags)) {
        heading(r, p);
        if (p.laws.empty()) throw UsageError("no [law] sections");
        for (const auto& l : p.laws) {
            Expr lam;
            if (l.lambda) {
                lam = *l.lambda;
            } else {
                Verification v = verify(p.eq, l.F, l.G, zo);
                if (!v.valid) {
                    r.fail();
                    r.line("law " + l.label + ": not conserved, no characteristic");
                    r.record({{"kind", "char"}, {"parameters", p.label}, {"law", l.label}, {"conserved", false}});
                    continue;
                }
                lam = characteristic_of(p.eq, l.F, l.G, zo);
            }
            Expr res = adjoint_frechet_apply(p.eq, lam);
            ZeroTest z = is_zero(res, p.eq.domain, zo);
            if (!z.zero()) r.fail();
            r.line("law " + l.label + ": characteristic " + to_string(lam) + ", cosymmetry " +
                   (z.zero() ? std::string("holds (") + tier_name(z.tier) + ")"
                             : "fails, residual " + to_string(res)));
            r.record({{"kind", "char"},
                      {"parameters", p.label},
                      {"law", l.label},
                      {"characteristic", to_string(lam)},
                      {"cosymmetry", z.zero()},
                      {"tier", tier_name(z.tier)}});
        }
    }
}

/// Gauged copy of the equation when g != 1.
Equation gauged(const Equation& eq, Report& r) {
    if (eq.g.is_one()) return eq;
    EquivTransform tr = gauge(eq);
    tr.X_inverse = closed_form_inverse(tr.X, eq.domain);
    Equation img = apply_to_equation(tr, eq);
    r.line("gauged by x~ = " + to_string(tr.X) + " to " + equation_text(img));
    r.record({{"kind", "gauge"}, {"X", to_string(tr.X)}, {"equation", equation_json(img)}});
    return img;
}

void cmd_classify(const Flags& flags, Report& r) {
    ZeroTestOptions zo = zero_options(flags);
    for (const auto& p : problems(load(flags), flags)) {
        heading(r, p);
        Equation eq = gauged(p.eq, r);
        auto matches = match(eq, zo);
        if (matches.empty()) {
            r.line("no catalog case matches; no conservation laws beyond the general case");
            r.record({{"kind", "classify"}, {"parameters", p.label}, {"case", nullptr}});
        }
        for (const auto& m : matches) {
            std::string params;
            for (const auto& [k, v] : m.parameters) params += ", " + to_string(k) + " = " + to_string(v);
            r.line("case " + m.entry->id + ": " + m.entry->title + params);
            Json laws = Json::array();
            int n = 0;
            for (const auto& l : laws_for(m, eq, zo)) {
                ++n;
                Verification v = verify(eq, l.F, l.G, zo);
                if (!v.valid) r.fail();
                r.line("  law " + m.entry->id + "." + std::to_string(n) + ": (" + to_string(l.F) + ", " +
                       to_string(l.G) + "), characteristic " + to_string(l.lambda) + " [" + tier_name(v.tier) + "]");
                laws.push_back({{"F", to_string(l.F)},
                                {"G", to_string(l.G)},
                                {"characteristic", to_string(l.lambda)},
                                {"tier", tier_name(v.tier)}});
            }
            Json pj = Json::object();
            for (const auto& [k, v] : m.parameters) pj[to_string(k)] = to_string(v);
            r.record({{"kind", "classify"},
                      {"parameters", p.label},
                      {"case", m.entry->id},
                      {"title", m.entry->title},
                      {"case_parameters", pj},
                      {"laws", laws}});
        }
    }
}

void cmd_transform(const Flags& flags, Report& r) {
    ZeroTestOptions zo = zero_options(flags);
    CaseFile file = load(flags);
    auto steps = file.named("transform");
    if (steps.empty()) throw UsageError("no [transform] sections");
    const CaseSection* eqsec = file.first("equation");
    SymbolTable table = symbols_for(*eqsec);
    for (auto p : problems(file, flags)) {
        heading(r, p);
        struct Vec {
            std::string label;
            Expr F, G, lambda;
        };
        std::vector<Vec> vecs;
        for (const Law* l : vector_laws(p)) {
            Verification v = verify(p.eq, l->F, l->G, zo);
            if (!v.valid) {
                r.fail();
                r.line("law " + l->label + ": not conserved on the source, skipped");
                continue;
            }
            vecs.push_back({l->label, l->F, l->G, characteristic_of(p.eq, l->F, l->G, zo)});
        }
        Equation eq = p.eq;
        for (const CaseSection* s : steps) {
            std::string kind = s->get("kind");
            if (kind.empty()) throw CaseFileError("transform needs a kind", s->line);
            Expr value(1);
            if (const CaseEntry* e = s->find("value")) value = substitute(parse_entry(*e, table), p.values);
            Equation img;
            PointTransform pt;
            if (auto tr = named_equivalence(kind, eq, value)) {
                tr->label = kind;
                img = apply_to_equation(*tr, eq);
                pt = tr->point(eq.domain);
            } else {
                pt = named_transform(kind, eq, value);
                img = derive_target(pt, eq, zo).target;
            }
            r.line("transform " + s->label + " (" + kind + "): " + equation_text(img));
            Json laws = Json::array();
            for (auto& v : vecs) {
                auto w = pushforward_vector(pt, eq, img, v.F, v.G);
                Verification ver = verify(img, w.first, w.second, zo);
                Expr lp = pushforward_characteristic(pt, eq, img, v.lambda, zo);
                bool compatible = false;
                if (ver.valid) {
                    Expr lv = characteristic_of(img, w.first, w.second, zo);
                    compatible = is_zero(reduce_mod_equation(lv - lp, img), img.domain, zo).zero();
                }
                if (!ver.valid || !compatible) r.fail();
                r.line("  law " + v.label + ": (" + to_string(w.first) + ", " + to_string(w.second) +
                       "), characteristic " + to_string(lp) + (ver.valid ? ", conserved" : ", NOT conserved") +
                       (compatible ? ", compatible" : ", characteristic mismatch"));
                laws.push_back({{"law", v.label},
                                {"F", to_string(w.first)},
                                {"G", to_string(w.second)},
                                {"characteristic", to_string(lp)},
                                {"conserved", ver.valid},
                                {"compatible", compatible}});
                v.F = w.first;
                v.G = w.second;
                v.lambda = lp;
            }
            r.record({{"kind", "transform"},
                      {"parameters", p.label},
                      {"step", s->label},
                      {"transform", kind},
                      {"equation", equation_json(img)},
                      {"laws", laws}});
            eq = img;
        }
    }
}

void report_system(Report& r, const PotentialSystem& s, const ZeroTestOptions& zo) {
    PotentialCheck c = compatibility(s, zo);
    if (!c.valid) r.fail();
    std::string text = "system " + s.id + " (" + s.level + "):";
    Json pots = Json::array();
    for (const auto& v : s.potentials) {
        text += " " + v.name + "_x = " + to_string(v.vx) + ", " + v.name + "_t = " + to_string(v.vt) + ";";
        pots.push_back({{"name", v.name}, {"vx", to_string(v.vx)}, {"vt", to_string(v.vt)}});
    }
    r.line(text + " compatibility " + tier_name(c.tier) + (s.degenerate ? ", degenerate" : ""));
    r.record({{"kind", "potential"},
              {"system", s.id},
              {"level", s.level},
              {"potentials", pots},
              {"compatible", c.valid},
              {"tier", tier_name(c.tier)},
              {"degenerate", s.degenerate}});
}

void cmd_potential(const Flags& flags, Report& r) {
    ZeroTestOptions zo = zero_options(flags);
    for (const auto& p : problems(load(flags), flags)) {
        heading(r, p);
        auto laws = vector_laws(p);
        if (!laws.empty()) {
            auto eq = std::make_shared<const Equation>(p.eq);
            PotentialSystem s = build(eq, laws[0]->F, laws[0]->G, "v", zo);
            s.id = "file";
            for (std::size_t i = 1; i < laws.size(); ++i)
                add_potential(s, laws[i]->F, laws[i]->G, "v" + std::to_string(i + 1), zo);
            report_system(r, s, zo);
            continue;
        }
        Equation eq = gauged(p.eq, r);
        for (const auto& s : enumerate_simplest(eq, zo)) report_system(r, s, zo);
        if (flags.extended)
            for (const auto& s : enumerate_extended(eq, zo)) report_system(r, s, zo);
    }
}

SamplePoints points_from(const CaseFile& file) {
    const CaseSection* sec = file.first("contraction");
    const CaseEntry* e = sec ? sec->find("points") : nullptr;
    if (!e) return default_sample_points();
    SamplePoints out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto v = number_list(item, "points");
        if (v.size() != 2) throw CaseFileError("points are 't, x' pairs separated by ';'", e->line);
        out.emplace_back(v[0], v[1]);
    }
    return out;
}

void report_limit(Report& r, const LimitReport& rep, const std::string& what) {
    for (const auto& i : rep.items) {
        r.line("  " + what + " " + i.label + " [" + role_name(i.role) + "]: " +
               (i.converges ? "converges" : "does not converge") + ", final error " + [&] {
                   std::ostringstream s;
                   s << std::setprecision(4) << i.final_error;
                   return s.str();
               }());
        for (const auto& pt : i.points) {
            std::ostringstream s;
            s << std::setprecision(6) << "    (t, x) = (" << pt.t << ", " << pt.x << "): errors";
            for (double e : pt.errors) s << ' ' << e;
            s << (pt.strictly_decreasing ? ", strictly decreasing" : pt.monotone ? ", monotone" : ", not monotone");
            r.line(s.str());
            r.record({{"kind", "limit"},
                      {"contraction", rep.id},
                      {"check", what},
                      {"item", i.label},
                      {"role", role_name(i.role)},
                      {"t", pt.t},
                      {"x", pt.x},
                      {"mu", rep.schedule},
                      {"values", pt.values},
                      {"errors", pt.errors},
                      {"monotone", pt.monotone},
                      {"strictly_decreasing", pt.strictly_decreasing}});
        }
    }
}

void cmd_contract(const Flags& flags, Report& r) {
    CaseFile file = load(flags);
    ContractionSpec spec = contraction_from(file);
    SamplePoints points = points_from(file);
    std::vector<double> schedule = flags.mu.empty() ? default_schedule() : number_list(flags.mu, "--mu");
    LimitOptions lo;
    if (flags.tolerance) lo.tolerance = *flags.tolerance;
    r.line("contraction " + spec.id + (spec.title.empty() ? "" : ": " + spec.title));
    LimitReport chars = check_limit(spec, points, schedule, lo);
    LimitReport eqs = check_equation_limit(spec, points, schedule, lo);
    report_limit(r, eqs, "equation");
    report_limit(r, chars, "characteristic");
    if (!chars.passed || !eqs.passed) r.fail();
    for (const auto& t : check_targets(spec, zero_options(flags))) {
        bool ok = t.tier != Tier::NonZero;
        if (!ok) r.fail();
        r.line(std::string("  target ") + t.label + ": cosymmetry " + (ok ? "holds" : "fails") + " (" +
               tier_name(t.tier) + ")");
        r.record({{"kind", "target"}, {"contraction", spec.id}, {"item", t.label}, {"tier", tier_name(t.tier)}});
    }
    r.line(std::string("equation limit ") + (eqs.passed ? "passed" : "failed") + ", characteristic limit " +
           (chars.passed ? "passed" : "failed"));
    r.record({{"kind", "contract"}, {"contraction", spec.id}, {"equation", eqs.passed}, {"characteristics", chars.passed}});
}

SimConfig sim_config(const CaseFile& file, const Flags& flags) {
    SimConfig c;
    if (const CaseSection* s = file.first("simulation")) {
        auto num = [&](const std::string& key, double fallback) {
            const CaseEntry* e = s->find(key);
            if (!e) return fallback;
            auto v = number_list(e->value, key);
            if (v.size() != 1) throw CaseFileError("'" + key + "' needs one number", e->line);
            return v[0];
        };
        c.a = num("a", c.a);
        c.b = num("b", c.b);
        c.N = static_cast<int>(num("N", c.N));
        c.T = num("T", c.T);
        c.snapshots = static_cast<int>(num("snapshots", c.snapshots));
        if (s->has("boundary")) c.boundary = parse_boundary(s->get("boundary"));
        c.initial.kind = s->get("initial", c.initial.kind);
        c.initial.amplitude = num("amplitude", c.initial.amplitude);
        c.initial.center = num("center", c.initial.center);
        c.initial.width = num("width", c.initial.width);
        c.initial.offset = num("offset", c.initial.offset);
    }
    if (auto d = domain_flag(flags)) {
        c.a = d->lo;
        c.b = d->hi;
    }
    if (flags.grid) c.N = *flags.grid;
    return c;
}

void cmd_simulate(const Flags& flags, Report& r) {
    CaseFile file = load(flags);
    SimConfig cfg = sim_config(file, flags);
    Flags symbolic = flags;
    symbolic.domain.clear();
    double tol = flags.tolerance.value_or(1e-5);
    ZeroTestOptions zo;
    zo.seed = flags.seed;
    for (const auto& p : problems(file, symbolic)) {
        heading(r, p);
        std::vector<AuditLaw> laws;
        std::string case_ids;
        auto matches = match(p.eq, zo);
        for (const auto& m : matches) case_ids += (case_ids.empty() ? "" : ",") + m.entry->id;
        if (case_ids.empty()) case_ids = "none";
        for (const Law* l : vector_laws(p)) laws.push_back({l->label, l->F, l->G});
        if (laws.empty()) {
            std::vector<ConservedVector> found;
            for (const auto& m : matches)
                for (auto& v : laws_for(m, p.eq, zo)) found.push_back(std::move(v));
            laws = audit_laws(found);
        }
        if (laws.empty()) throw UsageError("no laws to audit: the file has none and no catalog case matches");
        auto rs = convergence_orders(p.eq, cfg, laws);
        std::ostringstream head;
        head << "cases " << case_ids << ", N = " << cfg.N << " and " << 2 * cfg.N << ", T = " << cfg.T
             << ", interval [" << cfg.a << ", " << cfg.b << "], " << boundary_name(cfg.boundary);
        r.line(head.str());
        r.line("law                       N      dt            max|R|        order");
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const Refinement& q = rs[i];
            bool ok = q.residual_n < tol;
            if (!ok) r.fail();
            for (int k = 0; k < 2; ++k) {
                int N = k == 0 ? cfg.N : 2 * cfg.N;
                double dt = k == 0 ? q.dt_n : q.dt_2n;
                double R = k == 0 ? q.residual_n : q.residual_2n;
                std::ostringstream s;
                s << std::left << std::setw(25) << laws[i].label.substr(0, 24) << ' ' << std::setw(6) << N << ' '
                  << std::scientific << std::setprecision(6) << dt << "  " << R << "  ";
                if (k == 1) s << (q.order ? [&] {
                    std::ostringstream o;
                    o << std::fixed << std::setprecision(3) << *q.order;
                    return o.str();
                }() : std::string("saturated"));
                r.line(s.str());
                Json j{{"kind", "audit"}, {"case", case_ids}, {"law", laws[i].label}, {"N", N},
                       {"dt", dt},         {"max_residual", R}};
                j["order"] = (k == 1 && q.order) ? Json(*q.order) : Json(nullptr);
                r.record(j);
            }
            if (!ok) r.line("  residual above " + [&] {
                std::ostringstream s;
                s << tol;
                return s.str();
            }() + ": audit failed");
        }
        if (flags.profiles) {
            Solution sol = solve(p.eq, cfg);
            for (std::size_t k = 0; k < sol.times.size(); ++k)
                r.record({{"kind", "profile"}, {"t", sol.times[k]}, {"x", sol.x}, {"u", sol.profiles[k]}});
        }
    }
}

void cmd_selftest(const Flags& flags, Report& r) {
    AcceptanceOptions o;
    o.seed = flags.seed;
    o.only = flags.only;
    run_acceptance(o, [&](const CriterionResult& c) {
        if (!c.passed) r.fail();
        if (!r.records()) std::cout << format_result(c) << std::endl;
        r.record({{"kind", "criterion"},
                  {"id", c.id},
                  {"title", c.title},
                  {"passed", c.passed},
                  {"detail", c.detail},
                  {"seconds", c.seconds}});
    });
}

void cmd_catalog(const Flags& flags, Report& r) {
    std::string text = catalog_text();
    if (!flags.check.empty()) {
        std::ifstream in(flags.check);
        if (!in) throw UsageError("cannot open '" + flags.check + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        bool same = ss.str() == text;
        if (!same) r.fail();
        r.line(flags.check + (same ? " is up to date" : " differs from the catalog"));
        r.record({{"kind", "catalog"}, {"file", flags.check}, {"up_to_date", same}});
        return;
    }
    if (!flags.output.empty()) {
        std::ofstream out(flags.output);
        if (!out) throw UsageError("cannot write '" + flags.output + "'");
        out << text;
        r.line("wrote " + flags.output);
        return;
    }
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conservation laws of variable-coefficient diffusion-convection equations"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags flags;
    app.add_option("--seed", flags.seed, "Seed of randomized zero tests")->capture_default_str();
    app.add_option("--tolerance", flags.tolerance,
                   "Zero-test tolerance; audit bound for simulate; limit bound for contract");
    app.add_option("--format", flags.format, "Report format")
        ->check(CLI::IsMember({"text", "records"}))
        ->capture_default_str();
    app.add_option("--domain", flags.domain, "Interval a,b for x");
    app.add_option("--grid", flags.grid, "Grid size N for simulate");
    app.add_option("--mu", flags.mu, "Parameter values, or the limit schedule for contract");

    using Handler = void (*)(const Flags&, Report&);
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto with_file = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("file", flags.file, "Case file")->required();
        commands.emplace_back(sub, h);
        return sub;
    };
    with_file("verify", "Check the laws of a case file and extract characteristics", cmd_verify);
    with_file("char", "Characteristics and the cosymmetry condition", cmd_char);
    with_file("classify", "Match the equation against the catalog and list its laws", cmd_classify);
    with_file("transform", "Apply transformations and push laws forward", cmd_transform);
    with_file("potential", "Potential systems and their compatibility", cmd_potential)
        ->add_flag("--extended", flags.extended, "Also list two-potential systems");
    with_file("contract", "Contraction limits of an equation family", cmd_contract);
    with_file("simulate", "Solve numerically and audit the conservation laws", cmd_simulate)
        ->add_flag("--profiles", flags.profiles, "Emit solution profiles as records");
    CLI::App* self = app.add_subcommand("selftest", "Run the acceptance suite");
    self->add_option("--only", flags.only, "Criterion ids to run")->check(CLI::Range(1, 9));
    commands.emplace_back(self, cmd_selftest);
    CLI::App* cat = app.add_subcommand("catalog", "Print the catalog, write it, or check a golden file");
    cat->add_option("--output", flags.output, "File to write");
    cat->add_option("--check", flags.check, "Golden file to compare");
    commands.emplace_back(cat, cmd_catalog);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Report report(flags);
    try {
        for (const auto& [sub, handler] : commands)
            if (sub->parsed()) handler(flags, report);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CaseFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return report.ok() ? 0 : 1;
}
