#include "jetcl/errors.hpp"
#include "jetcl/expr.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace jetcl {

namespace {

bool any_child(const Expr& e, const std::function<bool(const Expr&)>& pred) {
    for (const auto& c : e.children())
        if (pred(c)) return true;
    return false;
}

void gather_symbols(const Expr& e, std::set<Expr, ExprLess>& out, bool inside_body) {
    switch (e.kind()) {
    case Kind::Number:
        return;
    case Kind::Symbol:
        if (!(inside_body && e.role() == Role::Dummy)) out.insert(e);
        return;
    case Kind::Primitive:
        gather_symbols(e.children()[0], out, true);
        gather_symbols(e.children()[1], out, inside_body);
        return;
    default:
        for (const auto& c : e.children()) gather_symbols(c, out, inside_body);
    }
}

Expr rebuild(const Expr& e, std::vector<Expr> children) {
    switch (e.kind()) {
    case Kind::Sum:
        return Expr::sum(std::move(children));
    case Kind::Product:
        return Expr::product(std::move(children));
    case Kind::Power:
        return Expr::power(children[0], children[1]);
    case Kind::Function:
        return Expr::function(e.func(), children[0]);
    case Kind::Opaque:
        return Expr::opaque(e.name(), std::move(children), e.orders());
    case Kind::Primitive:
        return Expr::primitive(children[0], children[1]);
    default:
        return e;
    }
}

}  // namespace

bool depends_on(const Expr& e, const Expr& symbol) {
    switch (e.kind()) {
    case Kind::Number:
        return false;
    case Kind::Symbol:
        return e == symbol;
    case Kind::Primitive:
        if (symbol.role() == Role::Dummy) return depends_on(e.children()[1], symbol);
        return depends_on(e.children()[0], symbol) || depends_on(e.children()[1], symbol);
    default:
        return any_child(e, [&](const Expr& c) { return depends_on(c, symbol); });
    }
}

bool contains_kind(const Expr& e, Kind kind) {
    if (e.kind() == kind) return true;
    return any_child(e, [&](const Expr& c) { return contains_kind(c, kind); });
}

std::vector<Expr> free_symbols(const Expr& e) {
    std::set<Expr, ExprLess> out;
    gather_symbols(e, out, false);
    return {out.begin(), out.end()};
}

std::vector<Expr> jets_of(const Expr& e, const std::string& dependent) {
    std::vector<Expr> out;
    for (const auto& s : free_symbols(e))
        if (s.role() == Role::Jet && s.name() == dependent) out.push_back(s);
    return out;
}

int jet_order(const Expr& e, const std::string& dependent) {
    int order = -1;
    for (const auto& j : jets_of(e, dependent)) order = std::max(order, j.nt() + j.nx());
    return order;
}

Expr substitute(const Expr& e, const Bindings& bindings) {
    if (bindings.empty()) return normalize(e);
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&, bool)> go = [&](const Expr& n, bool in_body) -> Expr {
        if (n.kind() == Kind::Number) return n;
        if (n.kind() == Kind::Symbol) {
            if (in_body && n.role() == Role::Dummy) return n;
            auto it = bindings.find(n);
            return it == bindings.end() ? n : normalize(it->second);
        }
        if (!in_body) {
            auto hit = memo.find(n.node());
            if (hit != memo.end()) return hit->second;
        }
        std::vector<Expr> ch;
        ch.reserve(n.children().size());
        if (n.kind() == Kind::Primitive) {
            ch.push_back(go(n.children()[0], true));
            ch.push_back(go(n.children()[1], in_body));
        } else {
            for (const auto& c : n.children()) ch.push_back(go(c, in_body));
        }
        Expr out = rebuild(n, std::move(ch));
        if (!in_body) memo.emplace(n.node(), out);
        return out;
    };
    return go(e, false);
}

Expr map_opaque(const Expr& e, const std::function<Expr(const Expr&)>& visit) {
    if (e.kind() == Kind::Number || e.kind() == Kind::Symbol) return e;
    std::vector<Expr> ch;
    ch.reserve(e.children().size());
    for (const auto& c : e.children()) ch.push_back(map_opaque(c, visit));
    Expr out = rebuild(e, std::move(ch));
    if (out.kind() == Kind::Opaque) return visit(out);
    return out;
}

Expr replace_subtrees(const Expr& e, const Bindings& pairs) {
    if (pairs.empty()) return normalize(e);
    std::function<Expr(const Expr&)> go = [&](const Expr& n) -> Expr {
        auto it = pairs.find(n);
        if (it != pairs.end()) return normalize(it->second);
        if (n.kind() == Kind::Number || n.kind() == Kind::Symbol) return n;
        std::vector<Expr> ch;
        ch.reserve(n.children().size());
        for (const auto& c : n.children()) ch.push_back(go(c));
        return rebuild(n, std::move(ch));
    };
    return go(normalize(e));
}

Expr expand(const Expr& e, std::size_t max_terms) {
    std::vector<Expr> out;
    for (const auto& term : terms_of(normalize(e))) {
        auto [c, mono] = split_coefficient(term);
        std::vector<Expr> acc{Expr(c)};
        for (const auto& f : factors_of(term)) {
            Expr base = f;
            int times = 1;
            if (f.kind() == Kind::Power && f.base().kind() == Kind::Sum && f.exponent().is_integer() &&
                f.exponent().value() > 1 && f.exponent().value() <= 8) {
                base = f.base();
                times = static_cast<int>(f.exponent().value().get_num().get_si());
            }
            if (base.kind() != Kind::Sum) {
                for (auto& a : acc) a = a * f;
                continue;
            }
            std::vector<Expr> parts = terms_of(expand(base, max_terms));
            for (int k = 0; k < times; ++k) {
                std::vector<Expr> next;
                for (const auto& b : parts)
                    for (const auto& a : acc) next.push_back(a * b);
                if (next.size() > max_terms) throw Error("expansion exceeds " + std::to_string(max_terms) + " terms");
                acc = std::move(next);
            }
        }
        out.insert(out.end(), acc.begin(), acc.end());
        if (out.size() > max_terms) throw Error("expansion exceeds " + std::to_string(max_terms) + " terms");
    }
    return Expr::sum(std::move(out));
}

Expr clear_denominators(const Expr& e, std::size_t max_terms) {
    Expr n = expand(e, max_terms);
    for (int pass = 0; pass < 8; ++pass) {
        std::vector<Expr> terms = terms_of(n);
        std::vector<std::map<Expr, Expr, ExprLess>> powers(terms.size());
        std::set<Expr, ExprLess> bases;
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (const auto& f : factors_of(terms[i])) {
                if (f.kind() == Kind::Power && f.base().kind() == Kind::Sum) {
                    powers[i][f.base()] = f.exponent();
                    bases.insert(f.base());
                }
            }
        bool changed = false;
        for (const auto& b : bases) {
            auto exponent_of = [&](std::size_t i) {
                auto it = powers[i].find(b);
                return it == powers[i].end() ? Expr(0) : it->second;
            };
            Expr low = exponent_of(0);
            bool aligned = true;
            for (std::size_t i = 1; i < terms.size() && aligned; ++i) {
                Expr d = exponent_of(i) - low;
                if (!d.is_integer()) aligned = false;
                else if (d.value() < 0) low = exponent_of(i);
            }
            if (!aligned || low.is_zero()) continue;
            std::vector<Expr> shifted;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                std::vector<Expr> fs{Expr(split_coefficient(terms[i]).first)};
                for (const auto& f : factors_of(terms[i]))
                    if (!(f.kind() == Kind::Power && f.base() == b)) fs.push_back(f);
                fs.push_back(pow(b, exponent_of(i) - low));
                shifted.push_back(expand(Expr::product(fs), max_terms));
            }
            n = expand(Expr::sum(shifted), max_terms);
            changed = true;
            break;
        }
        if (!changed) break;
    }
    return n;
}

Expr substitute_functions(const Expr& e, const std::map<std::string, FunctionDef>& defs) {
    if (defs.empty()) return normalize(e);
    return map_opaque(e, [&](const Expr& app) -> Expr {
        auto it = defs.find(app.name());
        if (it == defs.end()) return app;
        const FunctionDef& def = it->second;
        if (def.slots.size() != app.children().size())
            throw Error("arity mismatch substituting " + app.name());
        Expr body = def.body;
        for (std::size_t i = 0; i < def.slots.size(); ++i) body = diff(body, def.slots[i], app.orders()[i]);
        Bindings b;
        for (std::size_t i = 0; i < def.slots.size(); ++i) b.emplace(def.slots[i], app.children()[i]);
        return substitute(body, b);
    });
}

Expr derive(const Expr& e_in, const std::function<Expr(const Expr&)>& on_symbol) {
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> d = [&](const Expr& e) -> Expr {
        switch (e.kind()) {
        case Kind::Number:
            return Expr(0);
        case Kind::Symbol:
            return on_symbol(e);
        default:
            break;
        }
        auto hit = memo.find(e.node());
        if (hit != memo.end()) return hit->second;
        Expr out(0);
        const auto& ch = e.children();
        switch (e.kind()) {
        case Kind::Sum: {
            std::vector<Expr> parts;
            for (const auto& c : ch) parts.push_back(d(c));
            out = Expr::sum(std::move(parts));
            break;
        }
        case Kind::Product: {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < ch.size(); ++i) {
                Expr di = d(ch[i]);
                if (di.is_zero()) continue;
                std::vector<Expr> fs = ch;
                fs[i] = di;
                parts.push_back(Expr::product(std::move(fs)));
            }
            out = Expr::sum(std::move(parts));
            break;
        }
        case Kind::Power: {
            const Expr& b = ch[0];
            const Expr& p = ch[1];
            Expr db = d(b);
            Expr dp = d(p);
            if (dp.is_zero()) {
                out = db.is_zero() ? Expr(0) : p * pow(b, p - Expr(1)) * db;
            } else {
                out = e * (dp * ln(b) + p * db / b);
            }
            break;
        }
        case Kind::Function: {
            const Expr& a = ch[0];
            Expr da = d(a);
            if (da.is_zero()) break;
            switch (e.func()) {
            case Func::Exp: out = e * da; break;
            case Func::Ln: out = da / a; break;
            case Func::Sin: out = cos(a) * da; break;
            case Func::Cos: out = -sin(a) * da; break;
            case Func::Sinh: out = cosh(a) * da; break;
            case Func::Cosh: out = sinh(a) * da; break;
            case Func::Atan: out = da / (Expr(1) + a * a); break;
            case Func::Abs: out = da * e / a; break;
            }
            break;
        }
        case Kind::Opaque: {
            std::vector<Expr> parts;
            for (std::size_t i = 0; i < ch.size(); ++i) {
                Expr da = d(ch[i]);
                if (da.is_zero()) continue;
                std::vector<int> orders = e.orders();
                ++orders[i];
                parts.push_back(Expr::opaque(e.name(), ch, orders) * da);
            }
            out = Expr::sum(std::move(parts));
            break;
        }
        case Kind::Primitive: {
            const Expr& body = ch[0];
            const Expr& a = ch[1];
            Expr da = d(a);
            if (!da.is_zero()) out = substitute(body, {{Expr::dummy(), a}}) * da;
            Expr db = derive(body, [&](const Expr& s) { return s.role() == Role::Dummy ? Expr(0) : on_symbol(s); });
            if (!db.is_zero()) out += Expr::primitive(db, a);
            break;
        }
        default:
            break;
        }
        memo.emplace(e.node(), out);
        return out;
    };
    return d(normalize(e_in));
}

Expr diff(const Expr& e, const Expr& var) {
    if (var.kind() != Kind::Symbol) throw Error("diff: variable must be a symbol");
    return derive(e, [&](const Expr& s) { return s == var ? Expr(1) : Expr(0); });
}

Expr diff(const Expr& e, const Expr& var, int times) {
    Expr out = normalize(e);
    for (int i = 0; i < times && !out.is_zero(); ++i) out = diff(out, var);
    return out;
}

Collected collect(const Expr& e_in, const std::vector<Expr>& basis) {
    Expr e = normalize(e_in);
    Collected out;
    std::map<std::vector<int>, std::vector<Expr>> parts;
    for (const auto& term : terms_of(e)) {
        std::vector<int> exps(basis.size(), 0);
        std::vector<Expr> coef{Expr(split_coefficient(term).first)};
        for (const auto& f : factors_of(term)) {
            auto [b, p] = f.kind() == Kind::Power ? std::pair{f.base(), f.exponent()} : std::pair{f, Expr(1)};
            auto it = std::find(basis.begin(), basis.end(), b);
            if (it != basis.end() && p.is_integer() && sgn(p.value()) > 0 && p.value().get_num().fits_sint_p()) {
                exps[static_cast<std::size_t>(it - basis.begin())] += static_cast<int>(p.value().get_num().get_si());
                continue;
            }
            for (const auto& v : basis)
                if (depends_on(f, v)) throw NonPolynomialError("non-polynomial dependence on " + to_string(v));
            coef.push_back(f);
        }
        parts[exps].push_back(Expr::product(std::move(coef)));
    }
    for (auto& [k, v] : parts) {
        Expr c = Expr::sum(std::move(v));
        if (!c.is_zero()) out.emplace(k, c);
    }
    return out;
}

}  // namespace jetcl
