#include "jetcl/expr.hpp"

#include "jetcl/errors.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace jetcl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_mpz(mpz_srcptr z) {
    std::size_t h = static_cast<std::size_t>(mpz_sgn(z) + 7);
    std::size_t n = mpz_size(z);
    for (std::size_t i = 0; i < n; ++i) h = mix(h, static_cast<std::size_t>(mpz_getlimbn(z, i)));
    return h;
}

std::size_t compute_hash(const Node& n) {
    std::size_t h = mix(0x51ed27, static_cast<std::size_t>(n.kind));
    switch (n.kind) {
    case Kind::Number:
        h = mix(h, hash_mpz(n.value.get_num_mpz_t()));
        h = mix(h, hash_mpz(n.value.get_den_mpz_t()));
        break;
    case Kind::Symbol:
        h = mix(h, static_cast<std::size_t>(n.role));
        h = mix(h, std::hash<std::string>{}(n.name));
        h = mix(h, static_cast<std::size_t>(n.nt * 131 + n.nx));
        break;
    case Kind::Function:
        h = mix(h, static_cast<std::size_t>(n.func));
        break;
    case Kind::Opaque:
        h = mix(h, std::hash<std::string>{}(n.name));
        for (int o : n.orders) h = mix(h, static_cast<std::size_t>(o));
        break;
    default:
        break;
    }
    for (const auto& c : n.children) h = mix(h, c.hash());
    return h;
}

const Rational kOne(1);

}  // namespace

struct Builder {
    static Expr make(Node n) {
        n.hash = compute_hash(n);
        return Expr(std::make_shared<const Node>(std::move(n)));
    }
    static Expr number(const Rational& v) {
        Node n;
        n.kind = Kind::Number;
        n.value = v;
        n.value.canonicalize();
        return make(std::move(n));
    }
    static Expr symbol(Role role, const std::string& name, int nt, int nx) {
        Node n;
        n.kind = Kind::Symbol;
        n.role = role;
        n.name = name;
        n.nt = nt;
        n.nx = nx;
        return make(std::move(n));
    }
    static Expr composite(Kind kind, std::vector<Expr> children, bool canonical) {
        Node n;
        n.kind = kind;
        n.canonical = canonical;
        n.children = std::move(children);
        return make(std::move(n));
    }
    static Expr function(Func fn, const Expr& arg, bool canonical) {
        Node n;
        n.kind = Kind::Function;
        n.func = fn;
        n.canonical = canonical;
        n.children = {arg};
        return make(std::move(n));
    }
    static Expr opaque(const std::string& name, std::vector<Expr> args, std::vector<int> orders, bool canonical) {
        Node n;
        n.kind = Kind::Opaque;
        n.name = name;
        n.canonical = canonical;
        n.children = std::move(args);
        n.orders = std::move(orders);
        return make(std::move(n));
    }
};

// ---------------------------------------------------------------------------
// Accessors

Expr::Expr() : Expr(Builder::number(Rational(0))) {}
Expr::Expr(int value) : Expr(Builder::number(Rational(value))) {}
Expr::Expr(long value) : Expr(Builder::number(Rational(value))) {}
Expr::Expr(const Rational& value) : Expr(Builder::number(value)) {}

Expr Expr::number(const Rational& value) { return Builder::number(value); }
Expr Expr::independent(const std::string& name) { return Builder::symbol(Role::Independent, name, 0, 0); }
Expr Expr::parameter(const std::string& name) { return Builder::symbol(Role::Parameter, name, 0, 0); }
Expr Expr::jet(const std::string& dependent, int nt, int nx) {
    if (nt < 0 || nx < 0) throw Error("negative jet order");
    return Builder::symbol(Role::Jet, dependent, nt, nx);
}
Expr Expr::dummy() { return Builder::symbol(Role::Dummy, "_s", 0, 0); }

Kind Expr::kind() const { return node_->kind; }
bool Expr::canonical() const { return node_->canonical; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::is_zero() const { return kind() == Kind::Number && sgn(node_->value) == 0; }
bool Expr::is_one() const { return kind() == Kind::Number && node_->value == 1; }
bool Expr::is_integer() const { return kind() == Kind::Number && node_->value.get_den() == 1; }
const Rational& Expr::value() const { return node_->value; }
Role Expr::role() const { return node_->role; }
const std::string& Expr::name() const { return node_->name; }
int Expr::nt() const { return node_->nt; }
int Expr::nx() const { return node_->nx; }
Func Expr::func() const { return node_->func; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
const Expr& Expr::arg() const {
    return kind() == Kind::Primitive ? node_->children[1] : node_->children[0];
}

std::string Expr::key() const {
    if (kind() != Kind::Symbol) throw Error("key() on a non-symbol");
    if (role() != Role::Jet || (nt() == 0 && nx() == 0)) return name();
    return name() + "_" + std::string(static_cast<std::size_t>(nt()), 't') +
           std::string(static_cast<std::size_t>(nx()), 'x');
}

// ---------------------------------------------------------------------------
// Ordering

namespace {

int kind_rank(Kind k) { return static_cast<int>(k); }

template <class T>
int cmp3(const T& a, const T& b) {
    return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_lists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return cmp3(a.size(), b.size());
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return 0;
    if (int c = cmp3(kind_rank(a.kind()), kind_rank(b.kind()))) return c;
    switch (a.kind()) {
    case Kind::Number:
        return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Kind::Symbol:
        if (int c = cmp3(static_cast<int>(a.role()), static_cast<int>(b.role()))) return c;
        if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
        if (int c = cmp3(a.nt() + a.nx(), b.nt() + b.nx())) return c;
        return cmp3(a.nx(), b.nx());
    case Kind::Function:
        if (int c = cmp3(static_cast<int>(a.func()), static_cast<int>(b.func()))) return c;
        return compare_lists(a.children(), b.children());
    case Kind::Opaque:
        if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
        if (int c = cmp3(a.orders(), b.orders())) return c;
        return compare_lists(a.children(), b.children());
    default:
        return compare_lists(a.children(), b.children());
    }
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Raw constructors

Expr Expr::raw_sum(std::vector<Expr> terms) { return Builder::composite(Kind::Sum, std::move(terms), false); }
Expr Expr::raw_product(std::vector<Expr> factors) {
    return Builder::composite(Kind::Product, std::move(factors), false);
}
Expr Expr::raw_power(const Expr& base, const Expr& exponent) {
    return Builder::composite(Kind::Power, {base, exponent}, false);
}
Expr Expr::raw_function(Func fn, const Expr& arg) { return Builder::function(fn, arg, false); }
Expr Expr::raw_opaque(const std::string& name, std::vector<Expr> args, std::vector<int> orders) {
    if (orders.empty()) orders.assign(args.size(), 0);
    return Builder::opaque(name, std::move(args), std::move(orders), false);
}
Expr Expr::raw_primitive(const Expr& body, const Expr& arg) {
    return Builder::composite(Kind::Primitive, {body, arg}, false);
}

// ---------------------------------------------------------------------------
// Canonical helpers

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
    if (term.is_number()) return {term.value(), Expr(1)};
    if (term.kind() == Kind::Product && term.children().front().is_number()) {
        const auto& ch = term.children();
        if (ch.size() == 2) return {ch[0].value(), ch[1]};
        std::vector<Expr> rest(ch.begin() + 1, ch.end());
        return {ch[0].value(), Builder::composite(Kind::Product, std::move(rest), true)};
    }
    return {kOne, term};
}

std::vector<Expr> terms_of(const Expr& e) {
    if (e.kind() == Kind::Sum) return e.children();
    if (e.is_zero()) return {};
    return {e};
}

std::vector<Expr> factors_of(const Expr& term) {
    auto [c, mono] = split_coefficient(term);
    if (mono.is_one()) return {};
    if (mono.kind() == Kind::Product) return mono.children();
    return {mono};
}

namespace {

Expr scaled(const Rational& c, const Expr& mono) {
    if (sgn(c) == 0) return Expr(0);
    if (mono.is_one()) return Expr(c);
    if (mono.is_number()) return Expr(c * mono.value());
    if (c == 1) return mono;
    std::vector<Expr> ch;
    ch.emplace_back(c);
    if (mono.kind() == Kind::Product) {
        auto [c2, m2] = split_coefficient(mono);
        if (c2 != 1) return scaled(c * c2, m2);
        ch.insert(ch.end(), mono.children().begin(), mono.children().end());
    } else {
        ch.push_back(mono);
    }
    return Builder::composite(Kind::Product, std::move(ch), true);
}

Rational leading_coefficient(const Expr& e) {
    if (e.is_number()) return e.value();
    if (e.kind() == Kind::Sum) return split_coefficient(e.children().front()).first;
    return split_coefficient(e).first;
}

std::pair<Expr, Expr> split_power(const Expr& f) {
    if (f.kind() == Kind::Power) return {f.base(), f.exponent()};
    return {f, Expr(1)};
}

bool fits_long(const Rational& q) {
    return q.get_den() == 1 && q.get_num().fits_slong_p();
}

Rational rational_pow(const Rational& base, long exponent) {
    Rational result(1);
    Rational b = base;
    unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    if (exponent < 0) {
        if (sgn(b) == 0) throw DomainError("division by zero");
        b = 1 / b;
    }
    while (e) {
        if (e & 1UL) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

bool exact_root(const mpz_class& z, unsigned long n, mpz_class& out) {
    if (sgn(z) < 0) {
        if (n % 2 == 0) return false;
        mpz_class pos = -z;
        if (!exact_root(pos, n, out)) return false;
        out = -out;
        return true;
    }
    return mpz_root(out.get_mpz_t(), z.get_mpz_t(), n) != 0;
}

Expr make_sum(const std::vector<Expr>& in);
Expr make_product(std::vector<Expr> in);
Expr make_power(const Expr& base, const Expr& exponent);
Expr make_function(Func fn, const Expr& arg);
Expr make_primitive(const Expr& body, const Expr& arg);

// Sum of canonical terms.
Expr make_sum(const std::vector<Expr>& in) {
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> collected;
    std::function<void(const Expr&)> add = [&](const Expr& t) {
        if (t.is_number()) {
            constant += t.value();
        } else if (t.kind() == Kind::Sum) {
            for (const auto& c : t.children()) add(c);
        } else {
            auto [c, mono] = split_coefficient(t);
            auto it = collected.find(mono);
            if (it == collected.end())
                collected.emplace(mono, c);
            else
                it->second += c;
        }
    };
    for (const auto& t : in) add(t);
    std::vector<Expr> out;
    if (sgn(constant) != 0) out.emplace_back(constant);
    for (const auto& [mono, c] : collected)
        if (sgn(c) != 0) out.push_back(scaled(c, mono));
    if (out.empty()) return Expr(0);
    if (out.size() == 1) return out.front();
    return Builder::composite(Kind::Sum, std::move(out), true);
}

// Primitive part of a sum: (c, s/c) with c the leading coefficient.
std::pair<Rational, Expr> primitive_part(const Expr& s) {
    Rational c = leading_coefficient(s);
    if (c == 1 || sgn(c) == 0) return {kOne, s};
    std::vector<Expr> terms;
    for (const auto& t : s.children()) {
        auto [tc, mono] = split_coefficient(t);
        terms.push_back(scaled(tc / c, mono));
    }
    return {c, make_sum(terms)};
}

// True when `f` is the canonical result of raising `base` to some power.
bool is_settled_power(const Expr& f, const Expr& base) {
    if (f == base) return true;
    return f.kind() == Kind::Power && f.base() == base;
}

Expr make_product(std::vector<Expr> in) {
    for (int round = 0; round < 16; ++round) {
        Rational coef(1);
        std::map<Expr, std::vector<Expr>, ExprLess> powers;
        std::vector<Expr> exp_args;
        std::function<void(const Expr&)> add = [&](const Expr& f) {
            switch (f.kind()) {
            case Kind::Number:
                coef *= f.value();
                return;
            case Kind::Product:
                for (const auto& c : f.children()) add(c);
                return;
            case Kind::Function:
                if (f.func() == Func::Exp) {
                    exp_args.push_back(f.arg());
                    return;
                }
                break;
            default:
                break;
            }
            auto [b, e] = split_power(f);
            if (b.kind() == Kind::Sum && e.is_integer()) {
                auto [c, p] = primitive_part(b);
                if (c != 1) {
                    coef *= rational_pow(c, e.value().get_num().get_si());
                    b = p;
                }
            }
            powers[b].push_back(e);
        };
        for (const auto& f : in) add(f);
        if (sgn(coef) == 0) return Expr(0);

        bool redo = false;
        std::vector<Expr> settled;
        std::vector<Expr> next;
        std::vector<Expr> sums;
        for (auto& [b, exps] : powers) {
            Expr e = exps.size() == 1 ? exps.front() : make_sum(exps);
            if (e.is_zero()) continue;
            if (b.kind() == Kind::Sum && e.is_one()) {
                sums.push_back(b);
                continue;
            }
            Expr f = e.is_one() ? b : make_power(b, e);
            if (f.is_number() || f.kind() == Kind::Product || f.kind() == Kind::Sum ||
                (f.kind() == Kind::Function && f.func() == Func::Exp) || !is_settled_power(f, b)) {
                redo = true;
                next.push_back(f);
            } else {
                settled.push_back(f);
            }
        }
        if (!exp_args.empty()) {
            Expr a = exp_args.size() == 1 ? exp_args.front() : make_sum(exp_args);
            Expr f = make_function(Func::Exp, a);
            if (f.kind() == Kind::Function && f.func() == Func::Exp)
                settled.push_back(f);
            else if (!f.is_one()) {
                redo = true;
                next.push_back(f);
            }
        }
        if (redo) {
            next.emplace_back(coef);
            next.insert(next.end(), settled.begin(), settled.end());
            for (const auto& s : sums) next.push_back(s);
            in = std::move(next);
            continue;
        }
        if (!sums.empty()) {
            std::vector<Expr> base_factors = settled;
            base_factors.emplace_back(coef);
            std::vector<Expr> acc{make_product(base_factors)};
            for (const auto& s : sums) {
                std::vector<Expr> grown;
                grown.reserve(acc.size() * s.children().size());
                for (const auto& a : acc)
                    for (const auto& t : s.children()) grown.push_back(make_product({a, t}));
                acc = std::move(grown);
            }
            return make_sum(acc);
        }
        std::sort(settled.begin(), settled.end(), ExprLess{});
        if (settled.empty()) return Expr(coef);
        if (settled.size() == 1) return scaled(coef, settled.front());
        Expr mono = Builder::composite(Kind::Product, std::move(settled), true);
        return scaled(coef, mono);
    }
    throw Error("product normalization did not converge");
}

// Product of two sums expanded term by term.
Expr distribute(const Expr& a, const Expr& b) {
    std::vector<Expr> out;
    for (const auto& ta : terms_of(a))
        for (const auto& tb : terms_of(b)) out.push_back(make_product({ta, tb}));
    return make_sum(out);
}

Expr make_power(const Expr& base, const Expr& exponent) {
    if (exponent.is_zero()) return Expr(1);
    if (exponent.is_one()) return base;
    if (base.is_one()) return Expr(1);

    if (base.is_number()) {
        const Rational& b = base.value();
        if (exponent.is_number()) {
            const Rational& q = exponent.value();
            if (sgn(b) == 0) {
                if (sgn(q) < 0) throw DomainError("division by zero");
                return Expr(0);
            }
            if (fits_long(q) && abs(q) <= 4096) return Expr(rational_pow(b, q.get_num().get_si()));
            if (q.get_den().fits_ulong_p() && q.get_num().fits_slong_p()) {
                unsigned long d = q.get_den().get_ui();
                mpz_class rn, rd;
                if (exact_root(b.get_num(), d, rn) && exact_root(b.get_den(), d, rd))
                    return make_power(Expr(Rational(rn, rd)), Expr(Rational(q.get_num())));
                if (sgn(b) > 0) {
                    mpz_class whole;
                    mpz_fdiv_q(whole.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
                    if (sgn(whole) != 0 && whole.fits_slong_p()) {
                        Rational frac = q - Rational(whole);
                        Rational lead = rational_pow(b, whole.get_si());
                        return scaled(lead, Builder::composite(Kind::Power, {base, Expr(frac)}, true));
                    }
                }
            }
        }
        return Builder::composite(Kind::Power, {base, exponent}, true);
    }

    switch (base.kind()) {
    case Kind::Function:
        if (base.func() == Func::Exp) return make_function(Func::Exp, make_product({base.arg(), exponent}));
        if (base.func() == Func::Abs && exponent.is_integer() && exponent.value().get_num() % 2 == 0)
            return make_power(base.arg(), exponent);
        break;
    case Kind::Power: {
        const Expr& inner = base.exponent();
        bool even_inner = inner.is_integer() && inner.value().get_num() % 2 == 0;
        if (exponent.is_integer() || !even_inner)
            return make_power(base.base(), make_product({inner, exponent}));
        break;
    }
    case Kind::Product: {
        auto [c, mono] = split_coefficient(base);
        if (exponent.is_integer() || sgn(c) > 0) {
            std::vector<Expr> parts;
            parts.push_back(make_power(Expr(c), exponent));
            for (const auto& f : factors_of(base)) parts.push_back(make_power(f, exponent));
            return make_product(parts);
        }
        break;
    }
    case Kind::Sum: {
        if (exponent.is_integer()) {
            const Rational& q = exponent.value();
            if (sgn(q) > 0 && q <= 16) {
                Expr acc = base;
                for (long i = 1; i < q.get_num().get_si(); ++i) acc = distribute(acc, base);
                return acc;
            }
            auto [c, p] = primitive_part(base);
            if (c != 1 && fits_long(q))
                return scaled(rational_pow(c, q.get_num().get_si()),
                              Builder::composite(Kind::Power, {p, exponent}, true));
        } else {
            auto [c, p] = primitive_part(base);
            if (c != 1 && sgn(c) > 0)
                return make_product({make_power(Expr(c), exponent),
                                     Builder::composite(Kind::Power, {p, exponent}, true)});
        }
        break;
    }
    default:
        break;
    }
    return Builder::composite(Kind::Power, {base, exponent}, true);
}

bool is_odd(Func fn) { return fn == Func::Sin || fn == Func::Sinh || fn == Func::Atan; }
bool is_even(Func fn) { return fn == Func::Cos || fn == Func::Cosh; }

Expr make_function(Func fn, const Expr& a) {
    switch (fn) {
    case Func::Exp: {
        if (a.is_zero()) return Expr(1);
        if (a.kind() == Kind::Function && a.func() == Func::Ln) return a.arg();
        std::vector<Expr> pulled;
        std::vector<Expr> rest;
        for (const auto& term : terms_of(a)) {
            auto fs = factors_of(term);
            int logs = 0;
            std::size_t at = 0;
            for (std::size_t i = 0; i < fs.size(); ++i)
                if (fs[i].kind() == Kind::Function && fs[i].func() == Func::Ln) {
                    ++logs;
                    at = i;
                }
            if (logs != 1) {
                rest.push_back(term);
                continue;
            }
            std::vector<Expr> k{Expr(split_coefficient(term).first)};
            for (std::size_t i = 0; i < fs.size(); ++i)
                if (i != at) k.push_back(fs[i]);
            pulled.push_back(make_power(fs[at].arg(), make_product(k)));
        }
        if (pulled.empty()) return Builder::function(Func::Exp, a, true);
        pulled.push_back(make_function(Func::Exp, make_sum(rest)));
        return make_product(pulled);
    }
    case Func::Ln:
        if (a.is_one()) return Expr(0);
        if (a.kind() == Kind::Function && a.func() == Func::Exp) return a.arg();
        if (a.is_number() && sgn(a.value()) <= 0) throw DomainError("ln of a nonpositive constant");
        return Builder::function(Func::Ln, a, true);
    case Func::Abs: {
        if (a.is_number()) return Expr(abs(a.value()));
        if (a.kind() == Kind::Function && (a.func() == Func::Abs || a.func() == Func::Exp)) return a;
        if (a.kind() == Kind::Power && a.exponent().is_integer() && a.exponent().value().get_num() % 2 == 0)
            return a;
        Rational c = leading_coefficient(a);
        if (sgn(c) < 0) return make_function(Func::Abs, make_product({Expr(-1), a}));
        if (a.kind() == Kind::Product && c != 1) {
            auto [cc, mono] = split_coefficient(a);
            return scaled(cc, make_function(Func::Abs, mono));
        }
        return Builder::function(Func::Abs, a, true);
    }
    default:
        break;
    }
    if (a.is_zero()) return is_even(fn) ? Expr(1) : Expr(0);
    if (sgn(leading_coefficient(a)) < 0) {
        Expr flipped = make_function(fn, make_product({Expr(-1), a}));
        return is_odd(fn) ? make_product({Expr(-1), flipped}) : flipped;
    }
    return Builder::function(fn, a, true);
}

bool mentions_dummy(const Expr& e) { return depends_on(e, Expr::dummy()); }

Expr closed_primitive(const Expr& dep, const Expr& arg) {
    const Expr s = Expr::dummy();
    if (dep == s) return make_product({Expr(Rational(1, 2)), make_power(arg, Expr(2))});
    if (dep.kind() == Kind::Power && dep.base() == s && dep.exponent().is_number()) {
        Rational n = dep.exponent().value();
        if (n == -1) return make_function(Func::Ln, make_function(Func::Abs, arg));
        return make_product({Expr(Rational(1) / (n + 1)), make_power(arg, Expr(n + 1))});
    }
    if (dep.kind() == Kind::Function && dep.func() == Func::Exp) {
        Expr slope = diff(dep.arg(), s);
        if (!slope.is_zero() && !mentions_dummy(slope)) {
            Expr at = substitute(dep.arg(), {{s, arg}});
            return make_product({make_function(Func::Exp, at), make_power(slope, Expr(-1))});
        }
    }
    if (dep.kind() == Kind::Opaque && dep.children().size() == 1 && dep.children()[0] == s &&
        dep.orders()[0] >= 1) {
        return Builder::opaque(dep.name(), {arg}, {dep.orders()[0] - 1}, true);
    }
    return Builder::composite(Kind::Primitive, {dep, arg}, true);
}

Expr make_primitive(const Expr& body, const Expr& arg) {
    std::vector<Expr> out;
    for (const auto& term : terms_of(body)) {
        auto [c, mono] = split_coefficient(term);
        std::vector<Expr> outside{Expr(c)};
        std::vector<Expr> inside;
        for (const auto& f : factors_of(term))
            (mentions_dummy(f) ? inside : outside).push_back(f);
        if (inside.empty()) {
            outside.push_back(arg);
        } else {
            Expr dep = inside.size() == 1 ? inside.front() : make_product(inside);
            outside.push_back(closed_primitive(dep, arg));
        }
        out.push_back(make_product(outside));
    }
    return make_sum(out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public canonical constructors

Expr Expr::sum(std::vector<Expr> terms) {
    for (auto& t : terms) t = normalize(t);
    return make_sum(terms);
}
Expr Expr::product(std::vector<Expr> factors) {
    for (auto& f : factors) f = normalize(f);
    return make_product(std::move(factors));
}
Expr Expr::power(const Expr& base, const Expr& exponent) { return make_power(normalize(base), normalize(exponent)); }
Expr Expr::function(Func fn, const Expr& arg) { return make_function(fn, normalize(arg)); }
Expr Expr::opaque(const std::string& name, std::vector<Expr> args, std::vector<int> orders) {
    if (orders.empty()) orders.assign(args.size(), 0);
    if (orders.size() != args.size()) throw Error("derivative index does not match arity of " + name);
    for (int o : orders)
        if (o < 0) throw Error("negative derivative order for " + name);
    for (auto& a : args) a = normalize(a);
    return Builder::opaque(name, std::move(args), std::move(orders), true);
}
Expr Expr::primitive(const Expr& body, const Expr& arg) { return make_primitive(normalize(body), normalize(arg)); }

Expr normalize(const Expr& e) {
    if (e.canonical()) return e;
    const auto& ch = e.children();
    switch (e.kind()) {
    case Kind::Sum:
        return Expr::sum(ch);
    case Kind::Product:
        return Expr::product(ch);
    case Kind::Power:
        return Expr::power(ch[0], ch[1]);
    case Kind::Function:
        return Expr::function(e.func(), ch[0]);
    case Kind::Opaque:
        return Expr::opaque(e.name(), ch, e.orders());
    case Kind::Primitive:
        return Expr::primitive(ch[0], ch[1]);
    default:
        return e;
    }
}

// ---------------------------------------------------------------------------
// Operators

Expr operator+(const Expr& a, const Expr& b) { return make_sum({normalize(a), normalize(b)}); }
Expr operator-(const Expr& a, const Expr& b) {
    return make_sum({normalize(a), make_product({Expr(-1), normalize(b)})});
}
Expr operator*(const Expr& a, const Expr& b) { return make_product({normalize(a), normalize(b)}); }
Expr operator/(const Expr& a, const Expr& b) {
    return make_product({normalize(a), make_power(normalize(b), Expr(-1))});
}
Expr operator-(const Expr& a) { return make_product({Expr(-1), normalize(a)}); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Expr& exponent) { return Expr::power(base, exponent); }
Expr exp(const Expr& a) { return Expr::function(Func::Exp, a); }
Expr ln(const Expr& a) { return Expr::function(Func::Ln, a); }
Expr sin(const Expr& a) { return Expr::function(Func::Sin, a); }
Expr cos(const Expr& a) { return Expr::function(Func::Cos, a); }
Expr sinh(const Expr& a) { return Expr::function(Func::Sinh, a); }
Expr cosh(const Expr& a) { return Expr::function(Func::Cosh, a); }
Expr atan(const Expr& a) { return Expr::function(Func::Atan, a); }
Expr abs(const Expr& a) { return Expr::function(Func::Abs, a); }
Expr sqrt(const Expr& a) { return Expr::power(a, Expr(Rational(1, 2))); }

Expr divide(const Expr& num_in, const Expr& den_in) {
    Expr num = normalize(num_in);
    Expr den = normalize(den_in);
    if (den.is_zero()) throw DomainError("division by zero");
    if (den.kind() != Kind::Sum || num.is_zero()) return num / den;
    auto nterms = terms_of(num);
    for (const auto& dt : den.children()) {
        Expr q = nterms.front() / dt;
        if ((num - q * den).is_zero()) return q;
    }
    Expr rest = num;
    Expr quotient(0);
    const Expr& lead = den.children().front();
    for (int i = 0; i < 64 && !rest.is_zero(); ++i) {
        Expr q = terms_of(rest).front() / lead;
        quotient += q;
        rest -= q * den;
    }
    if (rest.is_zero()) return quotient;
    return num / den;
}

namespace sym {
Expr t() { return Expr::independent("t"); }
Expr x() { return Expr::independent("x"); }
Expr u(int nx) { return Expr::jet("u", 0, nx); }
Expr ut(int nx) { return Expr::jet("u", 1, nx); }
Expr dummy() { return Expr::dummy(); }
Expr f(const Expr& arg) { return Expr::opaque("f", {arg}); }
Expr h(const Expr& arg) { return Expr::opaque("h", {arg}); }
Expr g(const Expr& arg) { return Expr::opaque("g", {arg}); }
Expr A(const Expr& arg) { return Expr::opaque("A", {arg}); }
Expr B(const Expr& arg) { return Expr::opaque("B", {arg}); }
Expr int_a(const Expr& arg) { return Expr::primitive(A(Expr::dummy()), arg); }
Expr int_b(const Expr& arg) { return Expr::primitive(B(Expr::dummy()), arg); }
}  // namespace sym

}  // namespace jetcl
