#include "jetcl/errors.hpp"
#include "jetcl/expr.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

namespace jetcl {

// ---------------------------------------------------------------------------
// Printing

namespace {

struct Printed {
    std::string text;
    int prec;  // 1 sum, 2 product or negation, 3 power, 4 atom
};

const char* func_name(Func fn) {
    switch (fn) {
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Atan: return "atan";
    case Func::Abs: return "abs";
    }
    return "?";
}

Printed render(const Expr& e);

std::string wrapped(const Expr& e, int need) {
    Printed p = render(e);
    if (p.prec < need) return "(" + p.text + ")";
    return p.text;
}

std::string symbol_text(const Expr& e) {
    if (e.role() == Role::Jet && e.nt() == 0 && e.nx() > 3) return e.name() + "{" + std::to_string(e.nx()) + "}";
    return e.key();
}

Printed render(const Expr& e) {
    switch (e.kind()) {
    case Kind::Number: {
        std::string s = e.value().get_str();
        int prec = 4;
        if (sgn(e.value()) < 0 || e.value().get_den() != 1) prec = 2;
        return {s, prec};
    }
    case Kind::Symbol:
        return {symbol_text(e), 4};
    case Kind::Function:
        return {std::string(func_name(e.func())) + "(" + render(e.arg()).text + ")", 4};
    case Kind::Opaque: {
        std::string s = e.name();
        bool derived = std::any_of(e.orders().begin(), e.orders().end(), [](int o) { return o != 0; });
        if (derived) {
            s += "[";
            for (std::size_t i = 0; i < e.orders().size(); ++i) s += (i ? "," : "") + std::to_string(e.orders()[i]);
            s += "]";
        }
        s += "(";
        for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? ", " : "") + render(e.children()[i]).text;
        return {s + ")", 4};
    }
    case Kind::Primitive: {
        const Expr& body = e.children()[0];
        const Expr& arg = e.children()[1];
        if (body.kind() == Kind::Opaque && body.children().size() == 1 && body.children()[0] == Expr::dummy() &&
            body.orders()[0] == 0 && (body.name() == "A" || body.name() == "B"))
            return {"Int" + body.name() + "(" + render(arg).text + ")", 4};
        return {"Int(" + render(body).text + ", " + render(arg).text + ")", 4};
    }
    case Kind::Power:
        return {wrapped(e.base(), 4) + "^" + wrapped(e.exponent(), 3), 3};
    case Kind::Product: {
        const auto& ch = e.children();
        std::string s;
        std::size_t start = 0;
        if (!ch.empty() && ch[0].is_number() && ch.size() > 1) {
            const Rational& c = ch[0].value();
            if (c == -1)
                s = "-";
            else
                s = c.get_str() + "*";
            start = 1;
        }
        for (std::size_t i = start; i < ch.size(); ++i) {
            if (i > start) s += "*";
            s += wrapped(ch[i], i == 0 ? 2 : 3);
        }
        return {s, 2};
    }
    case Kind::Sum: {
        std::string s;
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            Printed p = render(e.children()[i]);
            if (p.prec < 2) p = {"(" + p.text + ")", 4};
            if (i == 0)
                s = p.text;
            else if (p.text[0] == '-')
                s += " - " + p.text.substr(1);
            else
                s += " + " + p.text;
        }
        return {s, 1};
    }
    }
    return {"?", 4};
}

}  // namespace

std::string to_string(const Expr& e) { return render(e).text; }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Symbol table

SymbolTable SymbolTable::standard() {
    SymbolTable t;
    for (const char* name : {"f", "g", "h", "A", "B", "X", "phi"}) t.functions[name] = 1;
    t.functions["sigma"] = 2;
    t.functions["alpha"] = 2;
    return t;
}

SymbolTable& SymbolTable::declare_parameter(const std::string& name) {
    if (!is_parameter(name)) parameters.push_back(name);
    return *this;
}

SymbolTable& SymbolTable::declare_function(const std::string& name, std::size_t arity) {
    functions[name] = arity;
    return *this;
}

bool SymbolTable::is_parameter(const std::string& name) const {
    return std::find(parameters.begin(), parameters.end(), name) != parameters.end();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const char* const kDependents[] = {"u", "v", "w", "v1", "v2"};

bool is_dependent(const std::string& s) {
    return std::any_of(std::begin(kDependents), std::end(kDependents), [&](const char* d) { return s == d; });
}

bool elementary(const std::string& s, Func& fn) {
    static const std::pair<const char*, Func> table[] = {
        {"exp", Func::Exp},   {"ln", Func::Ln},     {"sin", Func::Sin},   {"cos", Func::Cos},
        {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"atan", Func::Atan}, {"abs", Func::Abs},
    };
    for (const auto& [name, f] : table)
        if (s == name) {
            fn = f;
            return true;
        }
    return false;
}

class Parser {
public:
    Parser(const std::string& text, const SymbolTable& table) : s_(text), table_(table) {}

    Expr parse_all() {
        Expr e = expression();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Expr expression() {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+'))
                terms.push_back(term());
            else if (accept('-'))
                terms.push_back(Expr::raw_product({Expr(-1), term()}));
            else
                break;
        }
        return terms.size() == 1 ? terms.front() : Expr::raw_sum(std::move(terms));
    }

    Expr term() {
        std::vector<Expr> factors{unary()};
        for (;;) {
            if (accept('*'))
                factors.push_back(unary());
            else if (accept('/'))
                factors.push_back(Expr::raw_power(unary(), Expr(-1)));
            else
                break;
        }
        return factors.size() == 1 ? factors.front() : Expr::raw_product(std::move(factors));
    }

    Expr unary() {
        if (accept('-')) {
            Expr inner = unary();
            if (inner.is_number()) return Expr(-inner.value());
            return Expr::raw_product({Expr(-1), inner});
        }
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return Expr::raw_power(base, unary());
        return base;
    }

    Expr number() {
        std::size_t start = pos_;
        mpz_class mantissa = 0;
        long scale = 0;
        bool digits = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            mantissa = mantissa * 10 + (s_[pos_++] - '0');
            digits = true;
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                mantissa = mantissa * 10 + (s_[pos_++] - '0');
                --scale;
                digits = true;
            }
        }
        if (!digits) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            int sign = 1;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) sign = s_[pos_++] == '-' ? -1 : 1;
            long ex = 0;
            bool any = false;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ex = ex * 10 + (s_[pos_++] - '0');
                any = true;
                if (ex > 400) fail("exponent too large");
            }
            if (!any)
                pos_ = save;
            else
                scale += sign * ex;
        }
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
        Rational v = scale < 0 ? Rational(mantissa, p10) : Rational(mantissa * p10);
        v.canonicalize();
        return Expr(v);
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    std::vector<Expr> arguments() {
        std::vector<Expr> args;
        expect('(');
        if (accept(')')) return args;
        do {
            args.push_back(expression());
        } while (accept(','));
        expect(')');
        return args;
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return named();
        fail(std::string("unexpected '") + c + "'");
    }

    Expr named() {
        std::size_t at = pos_;
        std::string id = identifier();
        char next = pos_ < s_.size() ? s_[pos_] : '\0';
        if (next == '{' && is_dependent(id)) {
            ++pos_;
            std::size_t digits_at = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (digits_at == pos_) fail("expected jet order");
            int k = std::stoi(s_.substr(digits_at, pos_ - digits_at));
            if (pos_ >= s_.size() || s_[pos_] != '}') fail("expected '}'");
            ++pos_;
            return Expr::jet(id, 0, k);
        }
        if (peek() == '(') return call(id, at, {});
        if (peek() == '[') {
            expect('[');
            std::vector<int> orders;
            do {
                skip();
                std::size_t d = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (d == pos_) fail("expected derivative order");
                orders.push_back(std::stoi(s_.substr(d, pos_ - d)));
            } while (accept(','));
            expect(']');
            if (peek() != '(') fail("expected argument list");
            return call(id, at, orders);
        }
        return variable(id, at);
    }

    Expr call(const std::string& id, std::size_t at, const std::vector<int>& orders) {
        Func fn;
        if (orders.empty() && elementary(id, fn)) {
            auto args = arguments();
            if (args.size() != 1) throw ParseError(id + " takes one argument", at);
            return Expr::raw_function(fn, args[0]);
        }
        if (orders.empty() && id == "sqrt") {
            auto args = arguments();
            if (args.size() != 1) throw ParseError("sqrt takes one argument", at);
            return Expr::raw_power(args[0], Expr(Rational(1, 2)));
        }
        if (orders.empty() && (id == "IntA" || id == "IntB")) {
            auto args = arguments();
            if (args.size() != 1) throw ParseError(id + " takes one argument", at);
            return Expr::raw_primitive(Expr::opaque(id.substr(3), {Expr::dummy()}), args[0]);
        }
        if (orders.empty() && id == "Int") {
            auto args = arguments();
            if (args.size() != 2) throw ParseError("Int takes a body and an argument", at);
            return Expr::raw_primitive(args[0], args[1]);
        }
        auto it = table_.functions.find(id);
        if (it == table_.functions.end()) throw UnknownSymbolError(id, at);
        auto args = arguments();
        if (args.size() != it->second)
            throw ParseError(id + " expects " + std::to_string(it->second) + " argument(s)", at);
        if (!orders.empty() && orders.size() != args.size())
            throw ParseError("derivative index of " + id + " does not match its arity", at);
        return Expr::raw_opaque(id, std::move(args), orders);
    }

    Expr variable(const std::string& id, std::size_t at) {
        if (id == "t" || id == "x" || id == "y") return Expr::independent(id);
        if (id == "_s") return Expr::dummy();
        if (is_dependent(id)) return Expr::jet(id, 0, 0);
        auto us = id.find('_');
        if (us != std::string::npos && is_dependent(id.substr(0, us)) && us + 1 < id.size()) {
            std::string tail = id.substr(us + 1);
            if (std::all_of(tail.begin(), tail.end(), [](char ch) { return ch == 't' || ch == 'x'; })) {
                int nt = static_cast<int>(std::count(tail.begin(), tail.end(), 't'));
                return Expr::jet(id.substr(0, us), nt, static_cast<int>(tail.size()) - nt);
            }
        }
        if (table_.is_parameter(id)) return Expr::parameter(id);
        throw UnknownSymbolError(id, at);
    }

    const std::string& s_;
    const SymbolTable& table_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_raw(const std::string& text, const SymbolTable& table) { return Parser(text, table).parse_all(); }

Expr parse(const std::string& text, const SymbolTable& table) { return normalize(parse_raw(text, table)); }

}  // namespace jetcl
