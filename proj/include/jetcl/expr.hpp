#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace jetcl {

using Rational = mpq_class;

enum class Kind : std::uint8_t { Number, Symbol, Opaque, Primitive, Function, Power, Product, Sum };

enum class Role : std::uint8_t { Independent, Parameter, Jet, Dummy };

enum class Func : std::uint8_t { Exp, Ln, Sin, Cos, Sinh, Cosh, Atan, Abs };

struct Node;

/// Immutable expression handle. Copies share the underlying tree.
///
/// Trees produced by the arithmetic operators and the factory functions are
/// canonical. The parser produces raw trees that mirror the input; normalize()
/// turns any tree into its canonical form.
class Expr {
public:
    Expr();
    Expr(int value);
    Expr(long value);
    Expr(const Rational& value);

    static Expr number(const Rational& value);
    static Expr independent(const std::string& name);
    static Expr parameter(const std::string& name);
    /// Jet coordinate of `dependent` differentiated nt times in t and nx times in x.
    static Expr jet(const std::string& dependent, int nt = 0, int nx = 0);
    /// The bound variable of antiderivative bodies.
    static Expr dummy();

    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(const Expr& base, const Expr& exponent);
    static Expr function(Func fn, const Expr& arg);
    static Expr opaque(const std::string& name, std::vector<Expr> args, std::vector<int> orders = {});
    /// Antiderivative of `body` (an expression in dummy()) evaluated at `arg`.
    static Expr primitive(const Expr& body, const Expr& arg);

    static Expr raw_sum(std::vector<Expr> terms);
    static Expr raw_product(std::vector<Expr> factors);
    static Expr raw_power(const Expr& base, const Expr& exponent);
    static Expr raw_function(Func fn, const Expr& arg);
    static Expr raw_opaque(const std::string& name, std::vector<Expr> args, std::vector<int> orders = {});
    static Expr raw_primitive(const Expr& body, const Expr& arg);

    Kind kind() const;
    bool canonical() const;
    std::size_t hash() const;

    bool is_number() const { return kind() == Kind::Number; }
    bool is_symbol() const { return kind() == Kind::Symbol; }
    bool is_zero() const;
    bool is_one() const;
    bool is_integer() const;

    const Rational& value() const;
    Role role() const;
    const std::string& name() const;
    int nt() const;
    int nx() const;
    Func func() const;
    const std::vector<int>& orders() const;
    const std::vector<Expr>& children() const;

    const Expr& base() const { return children()[0]; }
    const Expr& exponent() const { return children()[1]; }
    const Expr& arg() const;
    const Expr& body() const { return children()[0]; }

    /// Stable textual key used for numeric points: "x", "mu", "u_tx", "v".
    std::string key() const;

    const Node* node() const { return node_.get(); }

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    friend struct Builder;
    std::shared_ptr<const Node> node_;
};

struct Node {
    Kind kind = Kind::Number;
    bool canonical = true;
    std::size_t hash = 0;
    Rational value;
    Role role = Role::Independent;
    Func func = Func::Exp;
    std::string name;
    int nt = 0;
    int nx = 0;
    std::vector<int> orders;
    std::vector<Expr> children;
};

/// Total order on trees; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);

bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sinh(const Expr& a);
Expr cosh(const Expr& a);
Expr atan(const Expr& a);
Expr abs(const Expr& a);
Expr sqrt(const Expr& a);

Expr normalize(const Expr& e);

/// Rational coefficient and the remaining monomial of a canonical term.
std::pair<Rational, Expr> split_coefficient(const Expr& term);

/// Summands of a canonical expression (the expression itself if not a sum).
std::vector<Expr> terms_of(const Expr& e);

/// Multiplicative factors of a canonical term, coefficient excluded.
std::vector<Expr> factors_of(const Expr& term);

/// Division that returns the exact quotient when the denominator divides the
/// numerator as a sum of terms, and num * den^-1 otherwise.
Expr divide(const Expr& num, const Expr& den);

// Structural queries and rewriting.

bool depends_on(const Expr& e, const Expr& symbol);
bool contains_kind(const Expr& e, Kind kind);
/// Free symbols of e, excluding dummies bound inside antiderivatives.
std::vector<Expr> free_symbols(const Expr& e);
/// Jet symbols of the given dependent variable present in e.
std::vector<Expr> jets_of(const Expr& e, const std::string& dependent);
int jet_order(const Expr& e, const std::string& dependent = "u");

using Bindings = std::map<Expr, Expr, ExprLess>;

/// Simultaneous replacement of symbols; the result is canonical.
Expr substitute(const Expr& e, const Bindings& bindings);

/// Definition of an opaque function in terms of slot symbols.
struct FunctionDef {
    std::vector<Expr> slots;
    Expr body;
};

/// Replaces applications of opaque functions, including derivatives, by their definitions.
Expr substitute_functions(const Expr& e, const std::map<std::string, FunctionDef>& defs);

/// Rebuilds e bottom-up; `visit` may replace any canonical opaque node.
Expr map_opaque(const Expr& e, const std::function<Expr(const Expr&)>& visit);

/// Replaces whole subtrees structurally equal to a key; the result is canonical.
Expr replace_subtrees(const Expr& e, const Bindings& pairs);

/// Multiplies out products containing sums. Throws Error past max_terms.
Expr expand(const Expr& e, std::size_t max_terms = 4000);

/// e times a power of each sum base chosen so that the base occurs with
/// nonnegative integer exponents in every term, then expanded. Vanishes
/// exactly when e does, wherever the bases are nonzero.
Expr clear_denominators(const Expr& e, std::size_t max_terms = 4000);

/// Applies the derivation fixed by its values on symbols, using the chain rule
/// through every node. Dummies bound by antiderivatives map to zero.
Expr derive(const Expr& e, const std::function<Expr(const Expr&)>& on_symbol);

Expr diff(const Expr& e, const Expr& var);
Expr diff(const Expr& e, const Expr& var, int times);

/// Monomial exponents over a basis, mapped to coefficients.
using Collected = std::map<std::vector<int>, Expr>;
Collected collect(const Expr& e, const std::vector<Expr>& basis);

// Printing and parsing.

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

struct SymbolTable {
    std::vector<std::string> parameters;
    std::map<std::string, std::size_t> functions;

    static SymbolTable standard();
    SymbolTable& declare_parameter(const std::string& name);
    SymbolTable& declare_function(const std::string& name, std::size_t arity);
    bool is_parameter(const std::string& name) const;
};

/// Parses the infix grammar into a raw tree.
Expr parse_raw(const std::string& text, const SymbolTable& table = SymbolTable::standard());
/// Parses and normalizes.
Expr parse(const std::string& text, const SymbolTable& table = SymbolTable::standard());

// Shorthands for the symbols used throughout.
namespace sym {
Expr t();
Expr x();
Expr u(int nx = 0);
Expr ut(int nx = 0);
Expr dummy();
Expr f(const Expr& arg);
Expr h(const Expr& arg);
Expr g(const Expr& arg);
Expr A(const Expr& arg);
Expr B(const Expr& arg);
Expr int_a(const Expr& arg);
Expr int_b(const Expr& arg);
}  // namespace sym

}  // namespace jetcl
