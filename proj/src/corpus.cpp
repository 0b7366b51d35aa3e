#include "jetcl/corpus.hpp"

#include "jetcl/errors.hpp"

namespace jetcl {

namespace {

struct Drawn {
    Expr e;
    std::size_t terms;
};

int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

Drawn leaf(std::mt19937_64& rng, const CorpusOptions& o) {
    int k = pick(rng, static_cast<int>(o.atoms.size()) + 2);
    if (k < static_cast<int>(o.atoms.size())) return {o.atoms[static_cast<std::size_t>(k)], 1};
    return {Expr(pick(rng, 7) - 3), 1};
}

Drawn draw(std::mt19937_64& rng, const CorpusOptions& o, int depth) {
    if (depth <= 0 || pick(rng, 5) == 0) return leaf(rng, o);
    switch (pick(rng, o.functions ? 6 : 4)) {
    case 0: {
        Drawn a = draw(rng, o, depth - 1), b = draw(rng, o, depth - 1);
        return {Expr::raw_sum({a.e, b.e}), a.terms + b.terms};
    }
    case 1:
    case 2: {
        Drawn a = draw(rng, o, depth - 1), b = draw(rng, o, depth - 1);
        return {Expr::raw_product({a.e, b.e}), a.terms * b.terms};
    }
    case 3: {
        Drawn a = draw(rng, o, depth - 1);
        int n = pick(rng, 4) - 1;
        if (n == 0) n = 2;
        std::size_t terms = a.terms;
        for (int i = 1; i < n; ++i) terms *= a.terms;
        return {Expr::raw_power(a.e, Expr(n)), terms};
    }
    case 4: {
        Drawn a = draw(rng, o, depth - 1);
        static const Func fns[] = {Func::Exp, Func::Sin, Func::Cos, Func::Atan, Func::Sinh};
        return {Expr::raw_function(fns[pick(rng, 5)], a.e), 1};
    }
    default: {
        Drawn a = draw(rng, o, depth - 1);
        if (!o.opaque) return {Expr::raw_function(Func::Cos, a.e), 1};
        static const char* names[] = {"f", "A", "h"};
        return {Expr::raw_opaque(names[pick(rng, 3)], {a.e}), 1};
    }
    }
}

}  // namespace

std::vector<Expr> jet_atoms(int max_order) {
    std::vector<Expr> atoms{sym::t(), sym::x()};
    for (int k = 0; k <= max_order; ++k) atoms.push_back(sym::u(k));
    return atoms;
}

Expr random_expr(std::mt19937_64& rng, const CorpusOptions& options) {
    for (;;) {
        Drawn d = draw(rng, options, options.depth);
        if (d.terms > options.max_terms) continue;
        try {
            normalize(d.e);
        } catch (const DomainError&) {
            continue;
        }
        return d.e;
    }
}

}  // namespace jetcl
