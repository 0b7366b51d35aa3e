#pragma once

#include "jetcl/jet.hpp"

#include <string>
#include <vector>

namespace jetcl {

/// Line-oriented key-value file with `[section label]` headers and `#` comments.
struct CaseEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct CaseSection {
    std::string name;
    std::string label;
    int line = 0;
    std::vector<CaseEntry> entries;

    bool has(const std::string& key) const;
    const CaseEntry* find(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    std::vector<const CaseEntry*> all(const std::string& key) const;
    CaseSection& add(const std::string& key, const std::string& value);
};

struct CaseFile {
    std::vector<CaseSection> sections;

    const CaseSection* first(const std::string& name) const;
    std::vector<const CaseSection*> named(const std::string& name) const;
    CaseSection& add(const std::string& name, const std::string& label = "");
};

CaseFile parse_casefile(const std::string& text);
CaseFile load_casefile(const std::string& path);
std::string write_casefile(const CaseFile& file);

/// Splits "a, b, c" into trimmed items.
std::vector<std::string> split_list(const std::string& text);

/// Symbol table with the parameters declared by an equation section.
SymbolTable symbols_for(const CaseSection& equation);

/// Parses the value of an entry; parse failures carry the entry's line.
Expr parse_entry(const CaseEntry& entry, const SymbolTable& table);

/// Builds an equation from keys f, g, h, A, B, IntA, IntB, parameter values,
/// `domain.<symbol> = lo, hi` ranges and `rule = name[orders](args) = expr` rewrites.
/// Parameters listed in `overrides` replace values from the file.
Equation equation_from(const CaseSection& equation, const SymbolTable& table, const Bindings& overrides = {});

/// Parses `name[1,0](t,x) = expr` into a constrained symbol.
ConstrainedSymbol parse_rule(const CaseEntry& entry, const SymbolTable& table);

/// Inverse of parse_rule.
std::string rule_text(const ConstrainedSymbol& rule);

}  // namespace jetcl
