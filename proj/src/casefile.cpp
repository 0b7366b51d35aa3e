#include "jetcl/casefile.hpp"

#include "jetcl/errors.hpp"

#include <fstream>
#include <sstream>

namespace jetcl {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const CaseEntry& entry, const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw CaseFileError("expected a number in '" + entry.key + "', got '" + text + "'", entry.line);
    }
}

}  // namespace

bool CaseSection::has(const std::string& key) const { return find(key) != nullptr; }

const CaseEntry* CaseSection::find(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

std::string CaseSection::get(const std::string& key, const std::string& fallback) const {
    const CaseEntry* e = find(key);
    return e ? e->value : fallback;
}

std::vector<const CaseEntry*> CaseSection::all(const std::string& key) const {
    std::vector<const CaseEntry*> out;
    for (const auto& e : entries)
        if (e.key == key) out.push_back(&e);
    return out;
}

CaseSection& CaseSection::add(const std::string& key, const std::string& value) {
    entries.push_back({key, value, 0});
    return *this;
}

const CaseSection* CaseFile::first(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<const CaseSection*> CaseFile::named(const std::string& name) const {
    std::vector<const CaseSection*> out;
    for (const auto& s : sections)
        if (s.name == name) out.push_back(&s);
    return out;
}

CaseSection& CaseFile::add(const std::string& name, const std::string& label) {
    sections.push_back({name, label, 0, {}});
    return sections.back();
}

CaseFile parse_casefile(const std::string& text) {
    CaseFile file;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw CaseFileError("unterminated section header", line);
            std::string inner = trim(s.substr(1, s.size() - 2));
            if (inner.empty()) throw CaseFileError("empty section header", line);
            auto sp = inner.find_first_of(" \t");
            CaseSection sec;
            sec.name = inner.substr(0, sp);
            sec.label = sp == std::string::npos ? "" : trim(inner.substr(sp));
            sec.line = line;
            file.sections.push_back(std::move(sec));
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw CaseFileError("expected 'key = value'", line);
        if (file.sections.empty()) throw CaseFileError("entry outside of a section", line);
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw CaseFileError("empty key", line);
        file.sections.back().entries.push_back({key, trim(s.substr(eq + 1)), line});
    }
    return file;
}

CaseFile load_casefile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open case file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_casefile(ss.str());
}

std::string write_casefile(const CaseFile& file) {
    std::ostringstream out;
    bool first = true;
    for (const auto& s : file.sections) {
        if (!first) out << '\n';
        first = false;
        out << '[' << s.name;
        if (!s.label.empty()) out << ' ' << s.label;
        out << "]\n";
        for (const auto& e : s.entries) out << e.key << " = " << e.value << '\n';
    }
    return out.str();
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

SymbolTable symbols_for(const CaseSection& equation) {
    SymbolTable table = SymbolTable::standard();
    for (const auto& p : split_list(equation.get("parameters"))) table.declare_parameter(p);
    return table;
}

Expr parse_entry(const CaseEntry& entry, const SymbolTable& table) {
    try {
        return parse(entry.value, table);
    } catch (const ParseError& e) {
        throw CaseFileError("in '" + entry.key + "': " + e.what(), entry.line);
    }
}

ConstrainedSymbol parse_rule(const CaseEntry& entry, const SymbolTable& table) {
    auto eq = entry.value.find('=');
    if (eq == std::string::npos) throw CaseFileError("rule needs 'derivative = expression'", entry.line);
    CaseEntry lhs{entry.key, trim(entry.value.substr(0, eq)), entry.line};
    CaseEntry rhs{entry.key, trim(entry.value.substr(eq + 1)), entry.line};
    Expr head = parse_entry(lhs, table);
    if (head.kind() != Kind::Opaque) throw CaseFileError("rule must start with a function derivative", entry.line);
    ConstrainedSymbol rule;
    rule.name = head.name();
    int ones = 0;
    for (std::size_t i = 0; i < head.orders().size(); ++i) {
        if (head.orders()[i] == 1) {
            rule.slot = i;
            ++ones;
        } else if (head.orders()[i] != 0) {
            ones = 2;
        }
    }
    if (ones != 1) throw CaseFileError("rule must rewrite a first derivative in one argument", entry.line);
    for (const auto& a : head.children()) {
        if (a.kind() != Kind::Symbol) throw CaseFileError("rule arguments must be variables", entry.line);
        rule.slots.push_back(a);
    }
    rule.rule = parse_entry(rhs, table);
    return rule;
}

std::string rule_text(const ConstrainedSymbol& rule) {
    std::vector<int> orders(rule.slots.size(), 0);
    orders[rule.slot] = 1;
    return to_string(Expr::opaque(rule.name, rule.slots, orders)) + " = " + to_string(rule.rule);
}

Equation equation_from(const CaseSection& sec, const SymbolTable& table, const Bindings& overrides) {
    Bindings values;
    for (const auto& p : table.parameters) {
        if (const CaseEntry* e = sec.find(p)) values[Expr::parameter(p)] = parse_entry(*e, table);
    }
    for (const auto& [k, v] : overrides) values[k] = v;
    auto field = [&](const std::string& key, const Expr& fallback) {
        const CaseEntry* e = sec.find(key);
        return substitute(e ? parse_entry(*e, table) : fallback, values);
    };
    Equation eq = Equation::make(field("f", Expr(1)), field("g", Expr(1)), field("h", Expr(1)), field("A", Expr(1)),
                                 field("B", Expr(0)));
    if (sec.has("IntA")) eq.int_a = field("IntA", Expr(0));
    if (sec.has("IntB")) eq.int_b = field("IntB", Expr(0));
    for (const auto& p : table.parameters)
        if (!values.count(Expr::parameter(p))) eq.parameters.push_back(p);
    for (const auto* e : sec.all("rule")) {
        ConstrainedSymbol r = parse_rule(*e, table);
        r.rule = substitute(r.rule, values);
        eq.rules.push_back(std::move(r));
    }
    for (const auto& e : sec.entries) {
        if (e.key.rfind("domain.", 0) != 0) continue;
        auto items = split_list(e.value);
        if (items.size() != 2) throw CaseFileError("domain needs 'lo, hi'", e.line);
        double lo = parse_number(e, items[0]), hi = parse_number(e, items[1]);
        if (!(lo < hi)) throw CaseFileError("empty domain interval", e.line);
        eq.domain.set(e.key.substr(7), lo, hi);
    }
    if (const CaseEntry* e = sec.find("order_cap")) eq.order_cap = static_cast<int>(parse_number(*e, e->value));
    return eq;
}

}  // namespace jetcl
