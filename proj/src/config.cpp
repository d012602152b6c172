#include "tfio/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfio {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the short form when it round-trips
    char shortbuf[40];
    for (int prec = 1; prec <= 16; ++prec) {
        std::snprintf(shortbuf, sizeof shortbuf, "%.*g", prec, v);
        double back = 0;
        std::sscanf(shortbuf, "%lf", &back);
        if (back == v) return shortbuf;
    }
    return buf;
}

double Term::as_number() const {
    if (kind != Kind::Number) throw std::runtime_error("config term is not a number");
    return number;
}

double Term::as_exponent() const {
    if (kind == Kind::Number) return number;
    if (kind == Kind::Ident && text == "inf") return INFINITY;
    throw std::runtime_error("config term is not an exponent (number or inf)");
}

const Term* Term::kwarg(const std::string& key) const {
    for (const auto& [k, v] : kwargs)
        if (k == key) return &v;
    return nullptr;
}

std::string Term::serialize() const {
    switch (kind) {
        case Kind::Number: return format_double(number);
        case Kind::Ident: return text;
        case Kind::String: return "\"" + text + "\"";
        case Kind::List: {
            std::string s = "[";
            for (std::size_t i = 0; i < items.size(); ++i)
                s += (i ? "," : "") + items[i].serialize();
            return s + "]";
        }
        case Kind::Call: {
            std::string s = text + "(";
            bool first = true;
            for (const auto& a : items) {
                if (!first) s += ",";
                first = false;
                s += a.serialize();
            }
            for (const auto& [k, v] : kwargs) {
                if (!first) s += ",";
                first = false;
                s += k + "=" + v.serialize();
            }
            return s + ")";
        }
    }
    return "";
}

bool Term::operator==(const Term& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Number: return number == o.number;
        case Kind::Ident:
        case Kind::String: return text == o.text;
        case Kind::List: return items == o.items;
        case Kind::Call: return text == o.text && items == o.items && kwargs == o.kwargs;
    }
    return false;
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1, col = 1;

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    char get() {
        const char c = peek();
        if (c == '\0') return c;
        ++pos;
        if (c == '\n') { ++line; col = 1; } else ++col;
        return c;
    }
    void skip_space() {
        while (peek() == ' ' || peek() == '\t') get();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(msg, line, col); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
}

Term parse_term(Cursor& cur);

Term parse_ident_or_call(Cursor& cur) {
    std::string name;
    while (ident_char(cur.peek())) name += cur.get();
    cur.skip_space();
    Term t;
    if (cur.peek() != '(') {
        t.kind = Term::Kind::Ident;
        t.text = name;
        return t;
    }
    cur.get(); // (
    t.kind = Term::Kind::Call;
    t.text = name;
    cur.skip_space();
    if (cur.peek() == ')') { cur.get(); return t; }
    while (true) {
        cur.skip_space();
        // key=value or positional
        const std::size_t save_pos = cur.pos;
        const int save_line = cur.line, save_col = cur.col;
        if (ident_start(cur.peek())) {
            std::string key;
            while (ident_char(cur.peek())) key += cur.get();
            cur.skip_space();
            if (cur.peek() == '=') {
                cur.get();
                cur.skip_space();
                t.kwargs.emplace_back(key, parse_term(cur));
            } else {
                cur.pos = save_pos;
                cur.line = save_line;
                cur.col = save_col;
                t.items.push_back(parse_term(cur));
            }
        } else {
            t.items.push_back(parse_term(cur));
        }
        cur.skip_space();
        if (cur.peek() == ',') { cur.get(); continue; }
        if (cur.peek() == ')') { cur.get(); break; }
        cur.fail("expected ',' or ')' in argument list");
    }
    return t;
}

Term parse_term(Cursor& cur) {
    cur.skip_space();
    const char c = cur.peek();
    if (c == '[') {
        cur.get();
        Term t;
        t.kind = Term::Kind::List;
        cur.skip_space();
        if (cur.peek() == ']') { cur.get(); return t; }
        while (true) {
            t.items.push_back(parse_term(cur));
            cur.skip_space();
            if (cur.peek() == ',') { cur.get(); continue; }
            if (cur.peek() == ']') { cur.get(); break; }
            cur.fail("expected ',' or ']' in list");
        }
        return t;
    }
    if (c == '"') {
        cur.get();
        Term t;
        t.kind = Term::Kind::String;
        while (cur.peek() != '"') {
            if (cur.peek() == '\0') cur.fail("unterminated string");
            t.text += cur.get();
        }
        cur.get();
        return t;
    }
    if (ident_start(c)) return parse_ident_or_call(cur);
    // number
    std::string num;
    if (c == '+' || c == '-') num += cur.get();
    bool any = false;
    while (std::isdigit(static_cast<unsigned char>(cur.peek())) || cur.peek() == '.' ||
           cur.peek() == 'e' || cur.peek() == 'E' ||
           ((cur.peek() == '+' || cur.peek() == '-') && !num.empty() &&
            (num.back() == 'e' || num.back() == 'E'))) {
        num += cur.get();
        any = true;
    }
    if (!any) cur.fail("expected a term");
    Term t;
    t.kind = Term::Kind::Number;
    try {
        t.number = std::stod(num);
    } catch (const std::exception&) {
        cur.fail("malformed number '" + num + "'");
    }
    return t;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    Cursor cur{text};
    while (cur.peek() != '\0') {
        cur.skip_space();
        if (cur.peek() == '#') {
            while (cur.peek() != '\n' && cur.peek() != '\0') cur.get();
        }
        if (cur.peek() == '\n') { cur.get(); continue; }
        if (cur.peek() == '\0') break;
        if (!ident_start(cur.peek())) cur.fail("expected a key");
        std::string key;
        while (ident_char(cur.peek())) key += cur.get();
        cur.skip_space();
        if (cur.peek() != '=') cur.fail("expected '=' after key '" + key + "'");
        cur.get();
        Term value = parse_term(cur);
        cur.skip_space();
        if (cur.peek() == '#')
            while (cur.peek() != '\n' && cur.peek() != '\0') cur.get();
        if (cur.peek() != '\n' && cur.peek() != '\0') cur.fail("trailing characters after value");
        cfg.entries_[key] = std::move(value);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v.serialize() + "\n";
    return out;
}

std::uint64_t ExperimentConfig::content_hash() const {
    const std::string s = serialize();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

const Term& ExperimentConfig::require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    return it->second;
}

const Term* ExperimentConfig::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

double ExperimentConfig::number(const std::string& key, std::optional<double> fallback) const {
    const Term* t = find(key);
    if (!t) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing numeric key '" + key + "'");
    }
    return t->as_number();
}

int ExperimentConfig::integer(const std::string& key, std::optional<int> fallback) const {
    const Term* t = find(key);
    if (!t) {
        if (fallback) return *fallback;
        throw std::runtime_error("config: missing integer key '" + key + "'");
    }
    const double v = t->as_number();
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 1e-9) throw std::runtime_error("config: key '" + key + "' is not an integer");
    return i;
}

std::string ExperimentConfig::ident(const std::string& key, const std::string& fallback) const {
    const Term* t = find(key);
    if (!t) return fallback;
    if (t->kind != Term::Kind::Ident && t->kind != Term::Kind::String)
        throw std::runtime_error("config: key '" + key + "' is not a name");
    return t->text;
}

} // namespace tfio
