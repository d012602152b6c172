#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfio {

struct ConfigError : std::runtime_error {
    int line = 0;
    int col = 0;
    ConfigError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(c) + ")"),
          line(l), col(c) {}
};

// One term of the config grammar: number | ident | string | [list] |
// name(arg, key=value, ...). Identifiers may contain '.', '_' and a prime.
struct Term {
    enum class Kind { Number, Ident, String, List, Call };
    Kind kind = Kind::Ident;
    double number = 0;
    std::string text;                                  // ident/string/call name
    std::vector<Term> items;                           // list elements / positional args
    std::vector<std::pair<std::string, Term>> kwargs;  // named args

    std::string serialize() const;
    bool operator==(const Term& o) const;

    bool is_number() const { return kind == Kind::Number; }
    double as_number() const;
    // number, or the idents inf / -inf
    double as_exponent() const;
    const Term* kwarg(const std::string& key) const;
};

// Flat key = term configuration; '#' starts a comment. Keys serialize sorted
// so parse -> serialize -> parse is the identity on the entry map.
class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);

    std::string serialize() const;
    std::uint64_t content_hash() const; // FNV-1a of the canonical serialization

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const Term& require(const std::string& key) const;
    const Term* find(const std::string& key) const;

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const;
    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const;
    std::string ident(const std::string& key, const std::string& fallback) const;

    void set(const std::string& key, Term t) { entries_[key] = std::move(t); }
    const std::map<std::string, Term>& entries() const { return entries_; }

private:
    std::map<std::string, Term> entries_;
};

std::string format_double(double v); // shortest round-trip-stable decimal

} // namespace tfio
