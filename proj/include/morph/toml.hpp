#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace morph::toml {

/// Minimal TOML subset: [table.subtable] headers, key = value pairs with
/// strings, booleans, numbers and flat arrays of numbers, # comments.
/// Enough for scenario files; unknown keys are rejected at mapping time.
struct Value {
    enum class Kind { String, Bool, Number, Array } kind = Kind::Number;
    std::string str;
    bool boolean = false;
    double number = 0.0;
    std::vector<double> array;
};

class Document {
public:
    /// Parse text; throws ConfigInvalid with a line reference on bad syntax.
    static Document parse(const std::string& text);
    static Document parse_file(const std::string& path);

    bool has(const std::string& dotted_key) const;
    const Value& at(const std::string& dotted_key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    double get_number(const std::string& key, double fallback) const;
    double require_number(const std::string& key) const;
    std::string require_string(const std::string& key) const;
    std::vector<double> require_array(const std::string& key, std::size_t len) const;
    std::vector<double> get_array(const std::string& key, const std::vector<double>& fallback) const;

    /// Keys actually present, in file order.
    const std::vector<std::string>& keys() const { return order_; }

    /// Mark a key as consumed; after mapping, unknown_keys() lists leftovers.
    void consume(const std::string& key) const;
    std::vector<std::string> unknown_keys() const;

    /// Serialize back (sorted tables) for round-trip checks.
    std::string serialize() const;

private:
    std::map<std::string, Value> values_;
    std::vector<std::string> order_;
    mutable std::set<std::string> consumed_;
};

}  // namespace morph::toml
