#include "morph/toml.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "morph/errors.hpp"

namespace morph::toml {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& tok, int line_no) {
    const std::string t = trim(tok);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last)
        throw ConfigInvalid("line " + std::to_string(line_no) + ": bad number '" + t + "'");
    return v;
}

Value parse_value(const std::string& raw, int line_no) {
    const std::string t = trim(raw);
    if (t.empty()) throw ConfigInvalid("line " + std::to_string(line_no) + ": missing value");
    Value v;
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"')
            throw ConfigInvalid("line " + std::to_string(line_no) + ": unterminated string");
        v.kind = Value::Kind::String;
        v.str = t.substr(1, t.size() - 2);
        return v;
    }
    if (t == "true" || t == "false") {
        v.kind = Value::Kind::Bool;
        v.boolean = t == "true";
        return v;
    }
    if (t.front() == '[') {
        if (t.back() != ']')
            throw ConfigInvalid("line " + std::to_string(line_no) + ": unterminated array");
        v.kind = Value::Kind::Array;
        const std::string body = t.substr(1, t.size() - 2);
        std::string tok;
        std::stringstream ss(body);
        while (std::getline(ss, tok, ',')) {
            if (trim(tok).empty()) continue;
            v.array.push_back(parse_number(tok, line_no));
        }
        return v;
    }
    v.kind = Value::Kind::Number;
    v.number = parse_number(t, line_no);
    return v;
}

}  // namespace

Document Document::parse(const std::string& text) {
    Document doc;
    std::stringstream ss(text);
    std::string line;
    std::string table;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigInvalid("line " + std::to_string(line_no) + ": bad table header");
            table = trim(t.substr(1, t.size() - 2));
            if (table.empty())
                throw ConfigInvalid("line " + std::to_string(line_no) + ": empty table name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigInvalid("line " + std::to_string(line_no) + ": empty key");
        const std::string full = table.empty() ? key : table + "." + key;
        if (doc.values_.count(full))
            throw ConfigInvalid("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
        doc.values_[full] = parse_value(t.substr(eq + 1), line_no);
        doc.order_.push_back(full);
    }
    return doc;
}

Document Document::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool Document::has(const std::string& key) const { return values_.count(key) != 0; }

const Value& Document::at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigInvalid("missing config key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string Document::get_string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    if (v.kind != Value::Kind::String) throw ConfigInvalid("key '" + key + "' must be a string");
    return v.str;
}

bool Document::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Value& v = at(key);
    if (v.kind != Value::Kind::Bool) throw ConfigInvalid("key '" + key + "' must be a boolean");
    return v.boolean;
}

double Document::get_number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return require_number(key);
}

double Document::require_number(const std::string& key) const {
    const Value& v = at(key);
    if (v.kind != Value::Kind::Number) throw ConfigInvalid("key '" + key + "' must be a number");
    return v.number;
}

std::string Document::require_string(const std::string& key) const {
    const Value& v = at(key);
    if (v.kind != Value::Kind::String) throw ConfigInvalid("key '" + key + "' must be a string");
    return v.str;
}

std::vector<double> Document::require_array(const std::string& key, std::size_t len) const {
    const Value& v = at(key);
    if (v.kind != Value::Kind::Array) throw ConfigInvalid("key '" + key + "' must be an array");
    if (len != 0 && v.array.size() != len)
        throw ConfigInvalid("key '" + key + "' must have " + std::to_string(len) + " entries");
    return v.array;
}

std::vector<double> Document::get_array(const std::string& key,
                                        const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    return require_array(key, fallback.empty() ? 0 : fallback.size());
}

void Document::consume(const std::string& key) const { consumed_.insert(key); }

std::vector<std::string> Document::unknown_keys() const {
    std::vector<std::string> out;
    for (const auto& k : order_)
        if (!consumed_.count(k)) out.push_back(k);
    return out;
}

std::string Document::serialize() const {
    std::ostringstream os;
    os.precision(17);
    std::string current_table;
    for (const auto& full : order_) {
        const auto dotpos = full.rfind('.');
        const std::string table = dotpos == std::string::npos ? "" : full.substr(0, dotpos);
        const std::string key = dotpos == std::string::npos ? full : full.substr(dotpos + 1);
        if (table != current_table) {
            os << "[" << table << "]\n";
            current_table = table;
        }
        const Value& v = values_.at(full);
        os << key << " = ";
        switch (v.kind) {
            case Value::Kind::String: os << '"' << v.str << '"'; break;
            case Value::Kind::Bool: os << (v.boolean ? "true" : "false"); break;
            case Value::Kind::Number: os << v.number; break;
            case Value::Kind::Array: {
                os << "[";
                for (std::size_t i = 0; i < v.array.size(); ++i)
                    os << (i ? ", " : "") << v.array[i];
                os << "]";
                break;
            }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace morph::toml
