#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spacinglab/errors.hpp"

namespace spacinglab {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_real(const std::string& raw, int line = 0) {
    const std::string s = trim(raw);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a real number, got '" + s + "'", line);
    }
}

inline long long parse_int(const std::string& raw, int line = 0) {
    const std::string s = trim(raw);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", line);
    }
}

inline std::vector<double> parse_real_list(const std::string& raw, int line = 0) {
    std::vector<double> out;
    for (const auto& piece : split(raw, ',')) out.push_back(parse_real(piece, line));
    return out;
}

/// One key = value line from a flat config file. Keys may repeat.
struct KeyValue {
    std::string key;
    std::string value;
    int line;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines skipped.
inline std::vector<KeyValue> read_key_values(std::istream& in) {
    std::vector<KeyValue> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        KeyValue kv;
        kv.key = trim(line.substr(0, eq));
        kv.value = trim(line.substr(eq + 1));
        kv.line = lineno;
        if (kv.key.empty()) throw ParseError("empty key", lineno);
        out.push_back(kv);
    }
    return out;
}

inline std::vector<KeyValue> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return read_key_values(in);
}

} // namespace spacinglab
