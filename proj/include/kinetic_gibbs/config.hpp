#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kg {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration with '#' comments. Keys are consumed by the
// typed getters; anything left unconsumed is rejected by finish(), so a
// misspelled key cannot silently fall back to a default.
class Config {
public:
    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return from_string(ss.str());
    }

    static Config from_string(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (cfg.values_.count(key))
                throw ConfigError("duplicate key: " + key);
            cfg.values_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing required key: " + key);
        consumed_.insert(key);
        return it->second;
    }
    std::string get_string(const std::string& key, const std::string& fallback) {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) { return parse_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    long long get_int(const std::string& key) {
        const std::string v = get_string(key);
        try {
            std::size_t pos = 0;
            const long long out = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            throw ConfigError("key " + key + ": not an integer: " + v);
        }
    }
    long long get_int(const std::string& key, long long fallback) {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool(const std::string& key) {
        const std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("key " + key + ": not a boolean: " + v);
    }
    bool get_bool(const std::string& key, bool fallback) {
        return has(key) ? get_bool(key) : fallback;
    }

    // Comma-separated list of doubles.
    std::vector<double> get_double_list(const std::string& key) {
        const std::string v = get_string(key);
        std::vector<double> out;
        std::istringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) throw ConfigError("key " + key + ": empty list element");
            out.push_back(parse_double(key, t));
        }
        if (out.empty()) throw ConfigError("key " + key + ": empty list");
        return out;
    }

    // Fails if any key was never consumed by a getter.
    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [k, v] : values_)
            if (!consumed_.count(k)) unknown.push_back(k);
        if (!unknown.empty()) {
            std::string msg = "unknown config key(s):";
            for (const auto& k : unknown) msg += " " + k;
            throw ConfigError(msg);
        }
    }

private:
    static std::string trim(const std::string& s) {
        auto b = s.begin(), e = s.end();
        while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
        while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
        return std::string(b, e);
    }
    static double parse_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            throw ConfigError("key " + key + ": not a number: " + v);
        }
    }

    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

} // namespace kg
