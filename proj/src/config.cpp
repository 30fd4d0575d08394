#include "qmem/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qmem {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

FlatConfig FlatConfig::parse_text(const std::string& text) {
    FlatConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              " is not of the form key=value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
        cfg.kv_[key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        // a manifest.json from a previous run
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("cannot parse JSON config: ") + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object())
            throw ConfigError("JSON config must contain a \"config\" object");
        FlatConfig cfg;
        for (const auto& [key, value] : j["config"].items()) {
            if (value.is_string())
                cfg.kv_[key] = value.get<std::string>();
            else
                cfg.kv_[key] = value.dump();
        }
        return cfg;
    }
    return parse_text(text);
}

void FlatConfig::set(const std::string& key, const std::string& value) { kv_[key] = value; }

void FlatConfig::set_double(const std::string& key, double value) {
    kv_[key] = format_double(value);
}

void FlatConfig::set_from_assignment(const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
        throw ConfigError("--set expects key=value, got: " + assignment);
    kv_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

void FlatConfig::merge(const FlatConfig& other) {
    for (const auto& [k, v] : other.kv_) kv_[k] = v;
}

bool FlatConfig::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string FlatConfig::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key " + key + " is not a number: " + v);
    return d;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t FlatConfig::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key " + key + " is not an integer: " + v);
    return i;
}

std::int64_t FlatConfig::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t FlatConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    char* end = nullptr;
    const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key " + key + " is not an unsigned integer: " + v);
    return u;
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError("config key " + key + " is not a boolean: " + v);
}

std::string FlatConfig::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t FlatConfig::hash() const {
    const std::string text = canonical_text();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qmem
