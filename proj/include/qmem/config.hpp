#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qmem/errors.hpp"

namespace qmem {

// Flat dotted-key configuration: one "section.key = value" per line,
// '#' starts a comment. Command-line --set flags reuse the same keys.
class FlatConfig {
  public:
    FlatConfig() = default;

    static FlatConfig parse_text(const std::string& text);

    /// Reads either the flat text format or a manifest.json produced by a
    /// previous run (its "config" object is taken verbatim).
    static FlatConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);

    /// Applies one "key=value" assignment; throws ConfigError on bad syntax.
    void set_from_assignment(const std::string& assignment);

    /// Overlays every entry of `other` on top of this config.
    void merge(const FlatConfig& other);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Sorted "key=value" lines joined with '\n'; the canonical form hashed
    /// into every manifest.
    std::string canonical_text() const;

    /// FNV-1a 64-bit over canonical_text().
    std::uint64_t hash() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

std::string format_double(double value);  // 17 significant digits, C locale
std::string hash_hex(std::uint64_t h);

}  // namespace qmem
