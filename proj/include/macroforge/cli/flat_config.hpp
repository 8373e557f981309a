#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace macroforge::cli {

/// Flat, sectioned key-value configuration:
///   [section]
///   key = value   # comment
/// Keys are addressed as "section.key". Values are plain strings; lists are
/// comma-separated. Later assignments win. The entry map is sorted, so
/// dump() is a canonical form suitable for manifests and diffs.
class FlatConfig {
public:
    FlatConfig() = default;

    static FlatConfig parse(const std::string& text);
    static FlatConfig load(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string get_required(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::int64_t get_i64(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const; // empty if absent
    std::vector<std::uint64_t> get_u64_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    std::string dump() const;

private:
    std::map<std::string, std::string> entries_;
};

} // namespace macroforge::cli
