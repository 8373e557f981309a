#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace macroforge::cli {

/// Reproducibility record written into every output directory before any
/// computation output. The resolved configuration plus the master seed are
/// sufficient to rerun the command; the timestamp is informational only and
/// excluded from byte-identity claims.
struct RunManifest {
    std::string command;
    std::string version;
    std::string timestamp;
    std::uint64_t master_seed = 0;
    std::map<std::string, std::string> config;     // resolved flat entries
    std::map<std::string, std::string> map_hashes; // path -> content hash
};

std::string manifest_to_json(const RunManifest& manifest);

/// FNV-1a 64-bit content hash, hex encoded.
std::string content_hash_file(const std::string& path);

std::string now_iso8601_utc();

} // namespace macroforge::cli
