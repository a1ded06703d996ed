#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace isoscope {

// Reproducibility sidecar emitted by the CLI: identical inputs and
// arguments produce an identical manifest except for the timestamp.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> arguments;
    std::map<std::string, std::string> input_hashes; // path -> 16 hex digits
    std::vector<std::uint64_t> seed_list;
    std::string version;
    std::string timestamp; // ISO-8601 UTC, excluded from any hashing

    std::string to_json() const;
};

// FNV-1a over the byte content.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

// ISO-8601 UTC wall-clock time.
std::string utc_timestamp();

RunManifest make_manifest(std::string command, std::map<std::string, std::string> arguments,
                          const std::vector<std::filesystem::path>& inputs,
                          std::vector<std::uint64_t> seed_list);

void write_manifest(const RunManifest& m, const std::filesystem::path& out_dir);

} // namespace isoscope
