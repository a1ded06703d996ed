#include "isoscope/manifest.hpp"
#include "isoscope/reports.hpp"
#include "isoscope/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>

namespace isoscope {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["arguments"] = nlohmann::json::object();
    for (const auto& [k, v] : arguments) j["arguments"][k] = v;
    j["input_hashes"] = nlohmann::json::object();
    for (const auto& [k, v] : input_hashes) j["input_hashes"][k] = v;
    j["seed_list"] = seed_list;
    return j.dump(2) + "\n";
}

RunManifest make_manifest(std::string command, std::map<std::string, std::string> arguments,
                          const std::vector<std::filesystem::path>& inputs,
                          std::vector<std::uint64_t> seed_list) {
    RunManifest m;
    m.command = std::move(command);
    m.arguments = std::move(arguments);
    m.seed_list = std::move(seed_list);
    m.version = kVersion;
    for (const auto& path : inputs)
        m.input_hashes[path.string()] = hash_hex(fnv1a64(read_file(path)));

    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    m.timestamp = buf;
    return m;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& out_dir) {
    write_file_atomic(out_dir / "manifest.json", m.to_json());
}

} // namespace isoscope
