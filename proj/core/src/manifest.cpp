#include "pmivec/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "pmivec/error.hpp"

namespace pmivec::manifest {

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot digest file: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            h ^= static_cast<unsigned char>(buf[k]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return hex;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json make_manifest(const std::string& stage) {
    nlohmann::json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["stage"] = stage;
    m["timestamp"] = utc_timestamp();
    m["inputs"] = nlohmann::json::object();
    m["outputs"] = nlohmann::json::object();
    m["config"] = nlohmann::json::object();
    return m;
}

void add_input(nlohmann::json& m, const std::string& name, const std::filesystem::path& path) {
    m["inputs"][name] = {{"path", path.string()}, {"digest", file_digest(path)}};
}

void add_output(nlohmann::json& m, const std::string& name, const std::filesystem::path& path) {
    m["outputs"][name] = {{"path", path.string()}, {"digest", file_digest(path)}};
}

void write_manifest(const nlohmann::json& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write manifest: " + path.string());
    out << m.dump(2) << "\n";
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace pmivec::manifest
