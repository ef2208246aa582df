#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace pmivec::manifest {

inline constexpr const char* kToolName = "pmivec";
inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit over the file bytes, rendered "fnv1a64:<16 hex digits>".
/// A reproducibility aid for chaining run manifests, not a security digest.
std::string file_digest(const std::filesystem::path& path);

std::string utc_timestamp();

/// Skeleton manifest: tool identity, stage name, timestamp.
nlohmann::json make_manifest(const std::string& stage);

void add_input(nlohmann::json& m, const std::string& name, const std::filesystem::path& path);
void add_output(nlohmann::json& m, const std::string& name, const std::filesystem::path& path);

void write_manifest(const nlohmann::json& m, const std::filesystem::path& path);

} // namespace pmivec::manifest
