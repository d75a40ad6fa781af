#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

// Entry point of the nlchaos tool; args excludes the program name.
int run(const std::vector<std::string>& args);

// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Schema preset name (aff, cff, pff) or path to a schema JSON file.
std::filesystem::path resolve_schema(const std::string& name_or_path);

}  // namespace nl::cli
