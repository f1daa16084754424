#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fermispec {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double value);

/// Writes the whole file in one shot: temp file in the same directory,
/// then rename. Throws std::runtime_error on I/O failure.
void write_text_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace fermispec
