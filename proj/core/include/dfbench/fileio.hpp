#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfbench {

// Whole-file reads; nullopt when the file cannot be opened or read.
std::optional<std::vector<std::uint8_t>> ReadFileBytes(const std::string& path);
std::optional<std::string> ReadFileText(const std::string& path);

// Writes via a temporary sibling and rename. Throws InvalidArgument.
void WriteFileAtomic(const std::string& path, std::string_view content);

}  // namespace dfbench
