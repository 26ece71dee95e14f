#pragma once

#include <string>

namespace rydcrit::io {

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace rydcrit::io
