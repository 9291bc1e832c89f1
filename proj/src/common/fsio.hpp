#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace ca::fsio {

namespace fs = std::filesystem;

std::string read_text(const std::string& path);

// Creates parent directories; writes via a temp file + rename so readers
// never observe partial content.
void write_text(const std::string& path, const std::string& content);
void write_bytes(const std::string& path, const std::string& bytes);

void append_line(const std::string& path, const std::string& line);

// Lines of a text file, without trailing newlines. Missing file -> empty.
std::vector<std::string> read_lines(const std::string& path);

// Sorted regular-file paths directly under `dir`.
std::vector<std::string> list_files(const std::string& dir);

}  // namespace ca::fsio
