#pragma once

#include <string>

namespace ca {

// Lowercase hex SHA-256. Used for content-addressed charts, cache row
// hashes, config hashes, and request dedup keys.
std::string sha256_hex(const std::string& bytes);

// First 12 hex chars; enough for run ids and file keys.
std::string short_hash(const std::string& bytes);

}  // namespace ca
