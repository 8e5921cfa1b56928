#pragma once

#include <string>

namespace nlrd {

// Hex digest of a byte string (FIPS 180-4).
std::string sha256_hex(const std::string& data);

// Digest of a file's contents; throws std::runtime_error if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace nlrd
