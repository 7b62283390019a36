#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace maser {

// FNV-1a 64-bit. Stable across platforms and runs; used for request keys,
// exact-match script entries and manifest content hashes.
std::uint64_t fnv1a64(std::string_view data);

// fnv1a64 rendered as a fixed-width 16-char lowercase hex string.
std::string fnv1a64_hex(std::string_view data);

// Hash of a file's bytes, hex-encoded. Throws Error{IoError} when unreadable.
std::string file_hash_hex(const std::string& path);

}  // namespace maser
