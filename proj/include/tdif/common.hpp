#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tdif {

// Raised for malformed or inconsistent input data (files, qrels, configs).
// The CLI maps it to exit code 2; usage errors exit with 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// FNV-1a, used to derive per-topic sub-seeds deterministically.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace tdif
