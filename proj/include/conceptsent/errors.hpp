// Error taxonomy shared by the library and the CLI exit-code mapping.
#pragma once

#include <stdexcept>
#include <string>

namespace conceptsent {

// Missing or unreadable file / directory.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input content or out-of-range configuration value.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition or internal invariant was violated.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int missing_resource = 2;
inline constexpr int schema_violation = 3;
inline constexpr int invariant_breach = 4;
}  // namespace exit_code

}  // namespace conceptsent
