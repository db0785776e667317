#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace cobp {

/// Structured payloads, records and parameters. Objects keep their keys sorted,
/// so `dump()` is already a canonical serialization.
using Value = nlohmann::json;

/// Misconfigured program: unknown query/update/predicate, malformed init
/// document, duplicate keys, and similar authoring mistakes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while executing a transition (a throwing step function or update
/// command, or a violated engine invariant).
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search or enumeration ran past its configured limits.
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace cobp
