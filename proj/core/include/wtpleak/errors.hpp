#pragma once

#include <stdexcept>
#include <string>

namespace wtpleak {

// Error taxonomy mapped to CLI exit codes: validation (2), backend (3), data (4).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unknown cell/profile/pack key. A validation problem with a name attached.
struct LookupError : ValidationError {
  using ValidationError::ValidationError;
};

// Transport, HTTP, or completion failures, including exhausted retries.
struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or corrupt on-disk artifacts: manifests, transcripts, sidecars, records.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Completion text that never yielded a valid structured record. Carries the raw text.
class InferenceParseError : public DataError {
 public:
  InferenceParseError(const std::string& what, std::string raw)
      : DataError(what), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace wtpleak
