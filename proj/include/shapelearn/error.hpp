#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace shapelearn {

enum class ErrorCode {
  invalid_input,
  incomparable_descriptors,
  zero_variance,
  unusable_template,
  empty_library,
  cannot_classify,
  generation_failure,
  not_found,
  parse_error,
  eval_requires_labels,
  io_error,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::incomparable_descriptors: return "incomparable-descriptors";
    case ErrorCode::zero_variance: return "zero-variance";
    case ErrorCode::unusable_template: return "unusable-template";
    case ErrorCode::empty_library: return "empty-library";
    case ErrorCode::cannot_classify: return "cannot-classify";
    case ErrorCode::generation_failure: return "generation-failure";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::eval_requires_labels: return "eval-requires-labels";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
/// Errors raised while processing a learner observation also carry the
/// observation id.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  Error(ErrorCode code, const std::string& what, std::int64_t observation_id)
      : std::runtime_error(std::string(to_string(code)) + ": observation " +
                           std::to_string(observation_id) + ": " + what),
        code_(code),
        detail_(what),
        observation_id_(observation_id) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix or observation context.
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::int64_t> observation_id() const noexcept { return observation_id_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::int64_t> observation_id_;
};

}  // namespace shapelearn
