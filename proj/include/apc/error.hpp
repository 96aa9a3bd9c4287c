#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace apc {

// Every failure raised by the library carries a stable, machine-readable code
// (e.g. "schema_error") next to the human message. The CLI prints both.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define APC_DEFINE_ERROR(Name, code_string)                                   \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& message) : Error(code_string, message) {} \
  }

APC_DEFINE_ERROR(IoError, "io_error");
APC_DEFINE_ERROR(ParseError, "parse_error");
APC_DEFINE_ERROR(SchemaError, "schema_error");
APC_DEFINE_ERROR(DuplicateIdError, "duplicate_id");
APC_DEFINE_ERROR(UnknownTrackError, "unknown_track");
APC_DEFINE_ERROR(ConfigError, "config_error");
APC_DEFINE_ERROR(InfeasibleSplitError, "infeasible_split");
APC_DEFINE_ERROR(UndefinedMetricError, "undefined_metric");
APC_DEFINE_ERROR(EmptySeedError, "empty_seed");
APC_DEFINE_ERROR(NumericalFailure, "numerical_failure");
APC_DEFINE_ERROR(TrainingFailure, "training_failure");
APC_DEFINE_ERROR(CatalogTooSmallError, "catalog_too_small");
APC_DEFINE_ERROR(UsageError, "usage_error");

#undef APC_DEFINE_ERROR

}  // namespace apc
