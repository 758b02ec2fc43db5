#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dadmm {

// Base class for all library errors. `code` is a stable machine-readable
// identifier; the CLI surfaces it in the error JSON printed on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& m) : Error("invalid_argument", m) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error("dimension_mismatch", m) {}
};
struct NotStronglyConnected : Error {
  explicit NotStronglyConnected(const std::string& m) : Error("not_strongly_connected", m) {}
};
struct NoConvergence : Error {
  explicit NoConvergence(const std::string& m) : Error("no_convergence", m) {}
};
struct SingularSystem : Error {
  explicit SingularSystem(const std::string& m) : Error("singular_system", m) {}
};
struct SingularBlock : Error {
  explicit SingularBlock(const std::string& m) : Error("singular_block", m) {}
};
struct StrongConvexityRequired : Error {
  explicit StrongConvexityRequired(const std::string& m) : Error("strong_convexity_required", m) {}
};
struct AssumptionViolated : Error {
  explicit AssumptionViolated(const std::string& m) : Error("assumption_violated", m) {}
};
struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& m) : Error("invariant_violation", m) {}
};
struct InsufficientData : Error {
  explicit InsufficientData(const std::string& m) : Error("insufficient_data", m) {}
};
struct AllDiverged : Error {
  explicit AllDiverged(const std::string& m) : Error("all_diverged", m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config_error", m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io_error", m) {}
};

}  // namespace dadmm
