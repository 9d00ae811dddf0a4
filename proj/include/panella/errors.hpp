#pragma once

#include <stdexcept>
#include <string>

namespace panella {

/// Result of a factorization.  failed_index is the global (window-relative)
/// index of the first pivot that could not be used, or -1.
struct [[nodiscard]] FactorStatus {
  int failed_index = -1;

  bool ok() const noexcept { return failed_index < 0; }
  static FactorStatus success() noexcept { return {}; }
  static FactorStatus failure(int index) noexcept { return {index}; }
};

/// Thrown by triangular solves when a non-unit triangle has a zero diagonal.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int index)
      : std::runtime_error(what + ": zero diagonal element at index " + std::to_string(index)), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Thrown by the application drivers when a factorization fails inside a
/// recursion; stage() is the recursion stage (or block) that failed.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, int stage, int pivot)
      : std::runtime_error(what + ": factorization failed at stage " + std::to_string(stage) + ", pivot " +
                           std::to_string(pivot)),
        stage_(stage),
        pivot_(pivot) {}
  int stage() const noexcept { return stage_; }
  int pivot() const noexcept { return pivot_; }

 private:
  int stage_;
  int pivot_;
};

}  // namespace panella
