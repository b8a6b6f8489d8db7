#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace morphic {

/// Malformed or inconsistent input: unknown symbols, alphabet mismatches,
/// unsupported morphisms.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition of the decision procedure does not hold.
/// Every failed check is listed separately in failures().
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(std::vector<std::string> failures)
      : std::runtime_error(join(failures)), failures_(std::move(failures)) {}

  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  static std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> failures_;
};

/// A configured budget (materialization size, overflow cap) was exceeded.
/// This never says anything about the words themselves.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace morphic
