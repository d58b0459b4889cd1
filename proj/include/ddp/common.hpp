#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddp {

// Quantities indexed by deadline class (length N, slot c holds class c+1)
// or by period (length N, slot k holds period k).
using Vec = std::vector<double>;

// Error with a stable machine-readable code, e.g. "supply.enumerate.unsupported".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Validator output: empty violation list means pass.
struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void fail(std::string message) { violations.push_back(std::move(message)); }
  void merge(const ValidationResult& other, const std::string& prefix) {
    for (const auto& v : other.violations) violations.push_back(prefix + v);
  }
};

inline bool near(double a, double b, double tol) {
  double d = a - b;
  return (d < 0 ? -d : d) <= tol;
}

}  // namespace ddp
