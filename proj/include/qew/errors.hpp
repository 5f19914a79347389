#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qew {

// Argument outside the physical domain of an operation (beta >= 1, lambda <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Grid or scenario cannot represent the requested state.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Probability has reached the edge of the momentum (or position) window.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file problems; carries every violation found, not only the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace qew
