#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace canonica {

using cdouble = std::complex<double>;

// Thrown on malformed or inconsistent input data (wire formats, grid
// mismatches). The CLI maps this family to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on parameter-admissibility violations (determinant, density bounds,
// degenerate windows). The CLI maps this family to exit code 3.
class parameter_error : public std::runtime_error {
 public:
  explicit parameter_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-fatal diagnostics (edge decay, near-rational ratios) go through a
// process-wide handler; the default writes one line to stderr.
using warning_handler = std::function<void(const std::string&)>;
void set_warning_handler(warning_handler h);
void warn(const std::string& msg);

}  // namespace canonica
