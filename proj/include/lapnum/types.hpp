#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace lapnum {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

/// Raised for precondition violations and numerical refusals.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distinct refusal: the data cannot support the requested classification or fit.
class Refusal : public Error {
 public:
  using Error::Error;
};

enum class Verdict { Pass, Fail, Informational, Withheld };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Informational: return "INFO";
    case Verdict::Withheld: return "WITHHELD";
  }
  return "?";
}

inline Verdict pass_if(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

}  // namespace lapnum
