#ifndef AF_TYPES_HPP
#define AF_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace af {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Entries below this are treated as zero for support computations;
// "interior" requires every entry above it.
inline constexpr double kSupportTol = 1e-15;

enum class ErrorCode {
  invalid_argument = 1,
  domain_error = 2,
  range_error = 3,
  resource_limit = 4,
  precondition = 5,
  data_error = 6,
  unsupported = 7,
  io_error = 8,
  internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace af

#endif
