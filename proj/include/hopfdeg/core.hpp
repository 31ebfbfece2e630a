#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hopfdeg {

// Largest ambient dimension handled by the small fixed-capacity vectors
// (S^{4n-1} with n = 2 lives in R^8).
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Unsupported,
  Inconclusive,
  SupportViolation,
  NotRegular,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

inline constexpr double kPi = 3.14159265358979323846;

// |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
double sphere_area(int m);
// |B^m| = pi^{m/2} / Gamma(m/2 + 1)
double ball_volume(int m);
long long binomial(int n, int k);

}  // namespace hopfdeg
