#ifndef NETRECON_ERRORS_HPP_
#define NETRECON_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace netrecon {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Out/in sums disagree or entries are negative.
struct InvalidMarginals : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  NonConvergence(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

struct ZeroTotal : Error {
  using Error::Error;
};

struct TargetUnreachable : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct StructureInfeasible : Error {
  using Error::Error;
};

struct ScalingDiverged : Error {
  using Error::Error;
};

struct NoFeasibleStart : Error {
  using Error::Error;
};

struct DegenerateLabels : Error {
  using Error::Error;
};

struct NoPositives : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct Cancelled : Error {
  using Error::Error;
};

}  // namespace netrecon

#endif  // NETRECON_ERRORS_HPP_
