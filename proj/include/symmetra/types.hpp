#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace symmetra {

using Index = Eigen::Index;
using Cplx = std::complex<double>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatD = Mat<double>;
using VecD = Vec<double>;
using MatC = Mat<Cplx>;
using VecC = Vec<Cplx>;
using MatI = Mat<int>;
using SpMatD = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<Cplx>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when structure constants computed from two representatives of the
// same orbit disagree (the action is not transitive enough / bad input).
struct RepresentativeMismatch : Error {
  using Error::Error;
};
// Random algebra sample produced an eigenvalue clustering inconsistent with
// an algebra decomposition (retried internally before escaping).
struct DegenerateSample : Error {
  using Error::Error;
};
struct NotAnAlgebra : Error {
  using Error::Error;
};
struct NotInvariant : Error {
  using Error::Error;
};
struct UnverifiedIsomorphism : Error {
  using Error::Error;
};
struct ActionNotAutomorphism : Error {
  using Error::Error;
};
struct NotPSD : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct NoNegativeValue : Error {
  using Error::Error;
};
struct ParseError : Error {
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  long line;
};

// Deterministic bit-stable generator.  mt19937_64 output is pinned by the
// standard; the double mappings below avoid the implementation-defined
// std::uniform_real_distribution so results are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t bits() { return eng_(); }
  // uniform in [0,1)
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  // uniform in [-1,1)
  double sym() { return 2.0 * uniform() - 1.0; }
  // uniform integer in [0,n)
  std::uint64_t below(std::uint64_t n) { return bits() % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace symmetra
