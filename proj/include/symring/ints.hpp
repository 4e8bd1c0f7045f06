#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace symring {

/* Arbitrary-precision integer. GMP-backed: the cpp_int backend miscompiles
   under Eigen's scalar promotion probing, see notes in the build setup. */
using Int = boost::multiprecision::mpz_int;

/* Row-major so row operations (the dominant access pattern in echelon code)
   touch contiguous memory. */
using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IntVec = Eigen::Matrix<Int, 1, Eigen::Dynamic>;

struct SymringError : std::runtime_error {
  explicit SymringError(const std::string& what) : std::runtime_error(what) {}
};

/* Thrown when an exact computation would need coordinates outside the
   requested basis window; carries the offending word's display form. */
struct SupportEscape : SymringError {
  explicit SupportEscape(const std::string& word)
      : SymringError("support escapes window at word " + word), word_text(word) {}
  std::string word_text;
};

}  // namespace symring
