#pragma once

#include <cmath>
#include <cstddef>

namespace sagbell::detail {

// Cholesky factorization of a symmetric positive definite matrix stored
// row-major in a. Returns false when a pivot drops below tiny.
inline bool cholesky(double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (!(sum > 1e-300)) return false;
        a[i * n + i] = std::sqrt(sum);
      } else {
        a[i * n + j] = sum / a[j * n + j];
      }
    }
  }
  return true;
}

// Solves L L^T x = b in place using the factor produced by cholesky().
inline void cholesky_solve(const double* l, double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * b[k];
    b[i] = sum / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= l[k * n + ii] * b[k];
    b[ii] = sum / l[ii * n + ii];
  }
}

// Inverse of a symmetric positive definite matrix via its Cholesky factor.
// a holds the matrix on entry and the inverse on success.
inline bool spd_inverse(double* a, std::size_t n) {
  constexpr std::size_t kMax = 8;
  if (n > kMax) return false;
  double l[kMax * kMax];
  for (std::size_t i = 0; i < n * n; ++i) l[i] = a[i];
  if (!cholesky(l, n)) return false;
  double col[kMax];
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = (i == j) ? 1.0 : 0.0;
    cholesky_solve(l, col, n);
    for (std::size_t i = 0; i < n; ++i) a[i * n + j] = col[i];
  }
  return true;
}

}  // namespace sagbell::detail
