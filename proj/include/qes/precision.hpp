#pragma once

// Extended-precision scalar types for the numeric kernels.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <cstdlib>
#include <string>

#include "qes/errors.hpp"

namespace qes {

using QuadReal = boost::multiprecision::cpp_bin_float_quad;  // 113-bit significand
using QuadComplex = boost::multiprecision::cpp_complex_quad;

inline QuadComplex to_quad(std::complex<double> z) { return QuadComplex(z.real(), z.imag()); }

inline std::complex<double> to_cplx(const QuadComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline std::complex<long double> to_lcplx(const QuadComplex& z) {
  return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())};
}

/// Significand bits requested through QES_PRECISION_BITS: 53 (double),
/// 64 (long double) or 113 (quad). Unset means `fallback`.
inline int precision_bits_from_env(int fallback = 64) {
  const char* v = std::getenv("QES_PRECISION_BITS");
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const long bits = std::strtol(v, &end, 10);
  if (end == v || *end != '\0') throw UsageError(std::string("QES_PRECISION_BITS is not an integer: ") + v);
  if (bits != 53 && bits != 64 && bits != 113) {
    throw UsageError("QES_PRECISION_BITS must be 53, 64 or 113, got " + std::to_string(bits));
  }
  return static_cast<int>(bits);
}

}  // namespace qes
