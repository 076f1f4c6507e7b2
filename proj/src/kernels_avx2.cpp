// AVX2 variants of the arithmetic kernels. One 256-bit accumulator holds
// the same four stride-4 partial sums as the scalar reference, and the
// horizontal combine uses the same (s0+s1)+(s2+s3) order, so results are
// bit-identical to the scalar kernels.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "fluscan/kernels.hpp"

namespace fluscan::kernels {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

inline double hcombine(__m256d acc) {
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hcombine(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, p);
  }
  double s = hcombine(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sumsq_centered_avx2(const double* x, double mx, std::size_t n) {
  const __m256d vm = _mm256_set1_pd(mx);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vm);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hcombine(acc);
  for (; i < n; ++i) {
    const double d = x[i] - mx;
    s += d * d;
  }
  return s;
}

double dot_centered_avx2(const double* x, double mx, const double* y,
                         double my, std::size_t n) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(dx, dy));
  }
  double s = hcombine(acc);
  for (; i < n; ++i) s += (x[i] - mx) * (y[i] - my);
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void gauss_loglik_avx2(const double* y, std::size_t n, double mu, double sigma,
                       double* out) {
  const double inv = 1.0 / sigma;
  const double c = -std::log(sigma) - kHalfLog2Pi;
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vinv = _mm256_set1_pd(inv);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vhalf = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z =
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(y + i), vmu), vinv);
    const __m256d q = _mm256_mul_pd(vhalf, _mm256_mul_pd(z, z));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(vc, q));
  }
  for (; i < n; ++i) {
    const double z = (y[i] - mu) * inv;
    out[i] = c - 0.5 * (z * z);
  }
}

}  // namespace

const Kernels avx2_kernels = {
    "avx2",            sum_avx2,  dot_avx2, sumsq_centered_avx2,
    dot_centered_avx2, axpy_avx2, gauss_loglik_avx2,
};

}  // namespace fluscan::kernels

#endif  // x86_64
