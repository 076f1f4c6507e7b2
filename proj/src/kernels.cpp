#include "fluscan/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace fluscan::kernels {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)

double sum_scalar(const double* x, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i];
    s1 += x[i + 1];
    s2 += x[i + 2];
    s3 += x[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sumsq_centered_scalar(const double* x, double mx, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = x[i] - mx, d1 = x[i + 1] - mx;
    const double d2 = x[i + 2] - mx, d3 = x[i + 3] - mx;
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) {
    const double d = x[i] - mx;
    s += d * d;
  }
  return s;
}

double dot_centered_scalar(const double* x, double mx, const double* y,
                           double my, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += (x[i] - mx) * (y[i] - my);
    s1 += (x[i + 1] - mx) * (y[i + 1] - my);
    s2 += (x[i + 2] - mx) * (y[i + 2] - my);
    s3 += (x[i + 3] - mx) * (y[i + 3] - my);
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += (x[i] - mx) * (y[i] - my);
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void gauss_loglik_scalar(const double* y, std::size_t n, double mu,
                         double sigma, double* out) {
  const double inv = 1.0 / sigma;
  const double c = -std::log(sigma) - kHalfLog2Pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (y[i] - mu) * inv;
    out[i] = c - 0.5 * (z * z);
  }
}

std::atomic<const Kernels*> g_active{nullptr};

const Kernels* pick_default() {
  if (const char* env = std::getenv("FLUSCAN_KERNELS")) {
    if (std::string_view(env) == "scalar") return &scalar_kernels;
#if defined(__x86_64__) || defined(_M_X64)
    if (std::string_view(env) == "avx2" && __builtin_cpu_supports("avx2"))
      return &avx2_kernels;
#endif
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return &avx2_kernels;
#endif
  return &scalar_kernels;
}

}  // namespace

const Kernels scalar_kernels = {
    "scalar",          sum_scalar,  dot_scalar, sumsq_centered_scalar,
    dot_centered_scalar, axpy_scalar, gauss_loglik_scalar,
};

const Kernels& active() {
  const Kernels* k = g_active.load(std::memory_order_acquire);
  if (!k) {
    k = pick_default();
    g_active.store(k, std::memory_order_release);
  }
  return *k;
}

bool select(std::string_view name) {
  if (name == "scalar") {
    g_active.store(&scalar_kernels, std::memory_order_release);
    return true;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2" && __builtin_cpu_supports("avx2")) {
    g_active.store(&avx2_kernels, std::memory_order_release);
    return true;
  }
#endif
  return false;
}

std::vector<std::string> available() {
  std::vector<std::string> v = {"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) v.push_back("avx2");
#endif
  return v;
}

}  // namespace fluscan::kernels
