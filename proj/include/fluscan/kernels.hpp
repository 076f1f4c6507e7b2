#ifndef FLUSCAN_KERNELS_HPP
#define FLUSCAN_KERNELS_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fluscan::kernels {

// Data-parallel inner loops used by the correlation, regression and HMM
// code. Every variant computes bit-identical results: reductions use four
// stride-4 partial accumulators combined as (s0+s1)+(s2+s3) with a
// sequential tail, and elementwise kernels apply the same operation order
// per element. The kernel translation units are built with
// -ffp-contract=off so scalar and vector code emit the same arithmetic.
struct Kernels {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum((x-mx)^2)
  double (*sumsq_centered)(const double* x, double mx, std::size_t n);
  // sum((x-mx)*(y-my))
  double (*dot_centered)(const double* x, double mx, const double* y,
                         double my, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[i] = -log(sigma) - 0.5*log(2*pi) - 0.5*((y[i]-mu)/sigma)^2
  void (*gauss_loglik)(const double* y, std::size_t n, double mu, double sigma,
                       double* out);
};

// Active table, fixed at first use: the widest variant the CPU supports,
// unless overridden via select() or the FLUSCAN_KERNELS env var.
const Kernels& active();

// Force a specific variant ("scalar", "avx2"); false if unavailable.
bool select(std::string_view name);

std::vector<std::string> available();

extern const Kernels scalar_kernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const Kernels avx2_kernels;
#endif

}  // namespace fluscan::kernels

#endif
