#pragma once

#include <cstddef>

namespace rgm::kernels {

// Flat-buffer kernels behind every inner loop (layer matmuls, pairwise
// distances, optimizer updates). Scalar reference implementations always
// exist; an AVX2 variant is selected at runtime when the CPU supports it.
// All matrices are row-major. GEMM variants accumulate into C.
struct Ops {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a_i - b_i)^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*tanh_vec)(const double* x, double* out, std::size_t n);
  void (*exp_vec)(const double* x, double* out, std::size_t n);
  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
  // C[m x n] += A[m x k] * B[n x k]^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
  // C[k x n] += A[m x k]^T * B[m x n]
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
  // One Adam update with bias correction folded into inv_bc1/inv_bc2
  // (1/(1-beta1^t), 1/(1-beta2^t)).
  void (*adam_update)(double* p, const double* g, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double inv_bc1, double inv_bc2);
};

enum class Backend { Auto, Scalar, Avx2 };

extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif

bool avx2_available();

// Active dispatch table. Default resolves Auto once per process; the
// RGM_KERNELS env var (scalar|avx2) and set_backend override it.
const Ops& active();
void set_backend(Backend b);
Backend active_backend();

}  // namespace rgm::kernels
