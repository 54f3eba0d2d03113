#ifndef NHCZ_COMMON_HPP
#define NHCZ_COMMON_HPP

#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace nhcz {

/// A point of the plane, identified with a complex number.
using Point = std::complex<double>;

/// Kernel and operator values. Real kernels carry a zero imaginary part.
using KernelValue = std::complex<double>;

using RealField = Eigen::VectorXd;
using ComplexField = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Euclidean distance; the single distance routine used by every module.
inline double distance(Point a, Point b) { return std::abs(a - b); }

/// Thrown on contract violations (bad input, degenerate instances).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs body(i) for i in [0, n). Each index is written by exactly one worker,
/// so results stored per index do not depend on the number of jobs.
inline void parallel_for(Index n, int jobs, const std::function<void(Index)>& body) {
  if (jobs <= 1 || n < 2) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = static_cast<int>(std::min<Index>(jobs, n));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index i = w; i < n; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Generator owned by one trial: depends only on (master seed, stream, index).
inline Rng trial_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return Rng(mix_seed(mix_seed(master ^ mix_seed(stream)) + index));
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline Index uniform_index(Rng& rng, Index n) {
  return static_cast<Index>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace nhcz

#endif  // NHCZ_COMMON_HPP
