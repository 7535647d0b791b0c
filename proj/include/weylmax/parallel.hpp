#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace weylmax {

/// Neumaier-compensated scalar sum.
struct CompensatedSum {
  double sum = 0, comp = 0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct CompensatedComplexSum {
  CompensatedSum re, im;

  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

/// SplitMix64 finalizer; derives independent per-block seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Runs fn(chunk) for chunk in [0, chunks) on up to `threads` workers.
/// Chunk boundaries never depend on the worker count, so callers that
/// reduce per-chunk results in chunk order are deterministic.
template <class Fn>
void parallel_chunks(std::uint64_t chunks, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t c = w; c < chunks; c += workers) fn(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace weylmax
