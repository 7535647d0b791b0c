#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace weylmax {

using cplx = std::complex<double>;

/// The n-th roots of unity e(m/n) = exp(2 pi i m / n), m in [0, n), each
/// computed from the exactly reduced argument m/n.
class RootTable {
 public:
  explicit RootTable(std::uint64_t n);

  std::uint64_t order() const noexcept { return n_; }
  const cplx& operator[](std::uint64_t m) const noexcept { return roots_[m]; }

 private:
  std::uint64_t n_;
  std::vector<cplx> roots_;
};

enum class DftEngine { automatic, naive, bluestein };

/// Prime lengths up to this use the O(q^2) exact-index line transform.
inline constexpr std::uint64_t kNaiveDftMax = 128;

/// In place, along every axis of a row-major q^d grid:
///   out[k] = sum_r in[r] e(sign * k.r / q),  sign = +1 or -1.
/// No normalization.
void dft_axes(std::vector<cplx>& grid, std::uint64_t q, std::size_t d, int sign,
              DftEngine engine = DftEngine::automatic);

/// One line of length q; exposed for tests.
std::vector<cplx> dft_line(std::span<const cplx> in, int sign,
                           DftEngine engine = DftEngine::automatic);

/// q^d with an overflow guard against `limit`; returns 0 if it exceeds it.
std::uint64_t grid_size(std::uint64_t q, std::size_t d, std::uint64_t limit);

/// Row-major flat index <-> coordinates in [0, q)^d.
std::uint64_t flat_index(std::span<const std::int64_t> r, std::uint64_t q);
void unflatten(std::uint64_t flat, std::uint64_t q, std::span<std::int64_t> out);

}  // namespace weylmax
