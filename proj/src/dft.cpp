#include "weylmax/dft.hpp"

#include <bit>
#include <memory>
#include <cmath>
#include <numbers>

#include "weylmax/errors.hpp"

namespace weylmax {

RootTable::RootTable(std::uint64_t n) : n_(n), roots_(n) {
  require(n >= 1, ErrorKind::input, "root table order must be positive");
  for (std::uint64_t m = 0; m < n; ++m) {
    const long double angle = 2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>(m) / static_cast<long double>(n);
    roots_[m] = cplx(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
  }
}

std::uint64_t grid_size(std::uint64_t q, std::size_t d, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > limit / q) return 0;
    total *= q;
  }
  return total <= limit ? total : 0;
}

std::uint64_t flat_index(std::span<const std::int64_t> r, std::uint64_t q) {
  std::uint64_t idx = 0;
  for (std::int64_t v : r) idx = idx * q + static_cast<std::uint64_t>(v);
  return idx;
}

void unflatten(std::uint64_t flat, std::uint64_t q, std::span<std::int64_t> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<std::int64_t>(flat % q);
    flat /= q;
  }
}

namespace {

// Iterative radix-2 FFT, out[k] = sum_j in[j] e(sign jk / L).
class Radix2 {
 public:
  explicit Radix2(std::size_t n, int sign) : n_(n), twiddle_(n / 2) {
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      twiddle_[j] = cplx(std::cos(angle), std::sin(angle));
    }
  }

  void operator()(std::vector<cplx>& a) const {
    const std::size_t n = n_;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t step = n / len;
      for (std::size_t i = 0; i < n; i += len)
        for (std::size_t j = 0; j < len / 2; ++j) {
          const cplx u = a[i + j];
          const cplx v = a[i + j + len / 2] * twiddle_[j * step];
          a[i + j] = u + v;
          a[i + j + len / 2] = u - v;
        }
    }
  }

 private:
  std::size_t n_;
  std::vector<cplx> twiddle_;
};

// Chirp-z rewrite of a length-q DFT as a power-of-two cyclic convolution,
// using k r = (k^2 + r^2 - (k - r)^2) / 2. Chirp indices are reduced mod 2q
// exactly before the table lookup.
class BluesteinPlan {
 public:
  BluesteinPlan(std::uint64_t q, int sign)
      : q_(q),
        len_(std::bit_ceil(2 * q - 1)),
        forward_(len_, -1),
        backward_(len_, +1),
        chirp_(q),
        kernel_(len_, cplx(0.0, 0.0)) {
    const RootTable roots(2 * q);
    for (std::uint64_t j = 0; j < q; ++j) {
      const std::uint64_t sq = static_cast<std::uint64_t>((static_cast<unsigned __int128>(j) * j) % (2 * q));
      chirp_[j] = sign > 0 ? roots[sq] : std::conj(roots[sq]);
    }
    kernel_[0] = std::conj(chirp_[0]);
    for (std::uint64_t j = 1; j < q; ++j) {
      kernel_[j] = std::conj(chirp_[j]);
      kernel_[len_ - j] = std::conj(chirp_[j]);
    }
    forward_(kernel_);
  }

  void operator()(std::span<const cplx> in, std::span<cplx> out, std::vector<cplx>& work) const {
    work.assign(len_, cplx(0.0, 0.0));
    for (std::uint64_t r = 0; r < q_; ++r) work[r] = in[r] * chirp_[r];
    forward_(work);
    for (std::size_t j = 0; j < len_; ++j) work[j] *= kernel_[j];
    backward_(work);
    const double scale = 1.0 / static_cast<double>(len_);
    for (std::uint64_t k = 0; k < q_; ++k) out[k] = work[k] * chirp_[k] * scale;
  }

 private:
  std::uint64_t q_;
  std::size_t len_;
  Radix2 forward_;
  Radix2 backward_;
  std::vector<cplx> chirp_;
  std::vector<cplx> kernel_;
};

void naive_line(std::span<const cplx> in, std::span<cplx> out, const RootTable& roots, int sign) {
  const std::uint64_t q = roots.order();
  for (std::uint64_t k = 0; k < q; ++k) {
    cplx acc(0.0, 0.0);
    std::uint64_t idx = 0;  // k r mod q, advanced by k each step
    for (std::uint64_t r = 0; r < q; ++r) {
      const cplx& w = roots[sign > 0 ? idx : (idx == 0 ? 0 : q - idx)];
      acc += in[r] * w;
      idx += k;
      if (idx >= q) idx -= q;
    }
    out[k] = acc;
  }
}

bool use_naive(std::uint64_t q, DftEngine engine) {
  if (engine == DftEngine::naive) return true;
  if (engine == DftEngine::bluestein) return false;
  return q <= kNaiveDftMax;
}

}  // namespace

std::vector<cplx> dft_line(std::span<const cplx> in, int sign, DftEngine engine) {
  const std::uint64_t q = in.size();
  require(q >= 1, ErrorKind::input, "empty transform");
  std::vector<cplx> out(q);
  if (use_naive(q, engine)) {
    naive_line(in, out, RootTable(q), sign);
  } else {
    std::vector<cplx> work;
    BluesteinPlan(q, sign)(in, out, work);
  }
  return out;
}

void dft_axes(std::vector<cplx>& grid, std::uint64_t q, std::size_t d, int sign, DftEngine engine) {
  require(sign == 1 || sign == -1, ErrorKind::input, "transform sign must be +1 or -1");
  require(grid.size() == grid_size(q, d, grid.size()), ErrorKind::input,
          "grid size does not match q^d");
  const bool naive = use_naive(q, engine);
  const RootTable roots(naive ? q : 1);
  const BluesteinPlan* plan = nullptr;
  std::unique_ptr<BluesteinPlan> owned;
  if (!naive) {
    owned = std::make_unique<BluesteinPlan>(q, sign);
    plan = owned.get();
  }
  std::vector<cplx> line(q), result(q), work;
  const std::uint64_t total = grid.size();
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::uint64_t stride = 1;
    for (std::size_t i = axis + 1; i < d; ++i) stride *= q;
    const std::uint64_t block = stride * q;
    for (std::uint64_t outer = 0; outer < total; outer += block)
      for (std::uint64_t inner = 0; inner < stride; ++inner) {
        const std::uint64_t base = outer + inner;
        for (std::uint64_t r = 0; r < q; ++r) line[r] = grid[base + r * stride];
        if (naive)
          naive_line(line, result, roots, sign);
        else
          (*plan)(line, result, work);
        for (std::uint64_t r = 0; r < q; ++r) grid[base + r * stride] = result[r];
      }
  }
}

}  // namespace weylmax
