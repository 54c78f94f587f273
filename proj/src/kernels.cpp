// Hot loops of the Brownian scheme, built with -O3 -ffast-math so they
// vectorize (the exp loop maps onto the glibc vector exp).

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace expfun::detail {

__attribute__((target_clones("avx2", "default"))) void exp_neg(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(-x[i]);
}

// out[i] = int over [t[i s], t[(i+1) s]] of e^{-linear interpolant of v}, from e = e^{-v}.
__attribute__((target_clones("avx2", "default"))) void chord_integrals(const double* t, const double* v,
                                                                         const double* e, std::size_t stride,
                                                                         std::size_t pieces, double* out) {
  for (std::size_t i = 0; i < pieces; ++i) {
    const std::size_t a = i * stride;
    const std::size_t b = a + stride;
    const double len = t[b] - t[a];
    const double d = v[b] - v[a];
    const double series = e[a] * (1.0 - d * (0.5 - d * (1.0 / 6.0 - d / 24.0)));
    const double safe = std::abs(d) < 1e-4 ? 1.0 : d;
    const double exact = (e[a] - e[b]) / safe;
    out[i] = len * (std::abs(d) < 1e-4 ? series : exact);
  }
}

}  // namespace expfun::detail

namespace expfun::detail {

// Philox4x32-10 blocks for counters (first + i, c2, c3), i < n, written to out[4 i .. 4 i + 3].
__attribute__((target_clones("avx2", "default"))) void philox_blocks(std::uint32_t k0, std::uint32_t k1,
                                                                       std::uint32_t c2, std::uint32_t c3,
                                                                       std::uint64_t first, std::size_t n,
                                                                       std::uint32_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t ctr = first + i;
    std::uint32_t x0 = static_cast<std::uint32_t>(ctr), x1 = static_cast<std::uint32_t>(ctr >> 32);
    std::uint32_t x2 = c2, x3 = c3;
    std::uint32_t a = k0, b = k1;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * x0;
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * x2;
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      x0 = hi1 ^ x1 ^ a;
      x2 = hi0 ^ x3 ^ b;
      x1 = static_cast<std::uint32_t>(p1);
      x3 = static_cast<std::uint32_t>(p0);
      a += 0x9E3779B9u;
      b += 0xBB67AE85u;
    }
    out[4 * i] = x0;
    out[4 * i + 1] = x1;
    out[4 * i + 2] = x2;
    out[4 * i + 3] = x3;
  }
}

// sum of x[0..n).
__attribute__((target_clones("avx2", "default"))) double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

}  // namespace expfun::detail

namespace expfun::detail {

// Box-Muller on word pairs (u[i], u[i + n/2]): out[i] = r cos, out[i + n/2] = r sin; n is even.
// angle is scratch of n/2 doubles.
__attribute__((target_clones("avx2", "default"))) void box_muller(const std::uint32_t* u, std::size_t n,
                                                                    double* angle, double* out) {
  constexpr double scale = 0x1p-32;
  constexpr double two_pi = 6.283185307179586477;
  const std::size_t m = n / 2;
  double* r = out;
  double* sn = out + m;
  // Signed conversion vectorizes; the offset restores [0, 2^32).
  for (std::size_t i = 0; i < m; ++i) {
    r[i] = (double(std::int32_t(u[i] ^ 0x80000000u)) + 2147483648.5) * scale;
    angle[i] = (double(std::int32_t(u[i + m] ^ 0x80000000u)) + 2147483648.5) * (two_pi * scale);
  }
  // Separate loops keep sin and cos from fusing into a scalar sincos.
  for (std::size_t i = 0; i < m; ++i) r[i] = std::sqrt(-2.0 * std::log(r[i]));
  for (std::size_t i = 0; i < m; ++i) sn[i] = r[i] * std::sin(angle[i]);
  for (std::size_t i = 0; i < m; ++i) r[i] *= std::cos(angle[i]);
}

}  // namespace expfun::detail
