// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.

#include <immintrin.h>

#include <cmath>

#include "bosonize/kernels.hpp"

namespace bosonize::kernels::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

PoleSums pole_sums(std::span<const double> poles, std::span<const double> weights, double lambda) {
  const std::size_t n = poles.size();
  const __m256d lam = _mm256_set1_pd(lambda);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc_v0 = _mm256_setzero_pd();
  __m256d acc_d0 = _mm256_setzero_pd();
  __m256d acc_v1 = _mm256_setzero_pd();
  __m256d acc_d1 = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d inv0 = _mm256_div_pd(one, _mm256_sub_pd(_mm256_loadu_pd(poles.data() + i), lam));
    const __m256d inv1 = _mm256_div_pd(one, _mm256_sub_pd(_mm256_loadu_pd(poles.data() + i + 4), lam));
    const __m256d t0 = _mm256_mul_pd(_mm256_loadu_pd(weights.data() + i), inv0);
    const __m256d t1 = _mm256_mul_pd(_mm256_loadu_pd(weights.data() + i + 4), inv1);
    acc_v0 = _mm256_add_pd(acc_v0, t0);
    acc_v1 = _mm256_add_pd(acc_v1, t1);
    acc_d0 = _mm256_fmadd_pd(t0, inv0, acc_d0);
    acc_d1 = _mm256_fmadd_pd(t1, inv1, acc_d1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d inv = _mm256_div_pd(one, _mm256_sub_pd(_mm256_loadu_pd(poles.data() + i), lam));
    const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(weights.data() + i), inv);
    acc_v0 = _mm256_add_pd(acc_v0, t);
    acc_d0 = _mm256_fmadd_pd(t, inv, acc_d0);
  }

  PoleSums s;
  s.value = horizontal_sum(_mm256_add_pd(acc_v0, acc_v1));
  s.derivative = horizontal_sum(_mm256_add_pd(acc_d0, acc_d1));
  for (; i < n; ++i) {
    const double inv = 1.0 / (poles[i] - lambda);
    const double t = weights[i] * inv;
    s.value += t;
    s.derivative += t * inv;
  }
  return s;
}

void abs_projections(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                     const Vec3& d, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d dx = _mm256_set1_pd(d.x);
  const __m256d dy = _mm256_set1_pd(d.y);
  const __m256d dz = _mm256_set1_pd(d.z);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), dx);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(y.data() + i), dy, acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(z.data() + i), dz, acc);
    _mm256_storeu_pd(out.data() + i, _mm256_andnot_pd(sign, acc));
  }
  for (; i < n; ++i) {
    out[i] = std::fabs(std::fma(z[i], d.z, std::fma(y[i], d.y, x[i] * d.x)));
  }
}

void shifted_outside_mask(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::span<const std::int32_t> z, const IntVec3& s, std::int64_t radius_squared,
                          std::span<std::uint8_t> mask) {
  const std::size_t n = mask.size();
  const __m256i sx = _mm256_set1_epi32(s.x);
  const __m256i sy = _mm256_set1_epi32(s.y);
  const __m256i sz = _mm256_set1_epi32(s.z);
  const __m256i r2 = _mm256_set1_epi32(static_cast<std::int32_t>(radius_squared));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i px = _mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(x.data() + i)), sx);
    const __m256i py = _mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(y.data() + i)), sy);
    const __m256i pz = _mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(z.data() + i)), sz);
    __m256i n2 = _mm256_mullo_epi32(px, px);
    n2 = _mm256_add_epi32(n2, _mm256_mullo_epi32(py, py));
    n2 = _mm256_add_epi32(n2, _mm256_mullo_epi32(pz, pz));
    const int bits = _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpgt_epi32(n2, r2)));
    for (int lane = 0; lane < 8; ++lane) {
      mask[i + lane] = static_cast<std::uint8_t>((bits >> lane) & 1);
    }
  }
  for (; i < n; ++i) {
    const std::int64_t px = x[i] + s.x;
    const std::int64_t py = y[i] + s.y;
    const std::int64_t pz = z[i] + s.z;
    mask[i] = (px * px + py * py + pz * pz > radius_squared) ? 1 : 0;
  }
}

}  // namespace bosonize::kernels::avx2
