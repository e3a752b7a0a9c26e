// Compiled with -mavx2 (and without -mfma): only reached through the runtime
// dispatcher after a CPUID check.

#include "clap/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace clap::simd::avx2 {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

struct Coeffs {
    __m256d c[9];
    explicit Coeffs(Mat3Coeffs h) {
        for (int k = 0; k < 9; ++k) c[k] = _mm256_set1_pd(h[k]);
    }
};

inline __m256d transfer_error(const Coeffs& h, __m256d x, __m256d y, __m256d tx, __m256d ty) {
    const __m256d w = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(h.c[6], x), _mm256_mul_pd(h.c[7], y)), h.c[8]);
    const __m256d u = _mm256_div_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(h.c[0], x), _mm256_mul_pd(h.c[1], y)), h.c[2]), w);
    const __m256d v = _mm256_div_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(h.c[3], x), _mm256_mul_pd(h.c[4], y)), h.c[5]), w);
    const __m256d du = _mm256_sub_pd(tx, u);
    const __m256d dv = _mm256_sub_pd(ty, v);
    const __m256d err = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(du, du), _mm256_mul_pd(dv, dv)));
    const __m256d ok = _mm256_cmp_pd(abs_pd(w), _mm256_set1_pd(1e-12), _CMP_GE_OQ);
    return _mm256_blendv_pd(_mm256_set1_pd(std::numeric_limits<double>::infinity()), err, ok);
}

}  // namespace

void symmetric_reprojection(Mat3Coeffs h, Mat3Coeffs hinv, const MatchesView& m, std::span<double> out) {
    const Coeffs fh(h);
    const Coeffs bh(hinv);
    const __m256d half = _mm256_set1_pd(0.5);
    const std::size_t n = m.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d px = _mm256_loadu_pd(m.px.data() + i);
        const __m256d py = _mm256_loadu_pd(m.py.data() + i);
        const __m256d qx = _mm256_loadu_pd(m.qx.data() + i);
        const __m256d qy = _mm256_loadu_pd(m.qy.data() + i);
        const __m256d fwd = transfer_error(fh, px, py, qx, qy);
        const __m256d bwd = transfer_error(bh, qx, qy, px, py);
        _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(half, _mm256_add_pd(fwd, bwd)));
    }
    if (i < n) {
        const MatchesView tail{m.px.subspan(i), m.py.subspan(i), m.qx.subspan(i), m.qy.subspan(i)};
        scalar::symmetric_reprojection(h, hinv, tail, out.subspan(i));
    }
}

void map_row(Mat3Coeffs h, double x0, double y, std::span<double> sx, std::span<double> sy) {
    const Coeffs c(h);
    const __m256d yv = _mm256_set1_pd(y);
    const __m256d x0v = _mm256_set1_pd(x0);
    const __m256d nan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
    const __m256d min_w = _mm256_set1_pd(1e-12);
    const std::size_t n = sx.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double base = static_cast<double>(i);
        const __m256d offs = _mm256_set_pd(base + 3.0, base + 2.0, base + 1.0, base);
        const __m256d x = _mm256_add_pd(x0v, offs);
        const __m256d w = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(c.c[6], x), _mm256_mul_pd(c.c[7], yv)), c.c[8]);
        const __m256d u = _mm256_div_pd(
            _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(c.c[0], x), _mm256_mul_pd(c.c[1], yv)), c.c[2]), w);
        const __m256d v = _mm256_div_pd(
            _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(c.c[3], x), _mm256_mul_pd(c.c[4], yv)), c.c[5]), w);
        const __m256d ok = _mm256_cmp_pd(abs_pd(w), min_w, _CMP_GE_OQ);
        _mm256_storeu_pd(sx.data() + i, _mm256_blendv_pd(nan, u, ok));
        _mm256_storeu_pd(sy.data() + i, _mm256_blendv_pd(nan, v, ok));
    }
    if (i < n) scalar::map_row(h, x0 + static_cast<double>(i), y, sx.subspan(i), sy.subspan(i));
}

void blend_q16(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::span<const std::uint32_t> w,
               std::span<std::uint8_t> out) {
    const __m256i one = _mm256_set1_epi32(65536);
    const __m256i round = _mm256_set1_epi32(32768);
    const __m256i gather_lo = _mm256_setr_epi32(0, 4, 1, 5, 2, 6, 3, 7);
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i av = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(a.data() + i)));
        const __m256i bv = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(b.data() + i)));
        const __m256i wv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w.data() + i));
        __m256i acc = _mm256_mullo_epi32(wv, av);
        acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(_mm256_sub_epi32(one, wv), bv));
        acc = _mm256_srli_epi32(_mm256_add_epi32(acc, round), 16);
        // 8 x u32 (each <= 255) -> 8 bytes.
        const __m256i w16 = _mm256_packus_epi32(acc, acc);
        const __m256i w8 = _mm256_packus_epi16(w16, w16);
        const __m256i packed = _mm256_permutevar8x32_epi32(w8, gather_lo);
        _mm_storel_epi64(reinterpret_cast<__m128i*>(out.data() + i), _mm256_castsi256_si128(packed));
    }
    if (i < n) scalar::blend_q16(a.subspan(i), b.subspan(i), w.subspan(i), out.subspan(i));
}

}  // namespace clap::simd::avx2
