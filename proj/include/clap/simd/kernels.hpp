#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the dispatcher picks one at runtime. Variants
// perform the same IEEE operations in the same order (no FMA contraction), so
// their outputs are bit-identical and pipelines stay reproducible no matter
// which variant ran.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace clap::simd {

enum class Level { Scalar, Avx2 };

/// Best level the running CPU supports.
Level detected_level();
/// Level currently used by the dispatching entry points. Starts at
/// detected_level(), or at the value of CLAP_SIMD=scalar|avx2 if set.
Level active_level();
/// Overrides the active level; requests above detected_level() are clamped.
void set_level(Level level);
std::string_view level_name(Level level);

/// Structure-of-arrays view over point matches p -> q.
struct MatchesView {
    std::span<const double> px, py, qx, qy;
    std::size_t size() const { return px.size(); }
};

/// Row-major 3x3 matrix coefficients.
using Mat3Coeffs = const double (&)[9];

/// out[i] = 0.5 * (|q_i - pi(H p_i)| + |p_i - pi(Hinv q_i)|); +inf when a
/// homogeneous w has magnitude below 1e-12.
void symmetric_reprojection(Mat3Coeffs h, Mat3Coeffs hinv, const MatchesView& m, std::span<double> out);

/// Maps pixels (x0 + i, y) through H for i in [0, sx.size()). Outputs NaN for
/// both coordinates when |w| < 1e-12.
void map_row(Mat3Coeffs h, double x0, double y, std::span<double> sx, std::span<double> sy);

/// out[i] = (w[i] * a[i] + (65536 - w[i]) * b[i] + 32768) >> 16 with
/// w[i] in [0, 65536] (Q16 weights, round half up).
void blend_q16(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::span<const std::uint32_t> w,
               std::span<std::uint8_t> out);

namespace scalar {
void symmetric_reprojection(Mat3Coeffs h, Mat3Coeffs hinv, const MatchesView& m, std::span<double> out);
void map_row(Mat3Coeffs h, double x0, double y, std::span<double> sx, std::span<double> sy);
void blend_q16(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::span<const std::uint32_t> w,
               std::span<std::uint8_t> out);
}  // namespace scalar

#if defined(CLAP_HAVE_AVX2)
namespace avx2 {
void symmetric_reprojection(Mat3Coeffs h, Mat3Coeffs hinv, const MatchesView& m, std::span<double> out);
void map_row(Mat3Coeffs h, double x0, double y, std::span<double> sx, std::span<double> sy);
void blend_q16(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::span<const std::uint32_t> w,
               std::span<std::uint8_t> out);
}  // namespace avx2
#endif

}  // namespace clap::simd
