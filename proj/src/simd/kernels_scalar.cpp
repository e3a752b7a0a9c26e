#include "clap/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace clap::simd::scalar {

namespace {

constexpr double kMinW = 1e-12;

inline double transfer_error(Mat3Coeffs h, double x, double y, double tx, double ty) {
    const double w = h[6] * x + h[7] * y + h[8];
    if (!(std::abs(w) >= kMinW)) return std::numeric_limits<double>::infinity();
    const double u = (h[0] * x + h[1] * y + h[2]) / w;
    const double v = (h[3] * x + h[4] * y + h[5]) / w;
    const double du = tx - u;
    const double dv = ty - v;
    return std::sqrt(du * du + dv * dv);
}

}  // namespace

void symmetric_reprojection(Mat3Coeffs h, Mat3Coeffs hinv, const MatchesView& m, std::span<double> out) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double fwd = transfer_error(h, m.px[i], m.py[i], m.qx[i], m.qy[i]);
        const double bwd = transfer_error(hinv, m.qx[i], m.qy[i], m.px[i], m.py[i]);
        out[i] = 0.5 * (fwd + bwd);
    }
}

void map_row(Mat3Coeffs h, double x0, double y, std::span<double> sx, std::span<double> sy) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < sx.size(); ++i) {
        const double x = x0 + static_cast<double>(i);
        const double w = h[6] * x + h[7] * y + h[8];
        if (!(std::abs(w) >= kMinW)) {
            sx[i] = nan;
            sy[i] = nan;
            continue;
        }
        sx[i] = (h[0] * x + h[1] * y + h[2]) / w;
        sy[i] = (h[3] * x + h[4] * y + h[5]) / w;
    }
}

void blend_q16(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::span<const std::uint32_t> w,
               std::span<std::uint8_t> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint32_t v = w[i] * a[i] + (65536u - w[i]) * b[i] + 32768u;
        out[i] = static_cast<std::uint8_t>(v >> 16);
    }
}

}  // namespace clap::simd::scalar
