#include "clap/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace clap::simd {

namespace {

Level probe() {
#if defined(CLAP_HAVE_AVX2)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Level::Avx2;
#endif
    return Level::Scalar;
}

Level initial_level() {
    const Level best = detected_level();
    if (const char* env = std::getenv("CLAP_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Level::Scalar;
        if (v == "avx2") return best;
    }
    return best;
}

std::atomic<Level>& current() {
    static std::atomic<Level> level{initial_level()};
    return level;
}

}  // namespace

Level detected_level() {
    static const Level level = probe();
    return level;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

void set_level(Level level) {
    if (level == Level::Avx2 && detected_level() != Level::Avx2) level = Level::Scalar;
    current().store(level, std::memory_order_relaxed);
}

std::string_view level_name(Level level) { return level == Level::Avx2 ? "avx2" : "scalar"; }

void symmetric_reprojection(Mat3Coeffs h, Mat3Coeffs hinv, const MatchesView& m, std::span<double> out) {
#if defined(CLAP_HAVE_AVX2)
    if (active_level() == Level::Avx2) return avx2::symmetric_reprojection(h, hinv, m, out);
#endif
    scalar::symmetric_reprojection(h, hinv, m, out);
}

void map_row(Mat3Coeffs h, double x0, double y, std::span<double> sx, std::span<double> sy) {
#if defined(CLAP_HAVE_AVX2)
    if (active_level() == Level::Avx2) return avx2::map_row(h, x0, y, sx, sy);
#endif
    scalar::map_row(h, x0, y, sx, sy);
}

void blend_q16(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, std::span<const std::uint32_t> w,
               std::span<std::uint8_t> out) {
#if defined(CLAP_HAVE_AVX2)
    if (active_level() == Level::Avx2) return avx2::blend_q16(a, b, w, out);
#endif
    scalar::blend_q16(a, b, w, out);
}

}  // namespace clap::simd
