#pragma once

// 8-bit images, coverage masks and binary PNM (P5/P6) I/O.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace clap {

struct Raster {
    int width = 0;
    int height = 0;
    int channels = 3;  // 1 or 3
    std::vector<std::uint8_t> data;  // row-major, interleaved channels

    Raster() = default;
    Raster(int w, int h, int c) : width(w), height(h), channels(c), data(std::size_t(w) * h * c, 0) {}

    std::uint8_t& at(int x, int y, int c = 0) { return data[(std::size_t(y) * width + x) * channels + c]; }
    std::uint8_t at(int x, int y, int c = 0) const { return data[(std::size_t(y) * width + x) * channels + c]; }
    bool empty() const { return data.empty(); }
    void validate() const;
};

/// Binary coverage map, one byte (0 or 1) per pixel.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(int w, int h, std::uint8_t fill = 0) : width(w), height(h), data(std::size_t(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[std::size_t(y) * width + x]; }
};

/// Reads P6 (RGB) or P5 (gray) with maxval 255. Throws FormatError.
Raster read_pnm(const std::string& path);
/// Writes "P6\n<w> <h>\n255\n" + samples for 3 channels, P5 for 1 channel.
void write_pnm(const std::string& path, const Raster& r);

std::vector<std::uint8_t> encode_pnm(const Raster& r);
Raster decode_pnm(const std::vector<std::uint8_t>& bytes);

/// Peak signal-to-noise ratio (dB) over pixels where the mask is set; +inf
/// for identical content.
double psnr(const Raster& a, const Raster& b, const Mask& where);

}  // namespace clap
