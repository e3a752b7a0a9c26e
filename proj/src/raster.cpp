#include "clap/raster.hpp"

#include "clap/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>

namespace clap {

void Raster::validate() const {
    if (width < 0 || height < 0) throw InvalidArgument("raster: negative dimensions");
    if (channels != 1 && channels != 3) throw InvalidArgument("raster: channels must be 1 or 3");
    if (data.size() != std::size_t(width) * height * channels) throw InvalidArgument("raster: buffer size mismatch");
}

std::vector<std::uint8_t> encode_pnm(const Raster& r) {
    r.validate();
    const std::string header = std::string(r.channels == 3 ? "P6" : "P5") + "\n" + std::to_string(r.width) + " " +
                               std::to_string(r.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), r.data.begin(), r.data.end());
    return out;
}

Raster decode_pnm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&] {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw FormatError("pnm: malformed header");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > std::numeric_limits<int>::max()) throw FormatError("pnm: header value too large");
        }
        return static_cast<int>(v);
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5'))
        throw FormatError("pnm: expected P6 or P5 magic");
    const int channels = bytes[1] == '6' ? 3 : 1;
    pos = 2;
    const int w = read_int();
    const int h = read_int();
    const int maxval = read_int();
    if (w <= 0 || h <= 0) throw FormatError("pnm: empty image");
    if (std::int64_t(w) * h * channels > (std::int64_t(1) << 31)) throw FormatError("pnm: image too large");
    if (maxval != 255) throw FormatError("pnm: only maxval 255 is supported");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw FormatError("pnm: malformed header");
    ++pos;  // single whitespace before the raster
    Raster r(w, h, channels);
    if (bytes.size() - pos < r.data.size()) throw FormatError("pnm: truncated pixel data");
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
              bytes.begin() + static_cast<std::ptrdiff_t>(pos + r.data.size()), r.data.begin());
    return r;
}

Raster read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pnm(bytes);
}

void write_pnm(const std::string& path, const Raster& r) {
    const std::vector<std::uint8_t> bytes = encode_pnm(r);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

double psnr(const Raster& a, const Raster& b, const Mask& where) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels || where.width != a.width ||
        where.height != a.height)
        throw DimensionMismatch("psnr: dimension mismatch");
    double sse = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            if (!where.at(x, y)) continue;
            for (int c = 0; c < a.channels; ++c) {
                const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
                sse += d * d;
                ++n;
            }
        }
    if (n == 0) throw InvalidArgument("psnr: empty region");
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / (sse / static_cast<double>(n)));
}

}  // namespace clap
