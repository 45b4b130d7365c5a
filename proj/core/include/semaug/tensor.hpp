#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace semaug {

/// Dense CHW tensor of latent values. Stored in double precision; the wire
/// format downconverts to float32 (see wire.hpp).
struct Latent {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> values;  // row-major, channel-major

    Latent() = default;
    Latent(int c, int h, int w, double fill = 0.0)
        : channels(c), height(h), width(w),
          values(static_cast<std::size_t>(c) * h * w, fill) {}

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    bool same_shape(const Latent& other) const {
        return channels == other.channels && height == other.height && width == other.width;
    }

    double& at(int c, int y, int x) {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
};

bool all_finite(const Latent& t);
double max_abs_diff(const Latent& a, const Latent& b);

/// 8-bit RGB raster, row-major HxWx3.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    bool empty() const { return pixels.empty(); }

    std::uint8_t& at(int y, int x, int channel) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
    std::uint8_t at(int y, int x, int channel) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + channel];
    }
};

inline bool operator==(const Image& a, const Image& b) {
    return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
}

}  // namespace semaug
