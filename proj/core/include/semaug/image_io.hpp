#pragma once

#include <filesystem>

#include "semaug/tensor.hpp"

namespace semaug {

/// Reads a raster file (PNG/JPEG/...) into an RGB image.
Image read_image(const std::filesystem::path& path);

/// Writes a lossless PNG.
void write_png(const std::filesystem::path& path, const Image& image);

}  // namespace semaug
