#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semaug/tensor.hpp"

namespace semaug::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Little-endian float32 packing used by every tensor on the wire.
std::vector<std::uint8_t> pack_float32(std::span<const double> values);
std::vector<double> unpack_float32(std::span<const std::uint8_t> bytes);

/// Tensor objects are JSON {"shape": [...], "dtype": "float32"|"uint8",
/// "data": "<base64, row-major>"}.
std::string latent_to_json(const Latent& latent);
Latent latent_from_json(std::string_view text);

std::string image_to_json(const Image& image);
Image image_from_json(std::string_view text);

}  // namespace semaug::wire
