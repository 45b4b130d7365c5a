#pragma once

// Internal JSON builders shared by wire.cpp and backends.cpp; not installed.

#include <json.hpp>

#include "semaug/tensor.hpp"

namespace semaug::wire::detail {

nlohmann::json latent_to_json_obj(const Latent& latent);
Latent latent_from_json_obj(const nlohmann::json& obj);

nlohmann::json image_to_json_obj(const Image& image);
Image image_from_json_obj(const nlohmann::json& obj);

}  // namespace semaug::wire::detail
