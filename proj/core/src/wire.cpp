#include "semaug/wire.hpp"

#include <cstring>

#include "semaug/errors.hpp"
#include "wire_detail.hpp"

using nlohmann::json;

namespace semaug::wire {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kAlphabet[(n >> 18) & 63]);
        out.push_back(kAlphabet[(n >> 12) & 63]);
        out.push_back(kAlphabet[(n >> 6) & 63]);
        out.push_back(kAlphabet[n & 63]);
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        const std::uint32_t n = bytes[i] << 16;
        out.push_back(kAlphabet[(n >> 18) & 63]);
        out.push_back(kAlphabet[(n >> 12) & 63]);
        out.append("==");
    } else if (rest == 2) {
        const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kAlphabet[(n >> 18) & 63]);
        out.push_back(kAlphabet[(n >> 12) & 63]);
        out.push_back(kAlphabet[(n >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    std::uint32_t buffer = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        const int v = decode_char(c);
        if (v < 0) throw ValidationError("invalid base64 character");
        buffer = (buffer << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((buffer >> bits) & 0xff));
        }
    }
    return out;
}

std::vector<std::uint8_t> pack_float32(std::span<const double> values) {
    std::vector<std::uint8_t> bytes(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const float f = static_cast<float>(values[i]);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        bytes[i * 4 + 0] = static_cast<std::uint8_t>(u & 0xff);
        bytes[i * 4 + 1] = static_cast<std::uint8_t>((u >> 8) & 0xff);
        bytes[i * 4 + 2] = static_cast<std::uint8_t>((u >> 16) & 0xff);
        bytes[i * 4 + 3] = static_cast<std::uint8_t>((u >> 24) & 0xff);
    }
    return bytes;
}

std::vector<double> unpack_float32(std::span<const std::uint8_t> bytes) {
    if (bytes.size() % 4 != 0) throw ValidationError("float32 payload size not divisible by 4");
    std::vector<double> values(bytes.size() / 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint32_t u = static_cast<std::uint32_t>(bytes[i * 4 + 0]) |
                                (static_cast<std::uint32_t>(bytes[i * 4 + 1]) << 8) |
                                (static_cast<std::uint32_t>(bytes[i * 4 + 2]) << 16) |
                                (static_cast<std::uint32_t>(bytes[i * 4 + 3]) << 24);
        float f;
        std::memcpy(&f, &u, 4);
        values[i] = static_cast<double>(f);
    }
    return values;
}

namespace detail {

json latent_to_json_obj(const Latent& latent) {
    const auto bytes = pack_float32(latent.values);
    return json{{"shape", {latent.channels, latent.height, latent.width}},
                {"dtype", "float32"},
                {"data", base64_encode(bytes)}};
}

Latent latent_from_json_obj(const json& obj) {
    if (obj.value("dtype", "") != "float32") {
        throw ValidationError("tensor dtype must be float32");
    }
    const auto shape = obj.at("shape").get<std::vector<int>>();
    if (shape.size() != 3) throw ValidationError("latent tensor must have shape [c, h, w]");
    const auto bytes = base64_decode(obj.at("data").get<std::string>());
    Latent latent(shape[0], shape[1], shape[2]);
    auto values = unpack_float32(bytes);
    if (values.size() != latent.size()) {
        throw ValidationError("tensor payload does not match its shape");
    }
    latent.values = std::move(values);
    return latent;
}

json image_to_json_obj(const Image& image) {
    return json{{"shape", {image.height, image.width, 3}},
                {"dtype", "uint8"},
                {"data", base64_encode(image.pixels)}};
}

Image image_from_json_obj(const json& obj) {
    if (obj.value("dtype", "") != "uint8") {
        throw ValidationError("image tensor dtype must be uint8");
    }
    const auto shape = obj.at("shape").get<std::vector<int>>();
    if (shape.size() != 3 || shape[2] != 3) {
        throw ValidationError("image tensor must have shape [h, w, 3]");
    }
    Image image(shape[1], shape[0]);
    auto bytes = base64_decode(obj.at("data").get<std::string>());
    if (bytes.size() != image.pixels.size()) {
        throw ValidationError("image payload does not match its shape");
    }
    image.pixels = std::move(bytes);
    return image;
}

}  // namespace detail

std::string latent_to_json(const Latent& latent) {
    return detail::latent_to_json_obj(latent).dump();
}

Latent latent_from_json(std::string_view text) {
    return detail::latent_from_json_obj(json::parse(text));
}

std::string image_to_json(const Image& image) {
    return detail::image_to_json_obj(image).dump();
}

Image image_from_json(std::string_view text) {
    return detail::image_from_json_obj(json::parse(text));
}

}  // namespace semaug::wire
