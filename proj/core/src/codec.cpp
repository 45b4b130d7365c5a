#include "semaug/codec.hpp"

#include <algorithm>
#include <cmath>

#include "semaug/errors.hpp"

namespace semaug {

EncodedLatent IdentityCodec::encode(const Image& image) {
    if (image.empty()) throw ValidationError("IdentityCodec: empty image");
    Latent latent(3, image.height, image.width);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                latent.at(c, y, x) = static_cast<double>(image.at(y, x, c));
            }
        }
    }
    return EncodedLatent{std::move(latent), 1};
}

Image IdentityCodec::decode(const Latent& latent) {
    if (latent.channels != 3) {
        throw ValidationError("IdentityCodec: expected 3-channel latent");
    }
    Image image(latent.width, latent.height);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < latent.height; ++y) {
            for (int x = 0; x < latent.width; ++x) {
                const double v = std::clamp(latent.at(c, y, x), 0.0, 255.0);
                image.at(y, x, c) = static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return image;
}

}  // namespace semaug
