#pragma once

#include "semaug/tensor.hpp"

namespace semaug {

struct EncodedLatent {
    Latent latent;
    int downscale = 1;  // image dims / latent dims
};

/// Image <-> latent transform. Implementations must accept concurrent calls.
class ImageCodec {
public:
    virtual ~ImageCodec() = default;

    virtual EncodedLatent encode(const Image& image) = 0;
    virtual Image decode(const Latent& latent) = 0;
};

/// Raw channel planes as latent values (downscale 1). decode(encode(x)) is
/// exact, which makes region-preservation checks bit-exact end to end.
class IdentityCodec : public ImageCodec {
public:
    EncodedLatent encode(const Image& image) override;
    Image decode(const Latent& latent) override;
};

}  // namespace semaug
