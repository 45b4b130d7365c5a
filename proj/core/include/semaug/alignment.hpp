#pragma once

#include <cstdint>
#include <vector>

#include "semaug/dataset.hpp"
#include "semaug/ddim.hpp"
#include "semaug/strategy.hpp"
#include "semaug/tensor.hpp"

namespace semaug {

/// Binary object mask at latent resolution; 1 = object region, 0 = the
/// surrounding environment. Broadcast over channels.
struct RegionMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;

    std::uint8_t at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t ones() const;
};

/// Rasterizes the bbox at latent resolution with a cover rule: a cell is set
/// iff its f x f pixel footprint intersects the bbox, f being the integer
/// image/latent downscale factor. Throws DegenerateMaskError when the result
/// is all ones or all zeros, and ValidationError when the dims do not share
/// one integer factor.
RegionMask bbox_to_latent_mask(const BBox& bbox, int image_width, int image_height,
                               int latent_width, int latent_height);

/// z_prime * mask + z_tilde * (1 - mask), elementwise.
Latent align_step(const Latent& z_prime, const Latent& z_tilde, const RegionMask& mask);

struct EditOptions {
    bool apply_alignment = true;  // off reproduces the no-alignment ablation
    InversionTimeConvention inversion_time_convention = InversionTimeConvention::AsWritten;
};

/// The whole edit loop: invert z_0, start the guided reverse pass from the
/// inversion endpoint, and after every reverse step (the last one included)
/// pull the environment region back to the stored inversion latent.
Latent edit_latent(const Latent& z0, const AugmentationPlan& plan, const RegionMask& mask,
                   Denoiser& denoiser, const NoiseSchedule& schedule, double guidance_w,
                   const EditOptions& options = {});

}  // namespace semaug
