#include "semaug/alignment.hpp"

#include <algorithm>

#include "semaug/errors.hpp"

namespace semaug {

std::size_t RegionMask::ones() const {
    return static_cast<std::size_t>(std::count(values.begin(), values.end(), 1));
}

RegionMask bbox_to_latent_mask(const BBox& bbox, int image_width, int image_height,
                               int latent_width, int latent_height) {
    if (latent_width < 1 || latent_height < 1 || image_width < 1 || image_height < 1) {
        throw ValidationError("bbox_to_latent_mask: non-positive dimensions");
    }
    if (image_width % latent_width != 0 || image_height % latent_height != 0) {
        throw ValidationError("latent dims must divide image dims");
    }
    const int fx = image_width / latent_width;
    const int fy = image_height / latent_height;
    if (fx != fy) {
        throw ValidationError("image/latent downscale factor must match in both axes");
    }
    const double f = fx;

    RegionMask mask;
    mask.width = latent_width;
    mask.height = latent_height;
    mask.values.assign(static_cast<std::size_t>(latent_width) * latent_height, 0);

    for (int row = 0; row < latent_height; ++row) {
        const double cell_y0 = row * f;
        const double cell_y1 = cell_y0 + f;
        for (int col = 0; col < latent_width; ++col) {
            const double cell_x0 = col * f;
            const double cell_x1 = cell_x0 + f;
            const bool overlaps = cell_x0 < bbox.x + bbox.w && cell_x1 > bbox.x &&
                                  cell_y0 < bbox.y + bbox.h && cell_y1 > bbox.y;
            if (overlaps) {
                mask.values[static_cast<std::size_t>(row) * latent_width + col] = 1;
            }
        }
    }

    const std::size_t set = mask.ones();
    if (set == 0 || set == mask.values.size()) {
        throw DegenerateMaskError("object mask covers " + std::string(set == 0 ? "none" : "all") +
                                  " of the latent; plan must be skipped");
    }
    return mask;
}

Latent align_step(const Latent& z_prime, const Latent& z_tilde, const RegionMask& mask) {
    if (!z_prime.same_shape(z_tilde)) {
        throw ValidationError("align_step: latent shapes differ");
    }
    if (z_prime.height != mask.height || z_prime.width != mask.width) {
        throw ValidationError("align_step: mask shape does not match latent");
    }
    Latent out(z_prime.channels, z_prime.height, z_prime.width);
    for (int c = 0; c < out.channels; ++c) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                out.at(c, y, x) = mask.at(y, x) ? z_prime.at(c, y, x) : z_tilde.at(c, y, x);
            }
        }
    }
    return out;
}

Latent edit_latent(const Latent& z0, const AugmentationPlan& plan, const RegionMask& mask,
                   Denoiser& denoiser, const NoiseSchedule& schedule, double guidance_w,
                   const EditOptions& options) {
    if (options.apply_alignment) {
        const std::size_t set = mask.ones();
        if (set == 0 || set == mask.values.size()) {
            throw DegenerateMaskError("edit_latent: degenerate mask");
        }
    }

    const LatentTrajectory trajectory =
        invert(z0, denoiser, schedule, options.inversion_time_convention);

    Latent z = trajectory.at(schedule.steps());  // start from the inversion endpoint
    for (int t = schedule.steps(); t >= 1; --t) {
        const Latent eps =
            guided_epsilon(z, schedule.timestep_value(t), plan.prompt, guidance_w, denoiser);
        z = sample_step(z, t, eps, schedule);
        if (options.apply_alignment) {
            z = align_step(z, trajectory.at(t - 1), mask);
        }
    }
    return z;
}

}  // namespace semaug
