#include "semaug/ddim.hpp"

#include <cmath>

#include "semaug/errors.hpp"
#include "semaug/rng.hpp"

namespace semaug {

Latent ConstantDenoiser::predict_noise(const Latent& z, int, const std::string&) {
    Latent eps(z.channels, z.height, z.width, value_);
    return eps;
}

Latent AffineDenoiser::predict_noise(const Latent& z, int timestep, const std::string&) {
    const double a = a_(timestep);
    const double b = b_(timestep);
    Latent eps(z.channels, z.height, z.width);
    for (std::size_t i = 0; i < z.values.size(); ++i) {
        eps.values[i] = a * z.values[i] + b;
    }
    return eps;
}

Latent ConditionSeededDenoiser::predict_noise(const Latent& z, int timestep,
                                              const std::string& condition) {
    const std::uint64_t h = fnv1a64(condition) ^ (0x9e3779b97f4a7c15ULL * (timestep + 1));
    const double value = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
    return Latent(z.channels, z.height, z.width, value);
}

namespace {

void check_eps_shape(const Latent& eps, const Latent& z) {
    if (!eps.same_shape(z)) {
        throw BackendError("denoiser returned mismatched shape");
    }
}

}  // namespace

double invert_step_scalar(double z_prev, double eps, double ab_prev, double ab_t) {
    return std::sqrt(ab_t) * (z_prev - std::sqrt(1.0 - ab_prev) * eps) / std::sqrt(ab_prev) +
           std::sqrt(1.0 - ab_t) * eps;
}

double sample_step_scalar(double z_t, double eps, double ab_t, double ab_prev) {
    return std::sqrt(ab_prev) * (z_t - std::sqrt(1.0 - ab_t) * eps) / std::sqrt(ab_t) +
           std::sqrt(1.0 - ab_prev) * eps;
}

Latent invert_step(const Latent& z_prev, int t, Denoiser& denoiser,
                   const NoiseSchedule& schedule, InversionTimeConvention convention) {
    if (t < 1 || t > schedule.steps()) {
        throw ValidationError("invert_step: t out of range");
    }
    const int query_t = convention == InversionTimeConvention::AsWritten
                            ? schedule.timestep_value(t)
                            : schedule.timestep_value(t - 1);
    const Latent eps = denoiser.predict_noise(z_prev, query_t, "");
    check_eps_shape(eps, z_prev);

    const double ab_t = schedule.alpha_bar(t);
    const double ab_prev = schedule.alpha_bar(t - 1);

    Latent z_t(z_prev.channels, z_prev.height, z_prev.width);
    for (std::size_t i = 0; i < z_prev.values.size(); ++i) {
        z_t.values[i] = invert_step_scalar(z_prev.values[i], eps.values[i], ab_prev, ab_t);
    }
    if (!all_finite(z_t)) {
        throw NumericError("non-finite latent after inversion step t=" + std::to_string(t));
    }
    return z_t;
}

LatentTrajectory invert(const Latent& z0, Denoiser& denoiser, const NoiseSchedule& schedule,
                        InversionTimeConvention convention) {
    if (!all_finite(z0)) throw ValidationError("invert: non-finite input latent");
    LatentTrajectory trajectory;
    trajectory.latents.reserve(schedule.steps() + 1);
    trajectory.latents.push_back(z0);
    for (int t = 1; t <= schedule.steps(); ++t) {
        trajectory.latents.push_back(
            invert_step(trajectory.latents.back(), t, denoiser, schedule, convention));
    }
    return trajectory;
}

Latent guided_epsilon(const Latent& z, int timestep, const std::string& condition, double w,
                      Denoiser& denoiser) {
    Latent eps_cond, eps_uncond;
    try {
        eps_cond = denoiser.predict_noise(z, timestep, condition);
    } catch (const BackendError& e) {
        throw BackendError(std::string("conditional branch failed: ") + e.what());
    }
    try {
        eps_uncond = denoiser.predict_noise(z, timestep, "");
    } catch (const BackendError& e) {
        throw BackendError(std::string("unconditional branch failed: ") + e.what());
    }
    check_eps_shape(eps_cond, z);
    check_eps_shape(eps_uncond, z);

    Latent out(z.channels, z.height, z.width);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = w * eps_cond.values[i] + (1.0 - w) * eps_uncond.values[i];
    }
    return out;
}

Latent sample_step(const Latent& z_t, int t, const Latent& eps, const NoiseSchedule& schedule) {
    if (t < 1 || t > schedule.steps()) {
        throw ValidationError("sample_step: t out of range");
    }
    if (!eps.same_shape(z_t)) {
        throw ValidationError("sample_step: eps shape does not match latent");
    }
    const double ab_t = schedule.alpha_bar(t);
    const double ab_prev = schedule.alpha_bar(t - 1);

    Latent z_prev(z_t.channels, z_t.height, z_t.width);
    for (std::size_t i = 0; i < z_t.values.size(); ++i) {
        z_prev.values[i] = sample_step_scalar(z_t.values[i], eps.values[i], ab_t, ab_prev);
    }
    if (!all_finite(z_prev)) {
        throw NumericError("non-finite latent after reverse step t=" + std::to_string(t));
    }
    return z_prev;
}

}  // namespace semaug
