#pragma once

#include <functional>
#include <string>
#include <vector>

#include "semaug/schedule.hpp"
#include "semaug/tensor.hpp"

namespace semaug {

/// Noise predictor over latents. The empty condition string is the
/// unconditional branch. Implementations must accept concurrent queries.
class Denoiser {
public:
    virtual ~Denoiser() = default;

    /// Returns predicted noise with the query latent's shape.
    virtual Latent predict_noise(const Latent& z, int timestep,
                                 const std::string& condition) = 0;
};

/// eps == value everywhere, regardless of latent, timestep, and condition.
class ConstantDenoiser : public Denoiser {
public:
    explicit ConstantDenoiser(double value) : value_(value) {}
    Latent predict_noise(const Latent& z, int timestep, const std::string& condition) override;

private:
    double value_;
};

/// eps = a(t) * z + b(t); smooth analytic stub for convergence checks.
class AffineDenoiser : public Denoiser {
public:
    AffineDenoiser(std::function<double(int)> a, std::function<double(int)> b)
        : a_(std::move(a)), b_(std::move(b)) {}
    Latent predict_noise(const Latent& z, int timestep, const std::string& condition) override;

private:
    std::function<double(int)> a_;
    std::function<double(int)> b_;
};

/// eps == constant derived from (condition, timestep), in [-0.5, 0.5].
/// Deterministic stand-in for a prompt-sensitive model.
class ConditionSeededDenoiser : public Denoiser {
public:
    Latent predict_noise(const Latent& z, int timestep, const std::string& condition) override;
};

/// Timestep handed to the denoiser while inverting step t-1 -> t: the target
/// step t as the update rule is usually written, or the source step t-1 as
/// several published implementations do.
enum class InversionTimeConvention { AsWritten, Shifted };

/// Stored latents from inversion, index 0 (encoded image) through T.
struct LatentTrajectory {
    std::vector<Latent> latents;

    int steps() const { return static_cast<int>(latents.size()) - 1; }
    const Latent& at(int t) const { return latents[t]; }
};

/// Elementwise update kernels for one step, exposed for direct checks with
/// arbitrary alpha_bar pairs.
double invert_step_scalar(double z_prev, double eps, double ab_prev, double ab_t);
double sample_step_scalar(double z_t, double eps, double ab_t, double ab_prev);

/// One deterministic inversion step t-1 -> t.
Latent invert_step(const Latent& z_prev, int t, Denoiser& denoiser,
                   const NoiseSchedule& schedule,
                   InversionTimeConvention convention = InversionTimeConvention::AsWritten);

/// Full inversion z_0 -> z_T, retaining all T+1 latents. Runs unconditioned;
/// guidance belongs to the reverse pass.
LatentTrajectory invert(const Latent& z0, Denoiser& denoiser, const NoiseSchedule& schedule,
                        InversionTimeConvention convention = InversionTimeConvention::AsWritten);

/// Classifier-free combination w * eps(z,t,C) + (1-w) * eps(z,t,empty).
/// Exactly two denoiser calls; backend failures name the branch.
Latent guided_epsilon(const Latent& z, int timestep, const std::string& condition, double w,
                      Denoiser& denoiser);

/// Deterministic reverse step t -> t-1 for a precomputed eps; the algebraic
/// inverse of invert_step when both see the same eps.
Latent sample_step(const Latent& z_t, int t, const Latent& eps, const NoiseSchedule& schedule);

}  // namespace semaug
