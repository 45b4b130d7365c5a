#pragma once

#include <string>
#include <vector>

namespace semaug {

struct ScheduleParams {
    double beta_start = 1e-4;
    double beta_end = 2e-2;
    int train_steps = 1000;
};

/// Cumulative signal-retention coefficients of the forward diffusion,
/// indexed 0..T with alpha_bar(0) = 1 and strictly decreasing thereafter.
class NoiseSchedule {
public:
    /// alpha_bar has T+1 entries; timestep_values maps step index to the
    /// denoiser-facing timestep (same length, entry 0 unused by the forward
    /// convention). Throws ValidationError when alpha_bar is not strictly
    /// decreasing or leaves (0, 1].
    explicit NoiseSchedule(std::vector<double> alpha_bar, std::vector<int> timestep_values = {});

    int steps() const { return static_cast<int>(alpha_bar_.size()) - 1; }
    double alpha_bar(int t) const { return alpha_bar_[t]; }
    int timestep_value(int t) const { return timestep_values_[t]; }

private:
    std::vector<double> alpha_bar_;
    std::vector<int> timestep_values_;
};

/// Builds a schedule by subsampling the cumulative product of a beta ramp
/// over `params.train_steps` training steps down to `steps` entries.
/// Kinds: "linear" (default) and "scaled_linear" (ramp linear in sqrt(beta)).
NoiseSchedule make_schedule(int steps, const std::string& kind = "linear",
                            const ScheduleParams& params = {});

}  // namespace semaug
