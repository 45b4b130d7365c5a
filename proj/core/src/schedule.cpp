#include "semaug/schedule.hpp"

#include <cmath>

#include "semaug/errors.hpp"

namespace semaug {

NoiseSchedule::NoiseSchedule(std::vector<double> alpha_bar, std::vector<int> timestep_values)
    : alpha_bar_(std::move(alpha_bar)), timestep_values_(std::move(timestep_values)) {
    if (alpha_bar_.empty()) {
        throw ValidationError("noise schedule needs at least the t=0 entry");
    }
    if (timestep_values_.empty()) {
        timestep_values_.resize(alpha_bar_.size());
        for (std::size_t t = 0; t < timestep_values_.size(); ++t) {
            timestep_values_[t] = static_cast<int>(t);
        }
    }
    if (timestep_values_.size() != alpha_bar_.size()) {
        throw ValidationError("timestep grid length does not match alpha_bar length");
    }
    if (!(alpha_bar_[0] > 0.0 && alpha_bar_[0] <= 1.0)) {
        throw ValidationError("alpha_bar(0) must lie in (0, 1]");
    }
    for (std::size_t t = 1; t < alpha_bar_.size(); ++t) {
        if (!(alpha_bar_[t] > 0.0 && alpha_bar_[t] <= 1.0)) {
            throw ValidationError("alpha_bar values must lie in (0, 1]");
        }
        if (!(alpha_bar_[t] < alpha_bar_[t - 1])) {
            throw ValidationError("alpha_bar must be strictly decreasing");
        }
    }
}

NoiseSchedule make_schedule(int steps, const std::string& kind, const ScheduleParams& params) {
    if (steps < 1) throw ValidationError("schedule needs at least one step");
    if (params.train_steps < steps) {
        throw ValidationError("train_steps must be >= requested step count");
    }

    const int n = params.train_steps;
    std::vector<double> cumprod(n);
    double running = 1.0;
    for (int i = 0; i < n; ++i) {
        double beta;
        const double frac = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
        if (kind == "linear") {
            beta = params.beta_start + frac * (params.beta_end - params.beta_start);
        } else if (kind == "scaled_linear") {
            const double root =
                std::sqrt(params.beta_start) +
                frac * (std::sqrt(params.beta_end) - std::sqrt(params.beta_start));
            beta = root * root;
        } else {
            throw ValidationError("unknown schedule kind \"" + kind + "\"");
        }
        running *= 1.0 - beta;
        cumprod[i] = running;
    }

    std::vector<double> alpha_bar(steps + 1);
    std::vector<int> timestep_values(steps + 1, 0);
    alpha_bar[0] = 1.0;
    for (int t = 1; t <= steps; ++t) {
        const auto train_step = static_cast<int>(
            std::llround(static_cast<double>(t) * n / static_cast<double>(steps)));
        alpha_bar[t] = cumprod[train_step - 1];
        timestep_values[t] = train_step - 1;  // 0-based training timestep
    }
    return NoiseSchedule(std::move(alpha_bar), std::move(timestep_values));
}

}  // namespace semaug
