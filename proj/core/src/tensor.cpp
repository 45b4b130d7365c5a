#include "semaug/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semaug {

bool all_finite(const Latent& t) {
    return std::all_of(t.values.begin(), t.values.end(),
                       [](double v) { return std::isfinite(v); });
}

double max_abs_diff(const Latent& a, const Latent& b) {
    double worst = 0.0;
    const std::size_t n = std::min(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    if (a.values.size() != b.values.size()) {
        return std::numeric_limits<double>::infinity();
    }
    return worst;
}

}  // namespace semaug
