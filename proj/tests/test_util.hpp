#pragma once

#include <algorithm>

#include "skolab/rng.hpp"
#include "skolab/step_path.hpp"

namespace skolab::testutil {

inline StepPath random_path(RngStream& rng, std::size_t dim, double horizon, std::size_t max_breaks,
                            double value_scale = 1.0) {
    const std::size_t k = 1 + rng.next_u64() % max_breaks;
    std::vector<double> bp{0.0};
    for (std::size_t i = 1; i < k; ++i) bp.push_back(horizon * rng.uniform_open());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    std::vector<Vec> vals;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        Vec v(dim);
        for (double& x : v) x = value_scale * (2.0 * rng.uniform01() - 1.0);
        vals.push_back(std::move(v));
    }
    return StepPath(dim, horizon, std::move(bp), std::move(vals));
}

/// Step path on a lattice grid; breakpoint times are exact multiples of 1/n.
inline StepPath random_grid_path(RngStream& rng, std::size_t n, double horizon) {
    std::vector<double> bp{0.0};
    std::vector<Vec> vals{{0.0}};
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        acc += (rng.coin() ? 1.0 : -1.0) / static_cast<double>(n);
        bp.push_back(horizon * static_cast<double>(k) / static_cast<double>(n));
        vals.push_back({acc});
    }
    return StepPath(1, horizon, std::move(bp), std::move(vals));
}

} // namespace skolab::testutil
