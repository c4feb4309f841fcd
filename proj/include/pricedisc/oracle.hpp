#pragma once

#include "pricedisc/market.hpp"

namespace pricedisc {

struct OracleResult {
    double objective = 0.0;
    /// Number of simplex grid points evaluated.
    Index candidates = 0;
};

/// Brute-force optimal segmentation value for T <= 3: evaluates the
/// intermediary objective (ties resolved in the intermediary's favor) on
/// every point of the simplex grid with the given resolution and takes the
/// concave envelope of those values at the prior.
OracleResult brute_force_oracle(const Market& market, double lambda, int resolution = 60);

} // namespace pricedisc
