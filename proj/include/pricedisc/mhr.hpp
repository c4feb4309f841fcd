#pragma once

#include <array>
#include <numbers>

#include "pricedisc/distribution.hpp"

namespace pricedisc {

struct MhrParams {
    double strong_concavity = 0.25;
    double min_sale_probability = 1.0 / std::numbers::e;
    double min_revenue_ratio = 1.0 / std::numbers::e;
    /// Allowed distance below the concave envelope.
    double concavity_tolerance = 1e-10;
    double tolerance = 1e-12;
};

struct MhrReport {
    bool concave = false;
    bool strong_concave = false;
    bool monopoly_sale_prob_ok = false;
    bool revenue_welfare_ok = false;
    /// Signed slack per condition, in the order above; negative means violated.
    std::array<double, 4> worst_margins{};

    bool mhr_like() const { return concave && strong_concave && monopoly_sale_prob_ok && revenue_welfare_ok; }
};

/// Requires a scaled grid.
MhrReport check_mhr_like(const Distribution& dist, const MhrParams& params = {});

/// Signed distance of every interior revenue-curve point (0 < q < 1) to the
/// upper concave envelope of the curve and the origin; the minimum over
/// points, or 0 when there are none.
double concavity_margin(const Distribution& dist);

} // namespace pricedisc
