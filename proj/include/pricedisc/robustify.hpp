#pragma once

#include <optional>
#include <vector>

#include "pricedisc/segmentation.hpp"

namespace pricedisc {

struct EpsilonSchedule {
    /// Seller belief error.
    double eps_S = 0.0;
    /// Intermediary target; also the significance threshold and move size.
    double eps_I = 0.0;
    /// Revenue gap the robust type must have: eps_S·T/eps_I.
    double eps_R = 0.0;
};

/// eps_I = max(eps_S^{1/6} T^{2/3} (ln V)^{1/6}, eps_S). `log_v` replaces
/// ln V when given. Throws ScheduleError when eps_I >= 1.
EpsilonSchedule epsilon_schedule(double eps_S, Index T, Index V, std::optional<double> log_v = std::nullopt);

/// Schedule with an explicit eps_I. Requires 0 < eps_S <= eps_I < 1.
EpsilonSchedule explicit_schedule(double eps_S, double eps_I, Index T);

/// First type whose revenue at p* beats, by more than eps_R, every price
/// whose quantile under the segment is at least eps_I below that of p*.
/// When several types qualify, a type whose moved segment also keeps every
/// eps_S-optimal price within eps_I of p*'s quantile is preferred.
/// Throws NoRobustType when no type qualifies.
Index find_robust_type(const Market& market, const Vector<double>& x, Index p_star, const EpsilonSchedule& schedule);

/// (1 - eps_I/T)·x + (eps_I/T)·e_t for the robust type t.
Vector<double> robustify_segment(const Market& market, const Vector<double>& x, Index p_star,
                                 const EpsilonSchedule& schedule);

struct RobustifiedSegmentation {
    /// Input segmentation with its intended prices.
    Segmentation base;
    /// base.size() moved segments in base order, then one vertex segment per type.
    Segmentation robust;
    std::vector<Index> intended_prices;
    std::vector<bool> insignificant;
    /// Robust type of each significant segment.
    std::vector<std::optional<Index>> robust_types;
    EpsilonSchedule schedule;
};

struct RobustifyOptions {
    /// Leave a significant segment unmoved when no robust type exists,
    /// instead of raising NoRobustType.
    bool keep_unmovable = false;
};

/// Requires a uniform type prior. Base segments must carry intended prices
/// or `intended_prices` must list one per segment.
RobustifiedSegmentation robustify_segmentation(const Market& market, const Segmentation& segmentation,
                                               const std::vector<Index>& intended_prices,
                                               const EpsilonSchedule& schedule, const RobustifyOptions& options = {});

struct SegmentAudit {
    size_t index = 0;
    bool significant = false;
    bool weight_ok = true;
    bool mixture_ok = true;
    bool robust_ok = true;
    double weight_margin = 0.0;
    double mixture_margin = 0.0;
    /// min over eps_S-optimal prices of q(p) - (q(p*) - eps_I).
    double robust_margin = 0.0;
};

struct RobustnessReport {
    std::vector<SegmentAudit> segments;
    bool weights_ok = true;
    bool mixtures_ok = true;
    bool robustness_ok = true;
    bool centroid_ok = true;
    double centroid_error = 0.0;
    /// Base welfare and revenue at the intended prices.
    double base_sw = 0.0;
    double base_revenue = 0.0;
    /// Robust welfare under the welfare-minimizing eps_S-optimal prices.
    double worst_sw = 0.0;
    /// Robust revenue range over eps_S-optimal price choices.
    double min_revenue = 0.0;
    double max_revenue = 0.0;
    /// (base_sw - worst_sw)^+ / eps_I.
    double sw_constant = 0.0;
    /// max |robust revenue - base revenue| / eps_I.
    double revenue_constant = 0.0;

    bool passed() const { return weights_ok && mixtures_ok && robustness_ok && centroid_ok; }
};

struct AuditOptions {
    /// Prices within multiplier·eps_S of the optimum count as eps_S-optimal.
    double optimality_multiplier = 1.0;
    double centroid_tolerance = 1e-9;
};

RobustnessReport audit_robustness(const Market& market, const RobustifiedSegmentation& rob,
                                  const EpsilonSchedule& schedule, const AuditOptions& options = {});

/// Condition 3 margin for a single segment point against intended price p*.
double robustness_margin(const Market& market, const Vector<double>& x, Index p_star, double eps_S_window,
                         double eps_I);

} // namespace pricedisc
