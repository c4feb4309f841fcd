#include "pricedisc/mhr.hpp"

#include <limits>

namespace pricedisc {

double concavity_margin(const Distribution& dist)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& pt : revenue_curve(dist)) pts.emplace_back(pt.quantile, pt.revenue);
    const auto hull = upper_concave_hull(pts);
    double margin = 0.0;
    for (const auto& [q, rev] : pts) {
        if (q <= 0.0 || q >= 1.0) continue;
        margin = std::min(margin, rev - hull_value(hull, q));
    }
    return margin;
}

MhrReport check_mhr_like(const Distribution& dist, const MhrParams& params)
{
    if (!dist.grid().is_scaled()) throw DomainError("MHR-like check needs a scaled value grid");
    MhrReport r;

    r.worst_margins[0] = concavity_margin(dist);
    r.concave = r.worst_margins[0] >= -params.concavity_tolerance;

    const Vector<double> q = dist.quantiles();
    const Vector<double> rev = revenues(dist);
    const Index star = argmax_revenue<double>(rev, TieBreak::low);
    const double q_star = q(star);
    const double rev_star = rev(star);

    double sc = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < rev.size(); ++i) {
        if (i == star) continue;
        const double gap = q_star - q(i);
        sc = std::min(sc, (1.0 - params.strong_concavity * gap * gap) * rev_star - rev(i));
    }
    r.worst_margins[1] = rev.size() > 1 ? sc : 0.0;
    r.strong_concave = r.worst_margins[1] >= -params.tolerance;

    r.worst_margins[2] = q_star - params.min_sale_probability;
    r.monopoly_sale_prob_ok = r.worst_margins[2] >= -params.tolerance;

    r.worst_margins[3] = rev_star - params.min_revenue_ratio * expected_value(dist);
    r.revenue_welfare_ok = r.worst_margins[3] >= -params.tolerance;
    return r;
}

} // namespace pricedisc
