#include "pricedisc/distribution.hpp"

namespace pricedisc {

std::vector<std::pair<double, double>> upper_concave_hull(std::vector<std::pair<double, double>> points)
{
    points.emplace_back(0.0, 0.0);
    std::sort(points.begin(), points.end());
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : points) {
        // Keep only the highest point for a given x.
        if (!hull.empty() && hull.back().first == p.first) {
            if (p.second <= hull.back().second) continue;
            hull.pop_back();
        }
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    return hull;
}

double hull_value(const std::vector<std::pair<double, double>>& hull, double x)
{
    if (hull.empty()) throw InternalError("empty hull");
    if (x <= hull.front().first) return hull.front().second;
    for (size_t k = 1; k < hull.size(); ++k) {
        if (x <= hull[k].first) {
            const auto& [x0, y0] = hull[k - 1];
            const auto& [x1, y1] = hull[k];
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return hull.back().second;
}

} // namespace pricedisc
