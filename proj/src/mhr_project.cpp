#include "pricedisc/mhr_project.hpp"

#include <limits>

namespace pricedisc {

namespace {

Distribution with_quantiles(const Grid& grid, Vector<double> q)
{
    q(0) = 1.0;
    for (Index i = q.size() - 2; i >= 0; --i) q(i) = std::max(q(i), q(i + 1));
    return Distribution::from_quantiles(grid, q);
}

bool within_band(const Vector<double>& q, const QuantileBand& band, double tol = 1e-9)
{
    for (Index i = 1; i < q.size(); ++i)
        if (q(i) < band.lower(i) - tol || q(i) > band.upper(i) + tol) return false;
    return true;
}

Distribution clamp_to_band(const Distribution& d, const QuantileBand& band)
{
    Vector<double> q = d.quantiles();
    for (Index i = 1; i < q.size(); ++i) q(i) = std::clamp(q(i), band.lower(i), std::max(band.lower(i), band.upper(i)));
    return with_quantiles(d.grid(), q);
}

Projection search(const Distribution& emp, double eps, const MhrParams& params, const QuantileBand* band)
{
    Projection out;
    const Distribution shifted = dominated_shift(emp, eps);
    double best_ks = std::numeric_limits<double>::infinity();
    bool found = false;
    for (Index p = 0; p < emp.size(); ++p) {
        Distribution strengthened = strengthen_price(shifted, emp, p, eps);
        if (band) strengthened = clamp_to_band(strengthened, *band);
        GuessDiagnostic diag;
        diag.price = p;
        diag.candidate = iron(strengthened);
        diag.report = check_mhr_like(diag.candidate, params);
        diag.ks_to_input = ks_distance(diag.candidate, emp);
        if (band) diag.in_band = within_band(diag.candidate.quantiles(), *band);
        if (diag.report.mhr_like() && diag.in_band && diag.ks_to_input < best_ks) {
            best_ks = diag.ks_to_input;
            out.result = diag.candidate;
            out.guess = p;
            found = true;
        }
        out.guesses.push_back(std::move(diag));
    }
    if (!found) throw ProjectionFailed("no monopoly price guess yields an MHR-like distribution");
    return out;
}

} // namespace

Distribution dominated_shift(const Distribution& emp, double eps)
{
    if (eps < 0) throw DomainError("eps must be non-negative");
    Vector<double> q = (emp.quantiles().array() - eps).cwiseMax(0.0);
    return with_quantiles(emp.grid(), q);
}

Distribution strengthen_price(const Distribution& dist, const Distribution& emp, Index p_star, double eps)
{
    if (p_star < 0 || p_star >= dist.size()) throw DomainError("guessed price is off the grid");
    if (!(dist.grid() == emp.grid())) throw DomainError("distributions use different grids");
    Vector<double> q = dist.quantiles();
    const double target = std::min(emp.quantile_at(p_star) + eps, 1.0);
    if (target <= q(p_star)) return dist;
    for (Index i = 0; i <= p_star; ++i) q(i) = std::max(q(i), target);
    return with_quantiles(dist.grid(), q);
}

Distribution iron(const Distribution& dist)
{
    const Vector<double> q = dist.quantiles();
    const Vector<double>& price = dist.grid().values();
    std::vector<std::pair<double, double>> pts;
    for (Index i = 0; i < q.size(); ++i) pts.emplace_back(q(i), price(i) * q(i));
    const auto hull = upper_concave_hull(pts);
    const double tol = 1e-13;

    Vector<double> out = q;
    for (Index i = 0; i < q.size(); ++i) {
        const double p = price(i);
        double meet = hull.back().first;
        for (size_t k = 1; k < hull.size(); ++k) {
            const auto [x1, y1] = hull[k];
            if (y1 >= p * x1 - tol) continue;
            const auto [x0, y0] = hull[k - 1];
            const double s = (y1 - y0) / (x1 - x0);
            meet = (y0 - s * x0) / (p - s);
            break;
        }
        out(i) = std::clamp(std::max(q(i), meet), 0.0, 1.0);
    }
    return with_quantiles(dist.grid(), out);
}

Projection project_mhr_like(const Distribution& emp, double eps, const MhrParams& params)
{
    if (!emp.grid().is_scaled()) throw DomainError("projection needs a scaled value grid");
    return search(emp, eps, params, nullptr);
}

Projection project_mhr_like_in_band(const Distribution& anchor, double eps, const QuantileBand& band,
                                    const MhrParams& params)
{
    if (!anchor.grid().is_scaled()) throw DomainError("projection needs a scaled value grid");
    if (band.lower.size() != anchor.size() || band.upper.size() != anchor.size())
        throw DomainError("quantile band length does not match the grid");
    return search(anchor, eps, params, &band);
}

} // namespace pricedisc
