#include "pricedisc/robustify.hpp"

#include <cmath>
#include <limits>

namespace pricedisc {

namespace {

constexpr double kTie = 1e-12;

Vector<double> vertex(Index T, Index t)
{
    Vector<double> e = Vector<double>::Zero(T);
    e(t) = 1.0;
    return e;
}

Vector<double> move_toward(const Vector<double>& x, Index t, double eps_I)
{
    const double a = eps_I / static_cast<double>(x.size());
    return (1.0 - a) * x + a * vertex(x.size(), t);
}

std::vector<Index> eps_optimal_prices(const Vector<double>& rev, double window)
{
    const double best = rev.maxCoeff();
    std::vector<Index> out;
    for (Index i = 0; i < rev.size(); ++i)
        if (rev(i) >= best - window - kTie) out.push_back(i);
    return out;
}

} // namespace

EpsilonSchedule epsilon_schedule(double eps_S, Index T, Index V, std::optional<double> log_v)
{
    if (!(eps_S > 0)) throw DomainError("eps_S must be positive");
    if (T < 1 || V < 1) throw DomainError("schedule needs T >= 1 and V >= 1");
    const double lv = log_v ? *log_v : std::log(static_cast<double>(V));
    if (lv < 0) throw DomainError("log V must be non-negative");
    const double bound = std::pow(eps_S, 1.0 / 6) * std::pow(static_cast<double>(T), 2.0 / 3) * std::pow(lv, 1.0 / 6);
    const double eps_I = std::max(bound, eps_S);
    if (eps_I >= 1.0)
        throw ScheduleError("eps_I = " + std::to_string(eps_I) + " is not below 1 for eps_S = " + std::to_string(eps_S));
    return {eps_S, eps_I, eps_S * static_cast<double>(T) / eps_I};
}

EpsilonSchedule explicit_schedule(double eps_S, double eps_I, Index T)
{
    if (!(eps_S > 0)) throw DomainError("eps_S must be positive");
    if (eps_I < eps_S) throw DomainError("eps_I must be at least eps_S");
    if (eps_I >= 1.0) throw ScheduleError("eps_I must be below 1");
    return {eps_S, eps_I, eps_S * static_cast<double>(T) / eps_I};
}

double robustness_margin(const Market& market, const Vector<double>& x, Index p_star, double window, double eps_I)
{
    const Vector<double> rev = market.revenues_at(x);
    const Vector<double> q = market.posterior(x).quantiles();
    double margin = std::numeric_limits<double>::infinity();
    for (Index p : eps_optimal_prices(rev, window)) margin = std::min(margin, q(p) - (q(p_star) - eps_I));
    return margin;
}

Index find_robust_type(const Market& market, const Vector<double>& x, Index p_star, const EpsilonSchedule& schedule)
{
    const Index T = market.num_types(), V = market.num_values();
    if (x.size() != T) throw DomainError("segment point has the wrong number of types");
    if (p_star < 0 || p_star >= V) throw DomainError("intended price is off the grid");
    const Vector<double> q = market.posterior(x).quantiles();
    std::vector<Index> low_quantile;
    for (Index p = 0; p < V; ++p)
        if (q(p) <= q(p_star) - schedule.eps_I) low_quantile.push_back(p);

    const Matrix<double>& rev = market.revenue_table();
    std::vector<Index> candidates;
    for (Index t = 0; t < T; ++t) {
        bool ok = true;
        for (Index p : low_quantile)
            if (!(rev(t, p) < rev(t, p_star) - schedule.eps_R)) {
                ok = false;
                break;
            }
        if (ok) candidates.push_back(t);
    }
    if (candidates.empty())
        throw NoRobustType("no type separates the intended price from low-quantile prices by eps_R");
    for (Index t : candidates) {
        const Vector<double> moved = move_toward(x, t, schedule.eps_I);
        if (robustness_margin(market, moved, p_star, schedule.eps_S, schedule.eps_I) >= -kTie) return t;
    }
    return candidates.front();
}

Vector<double> robustify_segment(const Market& market, const Vector<double>& x, Index p_star,
                                 const EpsilonSchedule& schedule)
{
    return move_toward(x, find_robust_type(market, x, p_star, schedule), schedule.eps_I);
}

RobustifiedSegmentation robustify_segmentation(const Market& market, const Segmentation& segmentation,
                                               const std::vector<Index>& intended_prices,
                                               const EpsilonSchedule& schedule, const RobustifyOptions& options)
{
    if (!market.prior_is_uniform()) throw DomainError("robustification requires a uniform type prior");
    const Index T = market.num_types();
    RobustifiedSegmentation out;
    out.schedule = schedule;
    out.base = segmentation;
    const size_t n = segmentation.size();
    if (!intended_prices.empty() && intended_prices.size() != n)
        throw DomainError("intended prices must list one price per segment");

    for (size_t s = 0; s < n; ++s) {
        auto& seg = out.base.segments[s];
        if (!intended_prices.empty()) seg.price = intended_prices[s];
        if (!seg.price) throw DomainError("segment " + std::to_string(s) + " has no intended price");
        const Index p = *seg.price;
        out.intended_prices.push_back(p);

        const bool insignificant = expected_value(market.posterior(seg.x)) < schedule.eps_I;
        out.insignificant.push_back(insignificant);
        Vector<double> x = seg.x;
        std::optional<Index> robust_type;
        if (!insignificant) {
            try {
                robust_type = find_robust_type(market, seg.x, p, schedule);
                x = move_toward(seg.x, *robust_type, schedule.eps_I);
            } catch (const NoRobustType&) {
                if (!options.keep_unmovable) throw;
            }
        }
        out.robust_types.push_back(robust_type);
        out.robust.segments.push_back({std::move(x), (1.0 - schedule.eps_I) * seg.w, p});
    }

    const double share = 1.0 / static_cast<double>(T);
    for (Index t = 0; t < T; ++t) {
        double w = share;
        for (size_t s = 0; s < n; ++s) w -= out.robust.segments[s].w * out.robust.segments[s].x(t);
        if (w < -1e-10) throw InternalError("vertex segment weight is negative");
        w = std::max(w, 0.0);
        const Vector<double> e = vertex(T, t);
        out.robust.segments.push_back({e, w, region_of(market, e)});
    }
    return out;
}

RobustnessReport audit_robustness(const Market& market, const RobustifiedSegmentation& rob,
                                  const EpsilonSchedule& schedule, const AuditOptions& options)
{
    RobustnessReport rep;
    const size_t n = rob.base.size();
    if (rob.robust.size() < n || rob.intended_prices.size() != n || rob.insignificant.size() != n)
        throw DomainError("robustified segmentation is inconsistent with its base");
    const double window = options.optimality_multiplier * schedule.eps_S;

    for (size_t s = 0; s < n; ++s) {
        const auto& b = rob.base.segments[s];
        const auto& r = rob.robust.segments[s];
        SegmentAudit a;
        a.index = s;
        a.significant = expected_value(market.posterior(b.x)) >= schedule.eps_I;
        a.weight_margin = r.w - (1.0 - schedule.eps_I) * b.w;
        a.mixture_margin = schedule.eps_I - (b.x - r.x).cwiseAbs().sum();
        a.robust_margin = robustness_margin(market, r.x, rob.intended_prices[s], window, schedule.eps_I);
        if (a.significant) {
            a.weight_ok = a.weight_margin >= -kTie;
            a.mixture_ok = a.mixture_margin >= -kTie;
            a.robust_ok = a.robust_margin >= -kTie;
        }
        rep.weights_ok = rep.weights_ok && a.weight_ok;
        rep.mixtures_ok = rep.mixtures_ok && a.mixture_ok;
        rep.robustness_ok = rep.robustness_ok && a.robust_ok;
        rep.segments.push_back(a);
    }

    const Vector<double> c = rob.robust.centroid(market.num_types());
    rep.centroid_error = (c - market.prior()).cwiseAbs().maxCoeff();
    rep.centroid_error = std::max(rep.centroid_error, std::abs(rob.robust.total_weight() - 1.0));
    rep.centroid_ok = rep.centroid_error <= options.centroid_tolerance;

    for (size_t s = 0; s < n; ++s) {
        const auto& b = rob.base.segments[s];
        const Index p = rob.intended_prices[s];
        const double rev = b.x.dot(market.revenue_table().col(p));
        rep.base_revenue += b.w * rev;
        rep.base_sw += b.w * (rev + b.x.dot(market.surplus_table().col(p)));
    }
    for (const auto& r : rob.robust.segments) {
        const Vector<double> rev = market.revenues_at(r.x);
        const Vector<double> cs = market.surpluses_at(r.x);
        double sw_min = std::numeric_limits<double>::infinity();
        double rev_min = sw_min, rev_max = -sw_min;
        for (Index p : eps_optimal_prices(rev, window)) {
            sw_min = std::min(sw_min, rev(p) + cs(p));
            rev_min = std::min(rev_min, rev(p));
            rev_max = std::max(rev_max, rev(p));
        }
        rep.worst_sw += r.w * sw_min;
        rep.min_revenue += r.w * rev_min;
        rep.max_revenue += r.w * rev_max;
    }
    rep.sw_constant = std::max(0.0, rep.base_sw - rep.worst_sw) / schedule.eps_I;
    rep.revenue_constant =
        std::max(std::abs(rep.max_revenue - rep.base_revenue), std::abs(rep.min_revenue - rep.base_revenue)) /
        schedule.eps_I;
    return rep;
}

} // namespace pricedisc
