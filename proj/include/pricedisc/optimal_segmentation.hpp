#pragma once

#include "pricedisc/lp.hpp"
#include "pricedisc/segmentation.hpp"

namespace pricedisc {

template <class Scalar>
struct BasicOptimalSegmentation {
    BasicSegmentation<Scalar> segmentation;
    /// LP value; equals evaluation of the segmentation at its intended prices.
    Scalar objective{0};
};

using OptimalSegmentation = BasicOptimalSegmentation<double>;

/// LP over the cone variables z[p][t] = w_p · x_p[t]: each z_p stays in the
/// closed cone where p is revenue-optimal, the z_p sum to the prior, and the
/// objective mixes revenue and consumer surplus at the intended prices.
template <class Scalar>
LinearProgram<Scalar> segmentation_lp(const BasicMarket<Scalar>& market, const Scalar& lambda)
{
    const Index T = market.num_types(), V = market.num_values();
    const Matrix<Scalar>& rev = market.revenue_table();
    const Matrix<Scalar>& cs = market.surplus_table();
    const auto var = [T](Index p, Index t) { return p * T + t; };

    LinearProgram<Scalar> lp;
    lp.objective.resize(V * T);
    for (Index p = 0; p < V; ++p)
        for (Index t = 0; t < T; ++t) lp.objective(var(p, t)) = mix_objective<Scalar>(rev(t, p), cs(t, p), lambda);

    lp.ub_matrix = Matrix<Scalar>::Zero(V * (V - 1), V * T);
    lp.ub_rhs = Vector<Scalar>::Zero(V * (V - 1));
    Index row = 0;
    for (Index p = 0; p < V; ++p)
        for (Index q = 0; q < V; ++q) {
            if (q == p) continue;
            for (Index t = 0; t < T; ++t) lp.ub_matrix(row, var(p, t)) = rev(t, q) - rev(t, p);
            ++row;
        }

    lp.eq_matrix = Matrix<Scalar>::Zero(T, V * T);
    lp.eq_rhs = market.prior();
    for (Index t = 0; t < T; ++t)
        for (Index p = 0; p < V; ++p) lp.eq_matrix(t, var(p, t)) = Scalar(1);
    return lp;
}

template <class Scalar>
BasicOptimalSegmentation<Scalar> optimal_segmentation(const BasicMarket<Scalar>& market, const Scalar& lambda)
{
    if (lambda < Scalar(0) || lambda > Scalar(1)) throw DomainError("lambda must lie in [0, 1]");
    const Index T = market.num_types(), V = market.num_values();
    const LpSolution<Scalar> sol = solve_lp(segmentation_lp(market, lambda));
    if (sol.status != LpStatus::optimal)
        throw InternalError("segmentation LP reported " + to_string(sol.status));

    BasicOptimalSegmentation<Scalar> out;
    const Scalar floor = ScalarTraits<Scalar>::segment_weight_floor();
    Scalar total(0);
    for (Index p = 0; p < V; ++p) {
        const Vector<Scalar> z = sol.x.segment(p * T, T);
        const Scalar w = z.sum();
        if (!(w > floor)) continue;
        out.segmentation.segments.push_back({z / w, w, p});
        total += w;
    }
    if constexpr (!ScalarTraits<Scalar>::exact)
        for (auto& s : out.segmentation.segments) s.w /= total;
    out.objective = evaluate<Scalar>(market, out.segmentation, IntendedPrices{}, lambda).objective;
    return out;
}

} // namespace pricedisc
