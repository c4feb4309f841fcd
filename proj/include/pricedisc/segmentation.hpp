#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pricedisc/market.hpp"

namespace pricedisc {

/// A point on the type simplex with its probability weight. `price` is the
/// intended grid price index, when one was assigned.
template <class Scalar>
struct BasicSegment {
    Vector<Scalar> x;
    Scalar w;
    std::optional<Index> price;
};

template <class Scalar>
struct BasicSegmentation {
    std::vector<BasicSegment<Scalar>> segments;

    size_t size() const { return segments.size(); }

    Vector<Scalar> centroid(Index T) const
    {
        Vector<Scalar> c = Vector<Scalar>::Zero(T);
        for (const auto& s : segments) c += s.w * s.x;
        return c;
    }

    Scalar total_weight() const
    {
        Scalar acc(0);
        for (const auto& s : segments) acc += s.w;
        return acc;
    }
};

/// Row t is the distribution of the segment label for type t.
template <class Scalar>
struct BasicSegmentMap {
    Matrix<Scalar> G;
};

using Segment = BasicSegment<double>;
using Segmentation = BasicSegmentation<double>;
using SegmentMap = BasicSegmentMap<double>;

/// Checks simplex points, weights and the centroid constraint.
template <class Scalar>
void validate(const BasicMarket<Scalar>& market, const BasicSegmentation<Scalar>& seg, double tol = 1e-9)
{
    const Index T = market.num_types();
    Scalar total(0);
    for (const auto& s : seg.segments) {
        if (s.x.size() != T) throw DomainError("segment point has the wrong number of types");
        for (Index t = 0; t < T; ++t)
            if (to_double(s.x(t)) < -tol) throw DomainError("segment point has a negative coordinate");
        if (std::abs(to_double(Scalar(s.x.sum() - Scalar(1)))) > tol) throw DomainError("segment point does not sum to one");
        if (to_double(s.w) < -tol) throw DomainError("segment weight is negative");
        if (s.price && (*s.price < 0 || *s.price >= market.num_values()))
            throw DomainError("segment price index is off the grid");
        total += s.w;
    }
    if (std::abs(to_double(Scalar(total - Scalar(1)))) > tol) throw DomainError("segment weights do not sum to one");
    const Vector<Scalar> c = seg.centroid(T);
    for (Index t = 0; t < T; ++t)
        if (std::abs(to_double(Scalar(c(t) - market.prior()(t)))) > tol)
            throw DomainError("segmentation centroid differs from the type prior");
}

template <class Scalar>
BasicSegmentation<Scalar> segmap_to_measure(const BasicMarket<Scalar>& market, const BasicSegmentMap<Scalar>& map)
{
    const Index T = market.num_types();
    if (map.G.rows() != T) throw DomainError("segment map needs one row per type");
    for (Index t = 0; t < T; ++t) {
        const Vector<Scalar> row = map.G.row(t).transpose();
        BasicMarket<Scalar>::check_simplex(row, "segment map row");
    }
    const Vector<Scalar>& tau = market.prior();
    BasicSegmentation<Scalar> out;
    for (Index s = 0; s < map.G.cols(); ++s) {
        const Vector<Scalar> joint = tau.cwiseProduct(map.G.col(s));
        const Scalar w = joint.sum();
        if (!(w > Scalar(0))) continue;
        out.segments.push_back({joint / w, w, std::nullopt});
    }
    return out;
}

template <class Scalar>
BasicSegmentMap<Scalar> measure_to_segmap(const BasicMarket<Scalar>& market, const BasicSegmentation<Scalar>& seg)
{
    const Index T = market.num_types();
    const Vector<Scalar>& tau = market.prior();
    for (Index t = 0; t < T; ++t)
        if (!(tau(t) > Scalar(0))) throw DomainError("segment map is undefined for a type with zero prior");
    BasicSegmentMap<Scalar> map{Matrix<Scalar>(T, static_cast<Index>(seg.size()))};
    for (size_t s = 0; s < seg.size(); ++s) {
        const auto& sg = seg.segments[s];
        map.G.col(static_cast<Index>(s)) = (sg.x * sg.w).cwiseQuotient(tau);
    }
    return map;
}

/// Monopoly price index of the posterior at x.
template <class Scalar>
Index region_of(const BasicMarket<Scalar>& market, const Vector<Scalar>& x, TieBreak tie = TieBreak::low)
{
    return argmax_revenue<Scalar>(market.revenues_at(x), tie);
}

/// Merges segments sharing a region into their barycenter and drops
/// segments lighter than 1e-12. Intended prices are set to the region.
template <class Scalar>
BasicSegmentation<Scalar> consolidate(const BasicMarket<Scalar>& market, const BasicSegmentation<Scalar>& seg,
                                      TieBreak tie = TieBreak::low)
{
    const Index V = market.num_values(), T = market.num_types();
    std::vector<Vector<Scalar>> mass(static_cast<size_t>(V), Vector<Scalar>::Zero(T));
    std::vector<Scalar> weight(static_cast<size_t>(V), Scalar(0));
    for (const auto& s : seg.segments) {
        const Index p = region_of(market, s.x, tie);
        mass[static_cast<size_t>(p)] += s.w * s.x;
        weight[static_cast<size_t>(p)] += s.w;
    }
    const Scalar floor = ScalarTraits<Scalar>::exact ? Scalar(0) : ScalarTraits<Scalar>::from_double(1e-12);
    BasicSegmentation<Scalar> out;
    for (Index p = 0; p < V; ++p) {
        const Scalar w = weight[static_cast<size_t>(p)];
        if (!(w > floor)) continue;
        out.segments.push_back({mass[static_cast<size_t>(p)] / w, w, p});
    }
    return out;
}

struct TrueMonopoly {
    TieBreak tie = TieBreak::low;
};

/// One grid price index per segment, in segment order.
struct FixedPrices {
    std::vector<Index> prices;
};

/// Intended prices stored on the segments.
struct IntendedPrices {};

/// The seller prices each segment by the monopoly price of its believed
/// posterior, built from per-type beliefs.
template <class Scalar>
struct BeliefMonopoly {
    std::vector<BasicDistribution<Scalar>> beliefs;
    TieBreak tie = TieBreak::low;
};

/// Among prices whose true revenue is within `slack` of the optimum, the
/// seller picks the one worst for the intermediary objective.
template <class Scalar>
struct AdversarialMonopoly {
    Scalar slack = Scalar(0);
};

template <class Scalar>
using PricingRule = std::variant<TrueMonopoly, FixedPrices, IntendedPrices, BeliefMonopoly<Scalar>, AdversarialMonopoly<Scalar>>;

template <class Scalar>
struct BasicOutcome {
    Scalar revenue{0};
    Scalar cs{0};
    Scalar sw{0};
    Scalar objective{0};
    /// Price index posted in every segment.
    std::vector<Index> prices;
};

using Outcome = BasicOutcome<double>;

template <class Scalar>
Scalar mix_objective(const Scalar& revenue, const Scalar& cs, const Scalar& lambda)
{
    return lambda * revenue + (Scalar(1) - lambda) * cs;
}

/// Price index the rule posts in a segment at x.
template <class Scalar>
Index posted_price(const BasicMarket<Scalar>& market, const BasicSegment<Scalar>& seg, size_t index,
                   const PricingRule<Scalar>& rule, const Scalar& lambda)
{
    return std::visit(
        [&](const auto& r) -> Index {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, TrueMonopoly>) {
                return region_of(market, seg.x, r.tie);
            } else if constexpr (std::is_same_v<R, FixedPrices>) {
                if (index >= r.prices.size()) throw DomainError("fixed pricing rule has too few prices");
                return r.prices[index];
            } else if constexpr (std::is_same_v<R, IntendedPrices>) {
                if (!seg.price) throw DomainError("segment has no intended price");
                return *seg.price;
            } else if constexpr (std::is_same_v<R, BeliefMonopoly<Scalar>>) {
                if (static_cast<Index>(r.beliefs.size()) != market.num_types())
                    throw DomainError("belief pricing rule needs one belief per type");
                const auto believed = mixture<Scalar>(seg.x, std::span<const BasicDistribution<Scalar>>(r.beliefs));
                return monopoly_index(believed, r.tie);
            } else {
                const Vector<Scalar> rev = market.revenues_at(seg.x);
                const Vector<Scalar> cs = market.surpluses_at(seg.x);
                const Scalar best = rev.maxCoeff();
                const Scalar tol = ScalarTraits<Scalar>::tie_tolerance();
                Index worst = -1;
                Scalar worst_obj(0);
                for (Index i = 0; i < rev.size(); ++i) {
                    if (rev(i) < best - r.slack - tol) continue;
                    const Scalar obj = mix_objective<Scalar>(rev(i), cs(i), lambda);
                    if (worst < 0 || obj < worst_obj) {
                        worst = i;
                        worst_obj = obj;
                    }
                }
                return worst;
            }
        },
        rule);
}

template <class Scalar>
BasicOutcome<Scalar> evaluate(const BasicMarket<Scalar>& market, const BasicSegmentation<Scalar>& seg,
                              const PricingRule<Scalar>& rule, const Scalar& lambda)
{
    BasicOutcome<Scalar> out;
    for (size_t s = 0; s < seg.size(); ++s) {
        const auto& sg = seg.segments[s];
        const Index p = posted_price(market, sg, s, rule, lambda);
        out.prices.push_back(p);
        out.revenue += sg.w * sg.x.dot(market.revenue_table().col(p));
        out.cs += sg.w * sg.x.dot(market.surplus_table().col(p));
    }
    out.sw = out.revenue + out.cs;
    out.objective = mix_objective(out.revenue, out.cs, lambda);
    return out;
}

/// The single segment at the prior.
template <class Scalar>
BasicSegmentation<Scalar> trivial_segmentation(const BasicMarket<Scalar>& market)
{
    return {{{market.prior(), Scalar(1), std::nullopt}}};
}

/// One segment per type at the simplex vertex.
template <class Scalar>
BasicSegmentation<Scalar> full_reveal(const BasicMarket<Scalar>& market)
{
    BasicSegmentation<Scalar> out;
    for (Index t = 0; t < market.num_types(); ++t) {
        if (!(market.prior()(t) > Scalar(0))) continue;
        Vector<Scalar> e = Vector<Scalar>::Zero(market.num_types());
        e(t) = Scalar(1);
        out.segments.push_back({std::move(e), market.prior()(t), std::nullopt});
    }
    return out;
}

} // namespace pricedisc
