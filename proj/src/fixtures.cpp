#include "pricedisc/fixtures.hpp"

#include <cmath>

namespace pricedisc::fixtures {

Market near_equal_revenue(double delta)
{
    const auto g = Grid::from_values((Vector<double>(2) << 0.5, 1.0).finished());
    return Market({Distribution(g, (Vector<double>(2) << 0.5 + delta, 0.5 - delta).finished())},
                  Vector<double>::Ones(1));
}

Market scaled_pointmass(Index T)
{
    const auto g = Grid::scaled(T);
    std::vector<Distribution> types;
    for (Index t = 0; t < T; ++t) types.push_back(Distribution::pointmass(g, t));
    return Market(std::move(types), Vector<double>::Constant(T, 1.0 / static_cast<double>(T)));
}

Market plateau()
{
    const auto g = Grid::scaled(4);
    return Market({Distribution::pointmass(g, 0), Distribution::pointmass(g, 3)}, Vector<double>::Constant(2, 0.5));
}

namespace {

// Mass of (i/V - 1/V, i/V] under a law on [0,1] given by its CDF.
template <class Cdf>
Distribution discretize(Index V, Cdf cdf)
{
    const auto g = Grid::scaled(V);
    Vector<double> pmf(V);
    const double lo = cdf(0.0), hi = cdf(1.0);
    for (Index i = 0; i < V; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(V);
        const double b = static_cast<double>(i + 1) / static_cast<double>(V);
        pmf(i) = (cdf(b) - cdf(a)) / (hi - lo);
    }
    pmf = pmf.cwiseMax(0.0);
    pmf(0) += std::max(0.0, 1.0 - pmf.sum());
    pmf /= pmf.sum();
    return Distribution(g, pmf);
}

Distribution draw_family(std::mt19937_64& rng, Index V)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double kind = u(rng);
    if (kind < 0.1) {
        std::uniform_int_distribution<Index> at(0, V - 1);
        return Distribution::pointmass(Grid::scaled(V), at(rng));
    }
    if (kind < 0.4) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 1e-3) b = std::min(1.0, a + 1e-3);
        return discretize(V, [a, b](double x) { return std::clamp((x - a) / (b - a), 0.0, 1.0); });
    }
    if (kind < 0.7) {
        const double shift = 0.6 * u(rng);
        const double rate = 1.0 + 9.0 * u(rng);
        return discretize(V, [shift, rate](double x) { return x <= shift ? 0.0 : 1.0 - std::exp(-rate * (x - shift)); });
    }
    const double mu = u(rng);
    const double sigma = 0.05 + 0.3 * u(rng);
    return discretize(V, [mu, sigma](double x) { return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0))); });
}

} // namespace

Distribution random_mhr_like(std::mt19937_64& rng, Index V, const MhrParams& params)
{
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Distribution d = draw_family(rng, V);
        if (check_mhr_like(d, params).mhr_like()) return d;
    }
    throw InternalError("could not draw an MHR-like distribution");
}

Market random_mhr_market(std::mt19937_64& rng, Index T, Index V)
{
    std::vector<Distribution> types;
    for (Index t = 0; t < T; ++t) types.push_back(random_mhr_like(rng, V));
    return Market(std::move(types), Vector<double>::Constant(T, 1.0 / static_cast<double>(T)));
}

Market random_market(std::mt19937_64& rng, Index T, Index V)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector<double> values(V);
    double acc = 0;
    for (Index i = 0; i < V; ++i) {
        acc += 0.1 + u(rng);
        values(i) = acc;
    }
    const auto g = Grid::from_values(values);
    std::vector<Distribution> types;
    for (Index t = 0; t < T; ++t) {
        Vector<double> pmf(V);
        for (Index i = 0; i < V; ++i) pmf(i) = u(rng) < 0.25 ? 0.0 : u(rng);
        if (pmf.sum() == 0.0) pmf(0) = 1.0;
        types.emplace_back(g, pmf / pmf.sum());
    }
    Vector<double> prior(T);
    for (Index t = 0; t < T; ++t) prior(t) = 0.1 + u(rng);
    return Market(std::move(types), prior / prior.sum());
}

} // namespace pricedisc::fixtures
