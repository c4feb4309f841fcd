#include "pricedisc/bandit.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pricedisc {

namespace {

constexpr double kTie = 1e-12;

double raw_upper(const ConfidenceState& s, Index v, Index t)
{
    const double n = s.trials(v, t);
    if (n == 0) return 1.0;
    return s.successes(v, t) / n + std::sqrt(s.C() / n);
}

double raw_lower(const ConfidenceState& s, Index v, Index t)
{
    const double n = s.trials(v, t);
    if (n == 0) return 0.0;
    return s.successes(v, t) / n - std::sqrt(s.C() / n);
}

void check_segment(const ConfidenceState& state, const Vector<double>& x)
{
    if (x.size() != state.num_types()) throw DomainError("segment point has the wrong number of types");
}

Vector<double> revenue_bound(const ConfidenceState& state, const Grid& grid, const Vector<double>& x, bool upper)
{
    check_segment(state, x);
    if (grid.size() != state.num_values()) throw DomainError("grid does not match the confidence state");
    Vector<double> out = Vector<double>::Zero(grid.size());
    for (Index t = 0; t < state.num_types(); ++t) {
        if (x(t) == 0) continue;
        const QuantileBand b = type_band(state, t);
        out += x(t) * (upper ? b.upper : b.lower);
    }
    return out.cwiseProduct(grid.values());
}

Index argmax_low(const Vector<double>& v)
{
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (v(i) > v(best) + kTie) best = i;
    return best;
}

Market uniform_market(std::vector<Distribution> types)
{
    const Index T = static_cast<Index>(types.size());
    return Market(std::move(types), Vector<double>::Constant(T, 1.0 / static_cast<double>(T)));
}

} // namespace

ConfidenceState::ConfidenceState(Index V, Index T, double C)
    : trials_(Matrix<double>::Zero(V, T)), successes_(Matrix<double>::Zero(V, T)), C_(C)
{
    if (V < 1 || T < 1) throw DomainError("confidence state needs V >= 1 and T >= 1");
    if (!(C > 0)) throw DomainError("confidence constant must be positive");
}

void ConfidenceState::record(Index v, Index t, bool bought)
{
    if (v < 0 || v >= num_values() || t < 0 || t >= num_types()) throw DomainError("observation is off the grid");
    trials_(v, t) += 1.0;
    if (bought) successes_(v, t) += 1.0;
}

QuantileBand type_band(const ConfidenceState& state, Index t)
{
    const Index V = state.num_values();
    if (t < 0 || t >= state.num_types()) throw DomainError("type index out of range");
    QuantileBand b{Vector<double>::Ones(V), Vector<double>::Ones(V)};
    double run = 1.0;
    for (Index v = 1; v < V; ++v) {
        run = std::min(run, raw_upper(state, v, t));
        b.upper(v) = std::clamp(run, 0.0, 1.0);
    }
    run = 0.0;
    for (Index v = V - 1; v >= 1; --v) {
        run = std::max(run, raw_lower(state, v, t));
        b.lower(v) = std::min(std::clamp(run, 0.0, 1.0), b.upper(v));
    }
    return b;
}

ConfidenceBounds confidence_bounds(const ConfidenceState& state, Index v, Index t)
{
    if (v < 0 || v >= state.num_values()) throw DomainError("value index out of range");
    const QuantileBand b = type_band(state, t);
    return {raw_upper(state, v, t), raw_lower(state, v, t), b.upper(v), b.lower(v)};
}

SegmentBounds segment_bounds(const ConfidenceState& state, Index p, const Vector<double>& x)
{
    check_segment(state, x);
    if (p < 0 || p >= state.num_values()) throw DomainError("price is off the grid");
    SegmentBounds out{0.0, 0.0};
    for (Index t = 0; t < state.num_types(); ++t) {
        const QuantileBand b = type_band(state, t);
        out.U += x(t) * b.upper(p);
        out.L += x(t) * b.lower(p);
    }
    return out;
}

ExploitFlags is_exploit(const ConfidenceState& state, const Grid& grid, const Vector<double>& x, Index p,
                        double eps_S, double eps_M)
{
    const Vector<double> ucb = revenue_bound(state, grid, x, true);
    if (p < 0 || p >= ucb.size()) throw DomainError("price is off the grid");
    ExploitFlags f;
    f.exploit = ucb(p) >= ucb.maxCoeff() - eps_S - kTie;
    if (!f.exploit) {
        const SegmentBounds b = segment_bounds(state, p, x);
        f.major = b.U - b.L >= eps_M;
    }
    return f;
}

Index seller_ucb(const ConfidenceState& state, const Grid& grid, const Vector<double>& x)
{
    return argmax_low(revenue_bound(state, grid, x, true));
}

double etc_eps(Index m, Index T, Index V)
{
    if (m < 1) throw DomainError("etc_eps needs m >= 1");
    return std::min(1.0, std::cbrt(1.0 / static_cast<double>(m)) * static_cast<double>(T * V));
}

Index seller_etc(const ConfidenceState& state, const Grid& grid, const Vector<double>& x, Index round, Index m,
                 double eps, std::mt19937_64& rng)
{
    const auto explore = static_cast<Index>(std::ceil(eps * static_cast<double>(m)));
    if (round < explore) {
        std::uniform_int_distribution<Index> pick(0, grid.size() - 1);
        return pick(rng);
    }
    const Vector<double> ucb = revenue_bound(state, grid, x, true);
    const Vector<double> lcb = revenue_bound(state, grid, x, false);
    const double floor = lcb.maxCoeff();
    Index best = -1;
    for (Index p = 0; p < grid.size(); ++p) {
        if (ucb(p) < floor - kTie) continue;
        if (best < 0 || lcb(p) > lcb(best) + kTie) best = p;
    }
    return best;
}

EpsilonM epsilon_m(Index m, Index T, Index V)
{
    if (m < 1 || T < 1 || V < 2) throw DomainError("epsilon_m needs m >= 1, T >= 1 and V >= 2");
    const double md = static_cast<double>(m), Td = static_cast<double>(T), Vd = static_cast<double>(V);
    const double lv = std::log(Vd);
    EpsilonM e;
    e.eps_M = std::pow(std::cbrt(Td) * Vd / (md * std::pow(lv, 1.0 / 6)), 6.0 / 19);
    e.eps_I = std::pow(e.eps_M, 1.0 / 6) * std::pow(Td, 2.0 / 3) * std::pow(lv, 1.0 / 6);
    return e;
}

OptimisticDistributions optimistic_distributions(const ConfidenceState& state, const Grid& grid, double lambda,
                                                 const MhrParams& params)
{
    if (grid.size() != state.num_values()) throw DomainError("grid does not match the confidence state");
    const Index T = state.num_types();
    const std::vector<std::string> names{"ucb", "mid", "lcb"};

    // projected[t][a]: projection of type t's anchor a, if one exists.
    std::vector<std::vector<std::optional<Distribution>>> projected(static_cast<size_t>(T));
    std::vector<Distribution> midpoints;
    OptimisticDistributions out;
    for (Index t = 0; t < T; ++t) {
        const QuantileBand band = type_band(state, t);
        const Vector<double> mid = 0.5 * (band.lower + band.upper);
        const std::vector<Vector<double>> anchors{band.upper, mid, band.lower};
        const double eps = 0.5 * (band.upper - band.lower).maxCoeff();
        midpoints.push_back(Distribution::from_quantiles(grid, mid));
        for (const auto& q : anchors) {
            try {
                projected[static_cast<size_t>(t)].push_back(
                    project_mhr_like_in_band(Distribution::from_quantiles(grid, q), eps, band, params).result);
            } catch (const ProjectionFailed&) {
                projected[static_cast<size_t>(t)].push_back(std::nullopt);
            }
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < names.size(); ++a) {
        OptimisticCandidate c;
        c.anchor = names[a];
        for (Index t = 0; t < T; ++t) {
            const auto& row = projected[static_cast<size_t>(t)];
            std::optional<Distribution> pick = row[a];
            for (size_t b = 0; !pick && b < row.size(); ++b) pick = row[b];
            if (!pick) {
                const std::string w = "type " + std::to_string(t) +
                                      ": no MHR-like distribution found in the confidence band, using its midpoint";
                if (a == 0) out.warnings.push_back(w);
                pick = midpoints[static_cast<size_t>(t)];
            }
            c.distributions.push_back(*pick);
        }
        c.opt = optimal_segmentation(uniform_market(c.distributions), lambda).objective;
        if (c.opt > best + kTie) {
            best = c.opt;
            out.distributions = c.distributions;
            out.anchor = c.anchor;
        }
        out.candidates.push_back(std::move(c));
    }
    return out;
}

IntermediaryPlan intermediary_round(const ConfidenceState& state, const Grid& grid, Index m,
                                    const BanditConfig& config)
{
    if (!(config.eps_I_cap > 0 && config.eps_I_cap < 1)) throw DomainError("eps_I cap must lie in (0, 1)");
    IntermediaryPlan plan;
    plan.eps = epsilon_m(m, state.num_types(), state.num_values());
    const Index T = state.num_types(), V = state.num_values();
    double eps_S = plan.eps.eps_M;
    if (plan.eps.eps_I > config.eps_I_cap) {
        // The eps_S whose bound is exactly the cap.
        const double scale = std::pow(static_cast<double>(T), 2.0 / 3) * std::pow(std::log(static_cast<double>(V)), 1.0 / 6);
        eps_S = std::pow(config.eps_I_cap / scale, 6.0);
    }
    plan.schedule = epsilon_schedule(eps_S, T, V);
    plan.optimistic = optimistic_distributions(state, grid, config.lambda, config.mhr);
    plan.believed = uniform_market(plan.optimistic.distributions);
    plan.optimal = optimal_segmentation(plan.believed, config.lambda);
    plan.robust = robustify_segmentation(plan.believed, plan.optimal.segmentation, {}, plan.schedule,
                                         RobustifyOptions{.keep_unmovable = true});
    return plan;
}

std::string to_string(SellerModel s)
{
    return s == SellerModel::ucb ? "ucb" : "etc";
}

SimulationReport simulate(const Market& market, SellerModel seller, Index m, std::uint64_t seed,
                          const BanditConfig& config)
{
    if (!market.prior_is_uniform()) throw DomainError("simulation requires a uniform type prior");
    if (!market.grid().is_scaled()) throw DomainError("simulation requires a scaled value grid");
    if (m < 0) throw DomainError("round count must be non-negative");
    if (config.recompute_every < 1) throw DomainError("recompute_every must be at least 1");

    const Index T = market.num_types(), V = market.num_values();
    const Grid& grid = market.grid();
    const double lambda = config.lambda;
    SimulationReport rep;
    rep.seed = seed;
    rep.m = m;
    rep.seller = seller;
    rep.opt = optimal_segmentation(market, lambda).objective;
    if (m == 0) return rep;
    rep.eps = epsilon_m(m, T, V);
    rep.seller_eps = seller == SellerModel::ucb ? 0.0 : etc_eps(m, T, V);

    std::mt19937_64 nature(seed);
    std::seed_seq seller_seed{seed, std::uint64_t{0x5e11e7}};
    std::mt19937_64 seller_rng(seller_seed);
    std::uniform_int_distribution<Index> draw_type(0, T - 1);
    std::vector<std::discrete_distribution<Index>> draw_value;
    for (const auto& d : market.types()) draw_value.emplace_back(d.pmf().data(), d.pmf().data() + V);

    ConfidenceState state(V, T, config.C);
    Segmentation current;
    std::vector<std::discrete_distribution<Index>> draw_segment;
    for (Index r = 0; r < m; ++r) {
        if (r % config.recompute_every == 0) {
            const IntermediaryPlan plan = intermediary_round(state, grid, m, config);
            for (const auto& w : plan.optimistic.warnings)
                if (rep.warnings.size() < 100) rep.warnings.push_back("round " + std::to_string(r) + ": " + w);
            current = plan.robust.robust;
            const SegmentMap map = measure_to_segmap(plan.believed, current);
            draw_segment.clear();
            for (Index t = 0; t < T; ++t) {
                const Vector<double> row = map.G.row(t).transpose();
                draw_segment.emplace_back(row.data(), row.data() + row.size());
            }
        }

        RoundLog log;
        log.round = r;
        log.type = draw_type(nature);
        const Index v = draw_value[static_cast<size_t>(log.type)](nature);
        log.segment = draw_segment[static_cast<size_t>(log.type)](nature);
        log.x = current.segments[static_cast<size_t>(log.segment)].x;
        log.price = seller == SellerModel::ucb ? seller_ucb(state, grid, log.x)
                                               : seller_etc(state, grid, log.x, r, m, rep.seller_eps, seller_rng);
        const ExploitFlags f = is_exploit(state, grid, log.x, log.price, rep.seller_eps, rep.eps.eps_M);
        log.exploit = f.exploit;
        log.major = f.major;
        log.value = grid[v];
        log.price_value = grid[log.price];
        log.bought = log.value >= log.price_value;
        if (log.bought) log.objective = mix_objective<double>(log.price_value, log.value - log.price_value, lambda);
        rep.cumulative += log.objective;
        log.objective_cum = rep.cumulative;
        rep.non_exploit += !log.exploit;
        rep.major_explorations += log.major;
        state.record(log.price, log.type, log.bought);
        rep.rounds.push_back(std::move(log));
    }
    rep.average = rep.cumulative / static_cast<double>(m);
    rep.regret = rep.opt - rep.average;
    return rep;
}

std::string rounds_csv(const SimulationReport& report)
{
    std::ostringstream os;
    os.precision(17);
    os << "round,type,price,bought,exploit,major,objective_cum\n";
    for (const auto& r : report.rounds)
        os << r.round << ',' << r.type << ',' << r.price_value << ',' << int(r.bought) << ',' << int(r.exploit) << ','
           << int(r.major) << ',' << r.objective_cum << '\n';
    return os.str();
}

} // namespace pricedisc
