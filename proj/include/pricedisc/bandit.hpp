#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pricedisc/mhr_project.hpp"
#include "pricedisc/optimal_segmentation.hpp"
#include "pricedisc/robustify.hpp"

namespace pricedisc {

/// Purchase counts per (value, type): m(v,t) trials at price v, m⁺(v,t)
/// sales. Shared by the seller and the intermediary since both observe
/// every (type, price, decision) tuple.
class ConfidenceState {
public:
    ConfidenceState() = default;
    ConfidenceState(Index V, Index T, double C = 2.0);

    Index num_values() const { return trials_.rows(); }
    Index num_types() const { return trials_.cols(); }
    double C() const { return C_; }
    double trials(Index v, Index t) const { return trials_(v, t); }
    double successes(Index v, Index t) const { return successes_(v, t); }

    void record(Index v, Index t, bool bought);

private:
    Matrix<double> trials_;
    Matrix<double> successes_;
    double C_ = 2.0;
};

struct ConfidenceBounds {
    double U_raw = 1.0;
    double L_raw = 0.0;
    double U = 1.0;
    double L = 0.0;
};

/// Raw bounds m⁺/m ± √(C/m) (1 and 0 with no trials) and their monotone
/// versions, clamped to [0, 1] with L ≤ U. The lowest grid value always
/// sells, so its monotone bounds are both one.
ConfidenceBounds confidence_bounds(const ConfidenceState& state, Index v, Index t);

/// Monotone bounds of type t for every value.
QuantileBand type_band(const ConfidenceState& state, Index t);

struct SegmentBounds {
    double U = 1.0;
    double L = 0.0;
};

/// x-weighted mixture of the per-type monotone bounds at price p.
SegmentBounds segment_bounds(const ConfidenceState& state, Index p, const Vector<double>& x);

struct ExploitFlags {
    bool exploit = true;
    bool major = false;
};

/// Exploit when p·U(p,x) ≥ max_p' p'·U(p',x) − eps_S. A non-exploit round
/// whose quantile gap U(p,x) − L(p,x) is at least eps_M is a major
/// exploration.
ExploitFlags is_exploit(const ConfidenceState& state, const Grid& grid, const Vector<double>& x, Index p,
                        double eps_S, double eps_M);

/// argmax_p p·U(p,x), lowest price on ties.
Index seller_ucb(const ConfidenceState& state, const Grid& grid, const Vector<double>& x);

/// min(1, m^{-1/3}·T·V).
double etc_eps(Index m, Index T, Index V);

/// Explore-then-commit: a uniformly random price in the first ⌈eps·m⌉
/// rounds, afterwards the price with the largest revenue LCB among those
/// whose revenue UCB is not below another price's revenue LCB.
Index seller_etc(const ConfidenceState& state, const Grid& grid, const Vector<double>& x, Index round, Index m,
                 double eps, std::mt19937_64& rng);

struct EpsilonM {
    double eps_M = 0.0;
    double eps_I = 0.0;
};

/// eps_M = (T^{1/3}·V / (m·(ln V)^{1/6}))^{6/19} and eps_I from the
/// robustification bound with eps_M, so that eps_I·m = T·V·eps_M⁻³.
EpsilonM epsilon_m(Index m, Index T, Index V);

struct OptimisticCandidate {
    std::string anchor;
    std::vector<Distribution> distributions;
    double opt = 0.0;
};

struct OptimisticDistributions {
    std::vector<Distribution> distributions;
    std::string anchor;
    std::vector<OptimisticCandidate> candidates;
    std::vector<std::string> warnings;
};

/// Heuristic for the most favourable MHR-like distributions inside the
/// confidence bands: projects the UCB, midpoint and LCB quantile surfaces
/// into the band and keeps the anchor whose optimal segmentation value is
/// largest. A type whose band admits no MHR-like candidate from any anchor
/// falls back to its band-clamped midpoint, with a warning.
OptimisticDistributions optimistic_distributions(const ConfidenceState& state, const Grid& grid, double lambda,
                                                 const MhrParams& params = {});

struct BanditConfig {
    double lambda = 0.0;
    /// Upper limit on eps_I. The uncapped bound exceeds one unless m is
    /// very large.
    double eps_I_cap = 0.2;
    double C = 2.0;
    Index recompute_every = 100;
    MhrParams mhr;
};

struct IntermediaryPlan {
    OptimisticDistributions optimistic;
    Market believed;
    OptimalSegmentation optimal;
    RobustifiedSegmentation robust;
    EpsilonM eps;
    EpsilonSchedule schedule;
};

/// Optimistic distributions, their optimal segmentation, and its
/// robustification with eps_M in place of eps_S. Segments with no robust
/// type are kept in place.
IntermediaryPlan intermediary_round(const ConfidenceState& state, const Grid& grid, Index m,
                                    const BanditConfig& config = {});

enum class SellerModel { ucb, etc };

std::string to_string(SellerModel s);

struct RoundLog {
    Index round = 0;
    Index type = 0;
    Index segment = 0;
    Vector<double> x;
    Index price = 0;
    double price_value = 0.0;
    double value = 0.0;
    bool bought = false;
    bool exploit = true;
    bool major = false;
    double objective = 0.0;
    double objective_cum = 0.0;
};

struct SimulationReport {
    std::uint64_t seed = 0;
    Index m = 0;
    SellerModel seller = SellerModel::ucb;
    double seller_eps = 0.0;
    double cumulative = 0.0;
    double average = 0.0;
    double opt = 0.0;
    double regret = 0.0;
    Index major_explorations = 0;
    Index non_exploit = 0;
    EpsilonM eps;
    std::vector<std::string> warnings;
    std::vector<RoundLog> rounds;

    double non_exploit_fraction() const { return m == 0 ? 0.0 : static_cast<double>(non_exploit) / m; }
};

/// m rounds with a myopic buyer: draw a type and value, draw a segment from
/// the current robustified segmentation, let the seller post a price, record
/// the purchase. Requires a uniform type prior and a scaled grid.
SimulationReport simulate(const Market& market, SellerModel seller, Index m, std::uint64_t seed,
                          const BanditConfig& config = {});

/// Columns round, type, price, bought, exploit, major, objective_cum.
std::string rounds_csv(const SimulationReport& report);

} // namespace pricedisc
