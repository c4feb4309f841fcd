#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pricedisc/mhr_project.hpp"
#include "pricedisc/optimal_segmentation.hpp"
#include "pricedisc/robustify.hpp"

namespace pricedisc {

/// Per type, the grid indices of the sampled values.
struct SampleSet {
    std::vector<std::vector<Index>> per_type;

    Index samples_per_type() const { return per_type.empty() ? 0 : static_cast<Index>(per_type.front().size()); }
};

/// One believed distribution per type.
struct SellerBelief {
    std::vector<Distribution> per_type;
};

SampleSet draw_samples(const Market& market, Index m, std::uint64_t seed);

/// Uniform distribution over the samples. Throws DomainError when empty.
Distribution empirical(const std::vector<Index>& samples, const Grid& grid);

/// constant·m^{-1/2}·ln(m·V).
double seller_eps(Index m, Index V, double constant = 1.0);

struct PipelineConfig {
    double lambda = 0.0;
    /// Multiplier on the seller error when building the robustification
    /// schedule.
    double belief_slack = 6.0;
    /// Constant in seller_eps.
    double eps_constant = 1.0;
    /// Replaces seller_eps(m, V) when set.
    std::optional<double> eps_S;
    /// Replaces the eps_I bound when set.
    std::optional<double> eps_I;
    MhrParams mhr;
};

struct PipelineResult {
    std::vector<Distribution> empiricals;
    std::vector<Projection> projections;
    /// Market of the projected distributions with a uniform prior.
    Market projected;
    double eps_S = 0.0;
    EpsilonSchedule schedule;
    OptimalSegmentation optimal;
    RobustifiedSegmentation robust;
};

/// Empiricals, MHR-like projection, optimal segmentation of the projected
/// market, robustification. Failures are rethrown as PipelineError naming
/// the stage: "empirical", "project_mhr_like", "optimal_segmentation",
/// "epsilon_schedule" or "robustify_segmentation".
PipelineResult learn_segmentation(const SampleSet& samples, const Grid& grid, const PipelineConfig& config = {});

struct AdversaryOptions {
    int sweeps = 3;
    /// Offsets are multiples of eps/steps in [-eps, eps].
    int steps = 4;
    /// When set, start from random offsets drawn with this seed instead of
    /// the truth.
    std::optional<std::uint64_t> seed;
    TieBreak tie = TieBreak::low;
};

struct AdversarialOutcome {
    SellerBelief belief;
    /// Objective when the seller prices from the true distributions.
    double truthful = 0.0;
    /// Objective when the seller prices from the adversarial belief.
    double adversarial = 0.0;
    double drop() const { return truthful - adversarial; }
};

/// Coordinate descent over per-type quantile offsets within [-eps, eps]
/// minimizing the intermediary objective of `segmentation` when the seller
/// posts belief-monopoly prices. Every belief stays within eps of the truth
/// in KS distance.
AdversarialOutcome adversarial_belief(const Market& market, double eps, const Segmentation& segmentation,
                                      double lambda, const AdversaryOptions& options = {});

/// Values {1/2, 1} with Pr[1/2] = 1/2 + delta; the seller sees m samples and
/// posts the empirical monopoly price (low tie-break). Exact probability that
/// the high price is posted.
double impossibility_demo(double delta, Index m);

} // namespace pricedisc
