#pragma once

#include <optional>
#include <vector>

#include "pricedisc/mhr.hpp"

namespace pricedisc {

/// Lowers every quantile by eps (floored at 0); the lowest value keeps
/// quantile one.
Distribution dominated_shift(const Distribution& emp, double eps);

/// Raises the quantile of the guessed monopoly price to
/// min(q_emp(p*) + eps, 1) when that is higher than its current quantile,
/// then raises lower prices as needed to keep quantiles monotone.
Distribution strengthen_price(const Distribution& dist, const Distribution& emp, Index p_star, double eps);

/// Raises each quantile to where the ray rev = p·q meets the upper concave
/// envelope of the revenue curve and the origin, capped at one.
Distribution iron(const Distribution& dist);

/// Optional per-value quantile band [lower, upper] the projection must
/// respect (used by the bandit intermediary).
struct QuantileBand {
    Vector<double> lower;
    Vector<double> upper;
};

struct GuessDiagnostic {
    Index price = 0;
    Distribution candidate;
    MhrReport report;
    double ks_to_input = 0.0;
    bool in_band = true;
};

struct Projection {
    Distribution result;
    Index guess = 0;
    std::vector<GuessDiagnostic> guesses;
};

/// Tries every grid price as the monopoly price guess, runs
/// shift/strengthen/iron, and keeps the MHR-like candidate closest to `emp`
/// in KS distance (lowest price on ties). Throws ProjectionFailed when no
/// candidate is MHR-like.
Projection project_mhr_like(const Distribution& emp, double eps, const MhrParams& params = {});

/// Same search restricted to candidates inside `band`. Before ironing the
/// candidate is clamped into the band; candidates that leave the band after
/// ironing are discarded.
Projection project_mhr_like_in_band(const Distribution& anchor, double eps, const QuantileBand& band,
                                    const MhrParams& params = {});

} // namespace pricedisc
