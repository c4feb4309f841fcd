#pragma once

#include <stdexcept>
#include <string>

namespace pricedisc {

/// Input outside an operation's domain (off-grid price, bad simplex point, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A guaranteed internal invariant did not hold.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// No type satisfies the robust-type revenue-gap condition for a segment.
class NoRobustType : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No guessed monopoly price produced an MHR-like candidate.
class ProjectionFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The epsilon schedule is not admissible for the instance size.
class ScheduleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure of one stage of a multi-stage pipeline.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage))
    {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace pricedisc
