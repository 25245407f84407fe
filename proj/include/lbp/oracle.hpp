#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lbp/core.hpp"
#include "lbp/lattice.hpp"

namespace lbp {

inline constexpr std::size_t kMaxOracleSites = 22;

// Exact law of an event under the product measure on n sites:
// P = sum_k coefficients[k] p^k (1-p)^(n-k), k = number of sites switched on.
struct ExactResult {
    std::size_t n = 0;
    std::vector<std::uint64_t> coefficients;

    double evaluate(double p) const;
};

// One assignment of the enumerated sites. In the local model a site that is
// "on" is Occupied; the origin is Active; everything else is Empty.
class AssignmentView {
public:
    AssignmentView(const std::vector<Site>& sites, std::uint64_t mask) : sites_(&sites), mask_(mask) {}

    std::size_t size() const { return sites_->size(); }
    const Site& site(std::size_t i) const { return (*sites_)[i]; }
    bool on(std::size_t i) const { return (mask_ >> i) & 1u; }
    bool on_at(std::int64_t x, std::int64_t y) const;
    std::uint64_t mask() const { return mask_; }

    PlacedSites local_configuration() const;

private:
    const std::vector<Site>* sites_;
    std::uint64_t mask_;
};

// Exact probability that every site of `target` is Active at fixation, given an
// Active origin, the listed non-origin sites Occupied independently with
// probability p, and every other site Empty. Relaxation uses the oracle's own
// full-rescan relaxer, not the lattice engine.
ExactResult exact_growth_probability(const std::vector<Site>& window, Variant variant, const Rect& target,
                                     unsigned workers = 1);

ExactResult exact_event_probability(const std::vector<Site>& window,
                                    const std::function<bool(const AssignmentView&)>& predicate, unsigned workers = 1);

// Exact spanning probability I(L, p) of plain bootstrap percolation, L*L <= 22.
ExactResult exact_bp_spanning(std::int64_t L, unsigned workers = 1);

// Fixed point by repeated full synchronous rescans.
Configuration naive_relax(const Configuration& config, const Dynamics& dynamics);

// Number of assignments on which the lattice engine's relax disagrees with naive_relax.
std::uint64_t engine_mismatches(const std::vector<Site>& window, Variant variant, unsigned workers = 1);

}  // namespace lbp
