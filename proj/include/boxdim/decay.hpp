#pragma once

#include "boxdim/cover.hpp"

namespace boxdim {

// Finitely supported rational partition-of-unity data attached to a periodic
// cover: mu^(l)(g) = dist(g, complement of U^(l)) / sum over all members V
// of dist(g, complement of V).
struct DecayFamily {
    GroupSpec group;
    std::vector<Int> period_divisors;
    std::vector<std::vector<std::pair<Coords, Rat>>> functions;  // sorted supports
    Rat tolerance_eps;            // claimed bound 2(2s+3)/R
    std::vector<Coords> scale_M;  // shifts for which near-invariance is claimed
    // When false, supports were materialized only on the audit window's
    // relevant member translates (huge bricks); round trips need true.
    bool supports_complete = true;
    // The source cover (for base membership tests when supports are partial).
    ColoredCover source_cover;
    bool has_source_cover = false;

    int s() const { return static_cast<int>(functions.size()) - 1; }
    bool in_period_subgroup(const Coords& h) const;
    // Stored value; nullopt = not stored (either truly zero, or outside the
    // materialized region when supports are partial).
    std::optional<Rat> value(int l, const Coords& x) const;
};

struct DecayReport {
    std::vector<CheckResult> checks;
    Rat sup_shift = 0;  // measured max over M of the sup-norm shift

    bool pass() const;
    const CheckResult* find(const std::string& name) const;
};

// Exact dist-ratio decay functions of a verified cover (one base set per
// color). Supports restricted to the window's member translates when a base
// brick exceeds the materialization cap.
DecayFamily cover_to_decay(const ColoredCover& cover, const Ball& window,
                           const Int& support_cap = 20000);

// Exact checks: (a) translate-disjoint supports, (b) partition sums = 1 on
// window points within the margin, (c) sup-norm shift <= eps for each g in M.
DecayReport verify_decay(const DecayFamily& family, const Ball& window,
                         const std::vector<Coords>& M, const Rat& eps,
                         int margin = 0);

struct DecayToCoverResult {
    ColoredCover cover;
    int verified_R = 0;  // largest R passing verify_cover on the window
};

// Supports become base sets; requires complete supports and measured
// sup-shift < 1/(s+1) (recomputed internally over the family's scale_M).
DecayToCoverResult decay_to_cover(const DecayFamily& family, const Ball& window);

}  // namespace boxdim
