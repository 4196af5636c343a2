#pragma once

#include "boxdim/chain.hpp"
#include "boxdim/core.hpp"

namespace boxdim {

// One base set of a cover: either an explicit point list or a translated
// coordinate brick shift * { p : lo_i <= p_i < lo_i + len_i }.
struct BaseSet {
    bool is_brick = false;
    std::vector<Coords> points;  // explicit form
    Coords shift;                // brick form
    std::vector<Int> lo, len;

    bool contains(const GroupSpec& spec, const Coords& x) const;
    // Number of points (exact; bricks multiply their side lengths).
    Int size() const;
};

BaseSet explicit_base(std::vector<Coords> points);
BaseSet brick_base(const GroupSpec& spec, Coords shift, std::vector<Int> lo,
                   std::vector<Int> len);

// (s+1)-colored cover of the group, each color a list of base sets whose
// right translates by the period subgroup H = {x : D_i | x_i} are the
// members.
struct ColoredCover {
    GroupSpec group;
    std::vector<Int> period_divisors;
    int scale_R = 0;  // claimed Lebesgue scale, confirmed by verify_cover
    std::vector<std::vector<BaseSet>> colors;

    int s() const { return static_cast<int>(colors.size()) - 1; }
    bool in_period_subgroup(const Coords& h) const;
};

struct CoverMember {
    int color = 0;
    int base = 0;
    Coords h;  // member = base * h

    bool operator==(const CoverMember& o) const {
        return color == o.color && base == o.base && h == o.h;
    }
};

// All members base*h containing x, found by exact per-level candidate
// enumeration (no window truncation).
std::vector<CoverMember> members_containing(const ColoredCover& cover,
                                            const Coords& x);

bool member_contains(const ColoredCover& cover, const CoverMember& m,
                     const Coords& x);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string witness;   // empty when passing
    std::string measured;  // optional measured value
};

struct CoverReport {
    std::vector<CheckResult> checks;
    int window_radius = 0;
    int R = 0;
    int multiplicity = 0;
    Int diameter_bound = 0;

    bool pass() const;
    const CheckResult* find(const std::string& name) const;
};

// Checks on window interior points (distance <= radius - R from the center):
// Lebesgue ball containment, within-color disjointness at window points,
// multiplicity <= s+1, periodicity and boundedness audits.
CoverReport verify_cover(const ColoredCover& cover, const Ball& window, int R,
                         int threads = 1);

// (m+1)-colored cover of Z^m by the diagonally shifted cube partitions:
// color l partitions Z^m into cubes L*k + l*floor(L/(m+1))*(1,...,1) + [0,L)^m.
ColoredCover synth_shifted_cover_zm(int m, int L);

// 4-colored twisted-brick partition cover of U_3(Z): color j is the
// right-translate family of the brick s_j * [0,8)x[0,64)x[0,8) with
// s_j = j*(2,16,2).
ColoredCover u3_base_cover();

// Applies alpha_k to a brick cover of U_d(Z): interval endpoints of
// coordinate (i,j) scale by k^(j-i), shifts map through alpha_k, and the
// scaled bricks are refilled with all integer points.
ColoredCover synth_scaled_cover_ud(int d, int k, const ColoredCover& base_cover);

// Cover of a finite quotient: members are sets of coset ids.
struct QuotientCover {
    std::vector<std::vector<std::vector<int>>> colors;  // color -> member -> ids
    int scale_R = 0;
};

struct QuotientPushResult {
    bool injective = true;
    Coords witness_a, witness_b;  // colliding pair if not injective
    QuotientCover cover;
    CoverReport report;  // disjointness + Lebesgue re-verified on the quotient
};

// Pushes an explicit-base cover through pi_m; requires pi_m injective on
// every base set and the period subgroup to contain the stage subgroup.
QuotientPushResult push_cover_to_quotient(const ColoredCover& cover,
                                          const CosetSpace& cs);

}  // namespace boxdim
