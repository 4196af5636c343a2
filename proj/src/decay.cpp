#include "boxdim/decay.hpp"

#include <algorithm>
#include <map>

namespace boxdim {

namespace {

// Word-metric distance from a point to the complement of a cover member.
// The escape pattern depends only on the point's position relative to the
// base set (left multiplication commutes with the right translate), so
// results are cached per (color, base, relative point).
struct DistCalculator {
    const ColoredCover& cover;
    Ball offsets;
    std::map<std::pair<std::pair<int, int>, Coords>, int> cache;

    explicit DistCalculator(const ColoredCover& c)
        : cover(c),
          offsets(word_ball(c.group, identity_of(c.group), 2)) {}

    // rel = base-relative point: shift^{-1} * g * h^{-1} for bricks,
    // g * h^{-1} for explicit bases.
    int dist(int color, int base_idx, const Coords& rel) {
        auto key = std::make_pair(std::make_pair(color, base_idx), rel);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;

        const BaseSet& b = cover.colors[color][base_idx];
        const GroupSpec& spec = cover.group;
        Coords g0 = b.is_brick ? multiply(spec, b.shift, rel) : rel;
        if (!b.contains(spec, g0)) {
            cache.emplace(key, 0);
            return 0;
        }
        for (;;) {
            for (std::size_t i = 0; i < offsets.elements.size(); ++i) {
                if (offsets.distances[i] == 0) continue;
                if (!b.contains(spec,
                                multiply(spec, offsets.elements[i], g0))) {
                    int d = offsets.distances[i];
                    cache.emplace(key, d);
                    return d;
                }
            }
            if (offsets.radius >= 256)
                throw ResourceError("member escape distance exceeds cap");
            offsets = word_ball(spec, identity_of(spec), offsets.radius * 2);
        }
    }

    int dist_at(const CoverMember& m, const Coords& g) {
        const BaseSet& b = cover.colors[m.color][m.base];
        const GroupSpec& spec = cover.group;
        Coords rel = multiply(spec, g, invert(spec, m.h));
        if (b.is_brick) rel = multiply(spec, invert(spec, b.shift), rel);
        return dist(m.color, m.base, rel);
    }
};

}  // namespace

bool DecayFamily::in_period_subgroup(const Coords& h) const {
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] % period_divisors[i] != 0) return false;
    return true;
}

std::optional<Rat> DecayFamily::value(int l, const Coords& x) const {
    const auto& fn = functions[l];
    auto it = std::lower_bound(
        fn.begin(), fn.end(), x,
        [](const std::pair<Coords, Rat>& a, const Coords& b) {
            return a.first < b;
        });
    if (it != fn.end() && it->first == x) return it->second;
    return std::nullopt;
}

bool DecayReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

const CheckResult* DecayReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

static std::vector<Coords> enumerate_base(const GroupSpec& spec,
                                          const BaseSet& b) {
    if (!b.is_brick) return b.points;
    std::vector<Coords> pts;
    Coords cur(b.lo);
    for (;;) {
        pts.push_back(multiply(spec, b.shift, cur));
        int i = static_cast<int>(cur.size()) - 1;
        for (; i >= 0; --i) {
            cur[i] += 1;
            if (cur[i] < b.lo[i] + b.len[i]) break;
            cur[i] = b.lo[i];
        }
        if (i < 0) break;
    }
    return pts;
}

DecayFamily cover_to_decay(const ColoredCover& cover, const Ball& window,
                           const Int& support_cap) {
    for (const auto& color : cover.colors)
        if (color.size() != 1)
            throw std::invalid_argument(
                "cover_to_decay: consolidate each color to one base set");
    CoverReport rep = verify_cover(cover, window, cover.scale_R);
    if (!rep.pass())
        throw std::invalid_argument(
            "cover_to_decay: cover fails verification at its claimed scale");

    const GroupSpec& spec = cover.group;
    DecayFamily fam;
    fam.group = spec;
    fam.period_divisors = cover.period_divisors;
    fam.tolerance_eps = Rat(2 * (2 * cover.s() + 3), std::max(1, cover.scale_R));
    fam.scale_M = generators_of(spec);
    fam.source_cover = cover;
    fam.has_source_cover = true;

    // Support per color: the whole base when small enough, else only the
    // window's member translates pulled back to the base.
    std::vector<CoordsSet> supports(cover.colors.size());
    fam.supports_complete = true;
    std::vector<bool> full(cover.colors.size());
    for (std::size_t l = 0; l < cover.colors.size(); ++l) {
        full[l] = cover.colors[l][0].size() <= support_cap;
        if (full[l])
            for (auto& p : enumerate_base(spec, cover.colors[l][0]))
                supports[l].insert(std::move(p));
        else
            fam.supports_complete = false;
    }
    if (!fam.supports_complete)
        for (const auto& q : window.elements)
            for (const auto& m : members_containing(cover, q)) {
                if (full[m.color]) continue;
                supports[m.color].insert(
                    multiply(spec, q, invert(spec, m.h)));
            }

    DistCalculator dc(cover);
    fam.functions.resize(cover.colors.size());
    for (std::size_t l = 0; l < cover.colors.size(); ++l) {
        std::vector<Coords> pts(supports[l].begin(), supports[l].end());
        std::sort(pts.begin(), pts.end());
        for (const auto& p : pts) {
            CoverMember self{static_cast<int>(l), 0, identity_of(spec)};
            Int num = dc.dist_at(self, p);
            if (num == 0) continue;
            Int den = 0;
            for (const auto& m : members_containing(cover, p))
                den += dc.dist_at(m, p);
            fam.functions[l].emplace_back(p, Rat(num, den));
        }
    }
    return fam;
}

DecayReport verify_decay(const DecayFamily& family, const Ball& window,
                         const std::vector<Coords>& M, const Rat& eps,
                         int margin) {
    const GroupSpec& spec = family.group;
    DecayReport rep;

    // (a) supports meet each period-subgroup coset at most once.
    {
        CheckResult c{"translate-disjoint-supports", true, "", ""};
        for (std::size_t l = 0; l < family.functions.size() && c.pass; ++l) {
            CoordsSet seen;
            for (const auto& [p, v] : family.functions[l])
                if (!seen.insert(divisor_canon(spec, family.period_divisors, p))
                         .second) {
                    c.pass = false;
                    c.witness = "color " + std::to_string(l) + " support point " +
                                coords_to_string(p) +
                                " collides with a period translate";
                }
        }
        rep.checks.push_back(c);
    }

    // (b) exact partition: sum_l sum_{h in G_n} mu^(l)(g h) = 1.
    {
        CheckResult c{"partition-of-unity", true, "", ""};
        for (std::size_t i = 0; i < window.elements.size() && c.pass; ++i) {
            if (window.distances[i] > window.radius - margin) continue;
            const Coords& g = window.elements[i];
            Rat sum = 0;
            if (family.has_source_cover) {
                // Nonzero terms correspond exactly to the cover members
                // containing g: mu^(l)(g h) != 0 needs g h in the base of
                // color l, i.e. g in base * h^{-1}.
                for (const auto& m :
                     members_containing(family.source_cover, g)) {
                    auto v = family.value(
                        m.color, multiply(spec, g, invert(spec, m.h)));
                    if (!v)
                        throw std::logic_error(
                            "partition check: support point missing from the "
                            "materialized region");
                    sum += *v;
                }
            } else {
                Coords ginv = invert(spec, g);
                for (const auto& fn : family.functions)
                    for (const auto& [p, v] : fn)
                        if (family.in_period_subgroup(multiply(spec, ginv, p)))
                            sum += v;
            }
            if (sum != 1) {
                c.pass = false;
                c.witness = "partition sum at " + coords_to_string(g) + " is " +
                            sum.str();
            }
        }
        rep.checks.push_back(c);
    }

    // (c) sup-norm shift bound for each g in M. With partial supports a pair
    // is skipped when a needed value was not materialized (in the base but
    // not stored); stored-vs-absent outside the base is an exact zero.
    {
        CheckResult c{"shift-bound", true, "", ""};
        auto value_or = [&](int l, const Coords& u) -> std::optional<Rat> {
            auto v = family.value(l, u);
            if (v) return v;
            if (family.supports_complete) return Rat(0);
            if (family.has_source_cover &&
                !family.source_cover.colors[l][0].contains(spec, u))
                return Rat(0);
            return std::nullopt;
        };
        for (const auto& g : M) {
            Coords ginv = invert(spec, g);
            for (std::size_t l = 0; l < family.functions.size(); ++l) {
                std::vector<Coords> us;
                for (const auto& [p, v] : family.functions[l]) {
                    us.push_back(p);
                    us.push_back(multiply(spec, ginv, p));
                }
                std::sort(us.begin(), us.end());
                us.erase(std::unique(us.begin(), us.end()), us.end());
                for (const auto& u : us) {
                    auto a = value_or(static_cast<int>(l), u);
                    auto b = value_or(static_cast<int>(l), multiply(spec, g, u));
                    if (!a || !b) continue;
                    Rat d = *a - *b;
                    if (d < 0) d = -d;
                    if (d > rep.sup_shift) rep.sup_shift = d;
                }
            }
        }
        c.measured = rep.sup_shift.str();
        if (rep.sup_shift > eps) {
            c.pass = false;
            c.witness = "measured sup-shift " + rep.sup_shift.str() +
                        " exceeds eps " + eps.str();
        }
        rep.checks.push_back(c);
    }
    return rep;
}

DecayToCoverResult decay_to_cover(const DecayFamily& family, const Ball& window) {
    if (!family.supports_complete)
        throw std::invalid_argument(
            "decay_to_cover: family supports were window-truncated");
    DecayReport rep =
        verify_decay(family, window, family.scale_M, family.tolerance_eps);
    Rat threshold(1, family.s() + 1);
    if (rep.sup_shift >= threshold)
        throw std::invalid_argument(
            "decay_to_cover: measured shift " + rep.sup_shift.str() +
            " is not below 1/(s+1) = " + threshold.str());

    DecayToCoverResult res;
    res.cover.group = family.group;
    res.cover.period_divisors = family.period_divisors;
    for (const auto& fn : family.functions) {
        std::vector<Coords> pts;
        for (const auto& [p, v] : fn) pts.push_back(p);
        res.cover.colors.push_back({explicit_base(std::move(pts))});
    }
    // Largest verified Lebesgue scale on the window; passing is monotone
    // downward in R, so binary search.
    int lo = 0, hi = window.radius;
    res.cover.scale_R = 0;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        if (verify_cover(res.cover, window, mid).pass()) {
            res.verified_R = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    res.cover.scale_R = res.verified_R;
    return res;
}

}  // namespace boxdim
