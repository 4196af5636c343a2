#include "boxdim/chain.hpp"

#include <algorithm>
#include <deque>

namespace boxdim {

static Int factorial(int n) {
    Int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

static Int pos_mod(const Int& a, const Int& d) {
    Int r = a % d;
    if (r < 0) r += d;
    return r;
}

// Levels drive the canonicalization order: unitriangular entry (i,j) has
// level j-i, everything else level 1.
static std::vector<int> coordinate_levels(const GroupSpec& spec) {
    std::vector<int> lv;
    switch (spec.kind) {
        case GroupKind::FreeAbelian:
            lv.assign(spec.param, 1);
            break;
        case GroupKind::Unitriangular:
            for (int i = 1; i < spec.param; ++i)
                for (int j = i + 1; j <= spec.param; ++j) lv.push_back(j - i);
            break;
        case GroupKind::Product:
            for (const auto& f : spec.factors) {
                auto sub = coordinate_levels(f);
                lv.insert(lv.end(), sub.begin(), sub.end());
            }
            break;
    }
    return lv;
}

std::vector<Int> SubgroupChain::divisors(int stage) const {
    int r = group.rank();
    switch (kind) {
        case ChainKind::FactorialAbelian: {
            if (group.kind != GroupKind::FreeAbelian)
                throw std::invalid_argument("factorial-abelian chain needs Z^m");
            if (stage < 1) throw std::invalid_argument("stage must be >= 1");
            return std::vector<Int>(r, factorial(stage));
        }
        case ChainKind::ScaledUnitriangular: {
            if (group.kind != GroupKind::Unitriangular)
                throw std::invalid_argument("scaled chain needs U_d(Z)");
            if (stage < 1) throw std::invalid_argument("stage must be >= 1");
            Int k = factorial(stage + 1);
            std::vector<Int> d;
            for (int i = 1; i < group.param; ++i)
                for (int j = i + 1; j <= group.param; ++j) {
                    Int p = 1;
                    for (int e = 0; e < j - i; ++e) p *= k;
                    d.push_back(p);
                }
            return d;
        }
        case ChainKind::CongruenceUnitriangular: {
            if (group.kind != GroupKind::Unitriangular)
                throw std::invalid_argument("congruence chain needs U_d(Z)");
            if (stage < 1) throw std::invalid_argument("stage must be >= 1");
            return std::vector<Int>(r, factorial(stage));
        }
        case ChainKind::Custom: {
            if (stage < 1 || stage > static_cast<int>(custom_stages.size()))
                throw std::invalid_argument("custom chain stage out of range");
            return custom_stages[stage - 1];
        }
    }
    throw std::logic_error("unreachable");
}

bool SubgroupChain::is_normal(int stage) const {
    switch (kind) {
        case ChainKind::FactorialAbelian:
            return true;  // abelian group
        case ChainKind::ScaledUnitriangular:
            return false;
        case ChainKind::CongruenceUnitriangular:
            return true;  // kernel of entrywise reduction mod n!
        case ChainKind::Custom:
            if (custom_normal.empty())
                return group.kind == GroupKind::FreeAbelian;
            return custom_normal.at(stage - 1);
    }
    return false;
}

bool SubgroupChain::contains(int stage, const Coords& x) const {
    check_conforms(group, x);
    auto d = divisors(stage);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] % d[i] != 0) return false;
    return true;
}

int SubgroupChain::min_stage() const { return 1; }

int SubgroupChain::max_stage() const {
    return kind == ChainKind::Custom ? static_cast<int>(custom_stages.size()) : 20;
}

Int SubgroupChain::index(int stage) const {
    Int ix = 1;
    for (const Int& d : divisors(stage)) ix *= d;
    return ix;
}

void check_divisor_closure(const GroupSpec& group, const std::vector<Int>& d) {
    if (static_cast<int>(d.size()) != group.rank())
        throw std::invalid_argument("divisor vector has wrong length");
    for (const Int& v : d)
        if (v < 1) throw std::invalid_argument("divisors must be positive");
    if (group.kind == GroupKind::Unitriangular) {
        int n = group.param;
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int m = i + 1; m < j; ++m) {
                    const Int& dij = d[ut_index(n, i, j)];
                    if ((d[ut_index(n, i, m)] * d[ut_index(n, m, j)]) % dij != 0)
                        throw std::invalid_argument(
                            "divisor vector not closed under multiplication: "
                            "d_ij must divide d_im * d_mj");
                }
    } else if (group.kind == GroupKind::Product) {
        std::size_t off = 0;
        for (const auto& f : group.factors) {
            std::vector<Int> sub(d.begin() + off, d.begin() + off + f.rank());
            check_divisor_closure(f, sub);
            off += f.rank();
        }
    }
}

SubgroupChain factorial_abelian_chain(const GroupSpec& group) {
    SubgroupChain c;
    c.group = group;
    c.kind = ChainKind::FactorialAbelian;
    if (group.kind != GroupKind::FreeAbelian)
        throw std::invalid_argument("factorial-abelian chain needs Z^m");
    return c;
}

SubgroupChain scaled_unitriangular_chain(const GroupSpec& group) {
    SubgroupChain c;
    c.group = group;
    c.kind = ChainKind::ScaledUnitriangular;
    if (group.kind != GroupKind::Unitriangular)
        throw std::invalid_argument("scaled chain needs U_d(Z)");
    return c;
}

SubgroupChain congruence_unitriangular_chain(const GroupSpec& group) {
    SubgroupChain c;
    c.group = group;
    c.kind = ChainKind::CongruenceUnitriangular;
    if (group.kind != GroupKind::Unitriangular)
        throw std::invalid_argument("congruence chain needs U_d(Z)");
    return c;
}

SubgroupChain custom_chain(const GroupSpec& group,
                           std::vector<std::vector<Int>> stages,
                           std::vector<bool> normal_flags) {
    SubgroupChain c;
    c.group = group;
    c.kind = ChainKind::Custom;
    for (const auto& d : stages) check_divisor_closure(group, d);
    // stages must be nested: each divisor vector refines the previous one
    for (std::size_t s = 1; s < stages.size(); ++s)
        for (std::size_t i = 0; i < stages[s].size(); ++i)
            if (stages[s][i] % stages[s - 1][i] != 0)
                throw std::invalid_argument(
                    "custom chain stages are not nested");
    c.custom_stages = std::move(stages);
    c.custom_normal = std::move(normal_flags);
    return c;
}

// Reduce x to the canonical left-coset representative with coordinates in
// [0, d_i), multiplying on the right by subgroup elements. Levels are
// processed in increasing order: reducing a coordinate only perturbs
// strictly longer-level entries.
static Coords canon_impl(const GroupSpec& spec, const std::vector<Int>& divs,
                         const Coords& x) {
    Coords cur = x;
    auto levels = coordinate_levels(spec);
    int max_level = *std::max_element(levels.begin(), levels.end());
    for (int lvl = 1; lvl <= max_level; ++lvl) {
        for (std::size_t idx = 0; idx < cur.size(); ++idx) {
            if (levels[idx] != lvl) continue;
            Int r = pos_mod(cur[idx], divs[idx]);
            Int c = r - cur[idx];
            if (c != 0) {
                Coords unit(cur.size(), Int(0));
                unit[idx] = c;
                cur = multiply(spec, cur, unit);
            }
        }
    }
    return cur;
}

Coords divisor_canon(const GroupSpec& group, const std::vector<Int>& divs,
                     const Coords& x) {
    return canon_impl(group, divs, x);
}

Coords CosetSpace::canon(const Coords& x) const {
    return canon_impl(group, divs, x);
}

int CosetSpace::id_of(const Coords& x) const {
    auto it = rep_index.find(canon(x));
    if (it == rep_index.end())
        throw std::logic_error("coset representative not enumerated");
    return it->second;
}

std::vector<int> CosetSpace::distances_from(int c) const {
    std::vector<int> dist(reps.size(), -1);
    std::deque<int> q{c};
    dist[c] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : schreier_edges[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

int CosetSpace::graph_distance(int a, int b) const {
    auto d = distances_from(a);
    if (d[b] < 0) throw std::logic_error("Schreier graph disconnected");
    return d[b];
}

int CosetSpace::diameter() const {
    int diam = 0;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (int d : distances_from(static_cast<int>(i)))
            diam = std::max(diam, d);
    return diam;
}

CosetSpace coset_space(const SubgroupChain& chain, int n, const Int& index_cap) {
    CosetSpace cs;
    cs.group = chain.group;
    cs.chain = chain;
    cs.stage = n;
    cs.divs = chain.divisors(n);
    cs.index = chain.index(n);
    if (cs.index > index_cap)
        throw ResourceError("coset_space: index " + cs.index.str() +
                            " exceeds cap " + index_cap.str());

    const auto& gens = generators_of(cs.group);
    Coords id = identity_of(cs.group);
    cs.reps.push_back(cs.canon(id));
    cs.rep_index.emplace(cs.reps[0], 0);
    std::deque<int> frontier{0};
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        for (const auto& g : gens) {
            Coords img = cs.canon(multiply(cs.group, g, cs.reps[v]));
            if (cs.rep_index.emplace(img, static_cast<int>(cs.reps.size())).second) {
                cs.reps.push_back(img);
                frontier.push_back(static_cast<int>(cs.reps.size()) - 1);
            }
        }
    }
    if (Int(cs.reps.size()) != cs.index)
        throw std::logic_error("coset enumeration found " +
                               std::to_string(cs.reps.size()) +
                               " cosets, expected index " + cs.index.str());
    cs.schreier_edges.assign(cs.reps.size(), {});
    for (std::size_t v = 0; v < cs.reps.size(); ++v)
        for (const auto& g : gens)
            cs.schreier_edges[v].push_back(
                cs.rep_index.at(cs.canon(multiply(cs.group, g, cs.reps[v]))));
    return cs;
}

int quotient_distance(const CosetSpace& cs, const Coords& x, const Coords& y) {
    return cs.graph_distance(cs.id_of(x), cs.id_of(y));
}

InjectiveRadiusResult injective_radius_stage(const SubgroupChain& chain, int R,
                                             int conjugator_radius, int n0,
                                             int n1, const Int& index_cap) {
    InjectiveRadiusResult res;
    res.conjugator_radius = conjugator_radius;
    Ball ballR = word_ball(chain.group, identity_of(chain.group), R);
    Ball conj = word_ball(chain.group, identity_of(chain.group), conjugator_radius);
    for (int n = std::max(n0, chain.min_stage()); n <= n1; ++n) {
        if (chain.index(n) > index_cap) break;
        auto divs = chain.divisors(n);
        std::vector<Coords> ks;
        if (chain.is_normal(n))
            ks.push_back(identity_of(chain.group));
        else
            ks = conj.elements;
        bool ok = true;
        for (const auto& k : ks) {
            CoordsMap<Coords> seen;
            for (const auto& b : ballR.elements) {
                Coords bk = multiply(chain.group, b, k);
                Coords c = canon_impl(chain.group, divs, bk);
                auto [it, inserted] = seen.emplace(c, b);
                if (!inserted) {
                    ok = false;
                    res.witness_a = it->second;
                    res.witness_b = b;
                    res.witness_k = k;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) {
            res.found = true;
            res.stage = n;
            return res;
        }
    }
    return res;
}

IsometryCheckResult isometry_radius_check(const CosetSpace& cs, const Coords& x,
                                          int R) {
    IsometryCheckResult res;
    Ball b3 = word_ball(cs.group, x, 3 * R);
    CoordsMap<Coords> seen;
    for (const auto& a : b3.elements) {
        auto [it, inserted] = seen.emplace(cs.canon(a), a);
        if (!inserted) {
            res.hypothesis_holds = false;
            res.has_witness = true;
            res.witness_a = it->second;
            res.witness_b = a;
            return res;  // inconclusive, not a falsification
        }
    }
    res.hypothesis_holds = true;

    Ball bR = word_ball(cs.group, x, R);
    // Word distances inside B_R(x) read off from the ball B_{2R}(1) of
    // quotients a*b^{-1}.
    Ball b2 = word_ball(cs.group, identity_of(cs.group), 2 * R);
    res.isometric = true;
    for (const auto& a : bR.elements)
        for (const auto& b : bR.elements) {
            Coords q = multiply(cs.group, a, invert(cs.group, b));
            auto it = b2.distance_of.find(q);
            if (it == b2.distance_of.end())
                throw std::logic_error("pair in B_R(x) at distance > 2R");
            int wd = it->second;
            int qd = quotient_distance(cs, a, b);
            if (qd != wd) {
                res.isometric = false;
                res.has_witness = true;
                res.witness_a = a;
                res.witness_b = b;
                return res;
            }
        }

    // pi(B_R(x)) must equal the Schreier ball of radius R around canon(x).
    auto dist = cs.distances_from(cs.id_of(x));
    std::vector<char> in_image(cs.reps.size(), 0);
    for (const auto& a : bR.elements) in_image[cs.id_of(a)] = 1;
    res.image_is_ball = true;
    for (std::size_t i = 0; i < cs.reps.size(); ++i) {
        bool in_ball = dist[i] >= 0 && dist[i] <= R;
        if (in_ball != static_cast<bool>(in_image[i])) {
            res.image_is_ball = false;
            res.has_witness = true;
            res.witness_a = cs.reps[i];
            break;
        }
    }
    return res;
}

// Smallest prime factors by trial division; divisor values in practice stay
// tiny (factorials up to ~20!).
static std::vector<Int> prime_factors(Int v) {
    std::vector<Int> ps;
    for (Int p = 2; p * p <= v; ++p)
        if (v % p == 0) {
            ps.push_back(p);
            while (v % p == 0) v /= p;
        }
    if (v > 1) ps.push_back(v);
    return ps;
}

std::vector<DominationStageResult> dominates(const SubgroupChain& chainA,
                                             const SubgroupChain& chainB,
                                             int horizon) {
    std::vector<DominationStageResult> out;
    // The witness stage m may lie well past the stage horizon for chain A.
    int b_last = chainB.max_stage();
    for (int n = chainA.min_stage(); n <= std::min(horizon, chainA.max_stage());
         ++n) {
        DominationStageResult r;
        r.n = n;
        auto dA = chainA.divisors(n);
        for (int m = chainB.min_stage(); m <= b_last; ++m) {
            auto dB = chainB.divisors(m);
            bool ok = true;
            for (std::size_t i = 0; i < dA.size(); ++i)
                if (dB[i] % dA[i] != 0) {
                    ok = false;
                    break;
                }
            if (ok) {
                r.dominated = true;
                r.witness_m = m;
                break;
            }
        }
        if (!r.dominated) {
            // Certify "never" when some prime of d_A can provably never divide
            // the matching coordinate of chain B. For a custom chain that is a
            // geometric progression the primes of every stage divide
            // first * ratio; built-in factorial-type chains absorb every prime
            // eventually, so no certificate there.
            if (chainB.kind == ChainKind::Custom && chainB.max_stage() >= 2) {
                for (std::size_t i = 0; i < dA.size() && !r.never; ++i) {
                    Int first = chainB.divisors(1)[i];
                    Int ratio = 0;
                    bool geometric = true;
                    for (int m = 2; m <= chainB.max_stage(); ++m) {
                        Int prev = chainB.divisors(m - 1)[i];
                        Int curv = chainB.divisors(m)[i];
                        if (curv % prev != 0) {
                            geometric = false;
                            break;
                        }
                        Int q = curv / prev;
                        if (ratio == 0)
                            ratio = q;
                        else if (q != ratio)
                            geometric = false;
                    }
                    if (!geometric || ratio == 0) continue;
                    for (const Int& p : prime_factors(dA[i]))
                        if (first % p != 0 && ratio % p != 0) {
                            r.never = true;
                            r.obstruction_prime = p;
                            break;
                        }
                }
            }
        }
        out.push_back(r);
    }
    return out;
}

BoxWindow box_window(const SubgroupChain& chain, int n0, int n1,
                     const Int& index_cap) {
    if (n0 > n1 || n0 < chain.min_stage())
        throw std::invalid_argument("box_window: bad stage range");
    BoxWindow w;
    w.chain = chain;
    w.n0 = n0;
    w.n1 = n1;
    Int running = 0;
    for (int n = n0; n <= n1; ++n) {
        w.blocks.push_back(coset_space(chain, n, index_cap));
        const CosetSpace& cs = w.blocks.back();
        std::vector<std::vector<int>> table;
        int diam = 0;
        for (std::size_t i = 0; i < cs.reps.size(); ++i) {
            table.push_back(cs.distances_from(static_cast<int>(i)));
            for (int d : table.back()) diam = std::max(diam, d);
        }
        w.metric_tables.push_back(std::move(table));
        w.diameters.push_back(diam);
        running += diam;
        w.separation.push_back(Int(n) + running);
    }
    return w;
}

Int BoxWindow::distance(int block_a, int coset_a, int block_b, int coset_b) const {
    if (block_a == block_b)
        return metric_tables[block_a][coset_a][coset_b];
    return separation[block_a] + separation[block_b];
}

}  // namespace boxdim
