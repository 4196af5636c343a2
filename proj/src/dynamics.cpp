#include "boxdim/dynamics.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

namespace boxdim {

namespace {

std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

std::vector<int> compose(const std::vector<int>& f, const std::vector<int>& g) {
    // (f after g): x -> f[g[x]]
    std::vector<int> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = f[g[i]];
    return out;
}

}  // namespace

int FiniteAction::apply_generator(int gen_idx, int x) const {
    return gen_perms[gen_idx][x];
}

std::vector<int> FiniteAction::permutation_of(const Coords& g) const {
    check_conforms(group, g);
    if (is_odometer) {
        std::vector<int> p(size);
        for (int x = 0; x < size; ++x)
            p[x] = cs->id_of(multiply(group, g, cs->reps[x]));
        return p;
    }
    // Custom model: express g as a generator word by BFS and compose.
    if (is_identity(g)) return identity_perm(size);
    const auto& gens = generators_of(group);
    CoordsMap<std::vector<int>> perms;
    perms.emplace(identity_of(group), identity_perm(size));
    std::deque<Coords> frontier{identity_of(group)};
    for (int depth = 0; depth < 12 && !frontier.empty(); ++depth) {
        std::deque<Coords> next;
        for (const auto& w : frontier) {
            const auto& pw = perms.at(w);
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                Coords nw = multiply(group, gens[gi], w);
                // alpha_{s w} = alpha_s after alpha_w
                auto np = compose(gen_perms[gi], pw);
                if (nw == g) return np;
                if (perms.emplace(nw, np).second) next.push_back(std::move(nw));
            }
        }
        frontier = std::move(next);
    }
    throw std::invalid_argument(
        "permutation_of: element not reachable by short generator words");
}

int FiniteAction::apply(const Coords& g, int x) const {
    if (is_odometer) return cs->id_of(multiply(group, g, cs->reps[x]));
    return permutation_of(g)[x];
}

RelationAuditResult audit_relations(const FiniteAction& action, int radius) {
    RelationAuditResult res;
    const auto& gens = generators_of(action.group);
    CoordsMap<std::vector<int>> perms;
    perms.emplace(identity_of(action.group), identity_perm(action.size));
    std::deque<Coords> frontier{identity_of(action.group)};
    for (int depth = 0; depth < radius && !frontier.empty(); ++depth) {
        std::deque<Coords> next;
        for (const auto& w : frontier) {
            const auto pw = perms.at(w);
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                Coords nw = multiply(action.group, gens[gi], w);
                auto np = compose(action.gen_perms[gi], pw);
                auto [it, inserted] = perms.emplace(nw, np);
                if (!inserted && it->second != np) {
                    res.pass = false;
                    res.witness =
                        "two generator words for " + coords_to_string(nw) +
                        " act by different permutations";
                    return res;
                }
                if (inserted) next.push_back(std::move(nw));
            }
        }
        frontier = std::move(next);
    }
    return res;
}

FreenessAuditResult audit_freeness(const FiniteAction& action, int rho) {
    FreenessAuditResult res;
    res.rho = rho;
    Ball ball = word_ball(action.group, identity_of(action.group), rho);
    for (const auto& g : ball.elements) {
        if (is_identity(g)) continue;
        auto p = action.permutation_of(g);
        for (int x = 0; x < action.size; ++x)
            if (p[x] == x) {
                res.free = false;
                res.witness_g = g;
                res.witness_point = x;
                return res;
            }
    }
    return res;
}

FiniteAction build_odometer(const SubgroupChain& chain, int m,
                            const Int& index_cap) {
    FiniteAction a;
    a.group = chain.group;
    a.is_odometer = true;
    a.stage = m;
    a.cs = std::make_shared<CosetSpace>(coset_space(chain, m, index_cap));
    a.size = static_cast<int>(a.cs->reps.size());
    a.gen_perms.clear();
    const auto& gens = generators_of(a.group);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        std::vector<int> p(a.size);
        for (int x = 0; x < a.size; ++x) p[x] = a.cs->schreier_edges[x][gi];
        a.gen_perms.push_back(std::move(p));
    }
    return a;
}

TowerSystem build_towers(const FiniteAction& action, int n,
                         const Int& index_cap) {
    if (!action.is_odometer)
        throw std::invalid_argument("build_towers: odometer actions only");
    TowerSystem ts;
    ts.action = action;
    ts.n_stage = n;
    ts.r_tower = 0;
    ts.quot = std::make_shared<CosetSpace>(
        coset_space(action.cs->chain, n, index_cap));
    // Stage ordering: G_m must be contained in G_n.
    const auto& dm = action.cs->divs;
    const auto& dn = ts.quot->divs;
    for (std::size_t i = 0; i < dm.size(); ++i)
        if (dm[i] % dn[i] != 0)
            throw std::invalid_argument(
                "build_towers: stage subgroup is not contained in the tower "
                "subgroup");
    int q = static_cast<int>(ts.quot->reps.size());
    ts.values.assign(1, std::vector<std::vector<Rat>>(
                            q, std::vector<Rat>(action.size, Rat(0))));
    for (int x = 0; x < action.size; ++x)
        ts.values[0][ts.quot->id_of(action.cs->reps[x])][x] = 1;
    ts.eps = 0;
    return ts;
}

bool TowerReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

const CheckResult* TowerReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

TowerReport verify_towers(const TowerSystem& ts, const std::vector<Coords>& M) {
    TowerReport rep;
    const FiniteAction& act = ts.action;
    int q = static_cast<int>(ts.quot->reps.size());

    {
        CheckResult c{"sum-to-one", true, "", ""};
        Rat defect = 0;
        for (int x = 0; x < act.size; ++x) {
            Rat s = 0;
            for (const auto& color : ts.values)
                for (const auto& f : color) s += f[x];
            Rat d = s - 1;
            if (d < 0) d = -d;
            if (d > defect) {
                defect = d;
                c.witness = d == 0 ? "" : "point " + std::to_string(x);
            }
        }
        c.measured = defect.str();
        c.pass = defect <= ts.eps;
        rep.eps = std::max(rep.eps, defect);
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"orthogonality", true, "", ""};
        Rat defect = 0;
        for (const auto& color : ts.values)
            for (int a = 0; a < q; ++a)
                for (int b = a + 1; b < q; ++b)
                    for (int x = 0; x < act.size; ++x) {
                        Rat d = color[a][x] * color[b][x];
                        if (d > defect) {
                            defect = d;
                            c.witness = "point " + std::to_string(x);
                        }
                    }
        c.measured = defect.str();
        c.pass = defect <= ts.eps;
        rep.eps = std::max(rep.eps, defect);
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"equivariance", true, "", ""};
        Rat defect = 0;
        for (const auto& g : M) {
            auto perm_ginv = act.permutation_of(invert(act.group, g));
            for (std::size_t l = 0; l < ts.values.size(); ++l)
                for (int h = 0; h < q; ++h) {
                    int gh = ts.quot->id_of(
                        multiply(act.group, g, ts.quot->reps[h]));
                    for (int x = 0; x < act.size; ++x) {
                        Rat d = ts.values[l][h][perm_ginv[x]] -
                                ts.values[l][gh][x];
                        if (d < 0) d = -d;
                        if (d > defect) {
                            defect = d;
                            c.witness = "g = " + coords_to_string(g) +
                                        ", point " + std::to_string(x);
                        }
                    }
                }
        }
        c.measured = defect.str();
        c.pass = defect <= ts.eps;
        rep.eps = std::max(rep.eps, defect);
        rep.checks.push_back(c);
    }
    {
        // Commutators of pointwise-multiplication operators vanish
        // identically in this commutative model.
        CheckResult c{"commutators", true, "", "0"};
        rep.checks.push_back(c);
    }
    return rep;
}

FolnerResult folner_set(const GroupSpec& spec, const std::vector<Coords>& M,
                        const Rat& eps, int size_cap) {
    auto ratio_for = [&](const std::vector<Coords>& J) {
        CoordsSet jset(J.begin(), J.end());
        Rat worst = 0;
        for (const auto& g : M) {
            Int diff = 0;
            CoordsSet gj;
            for (const auto& x : J) gj.insert(multiply(spec, g, x));
            for (const auto& x : J)
                if (!gj.count(x)) diff += 1;
            for (const auto& x : gj)
                if (!jset.count(x)) diff += 1;
            Rat r(diff, Int(J.size()));
            if (r > worst) worst = r;
        }
        return worst;
    };

    FolnerResult res;
    if (spec.kind == GroupKind::FreeAbelian) {
        for (int t = 1; t <= size_cap; ++t) {
            std::vector<Coords> J;
            Coords cur(spec.param, Int(0));
            for (;;) {
                J.push_back(cur);
                int i = spec.param - 1;
                for (; i >= 0; --i) {
                    cur[i] += 1;
                    if (cur[i] < t) break;
                    cur[i] = 0;
                }
                if (i < 0) break;
            }
            Rat r = ratio_for(J);
            if (r <= eps) {
                res.J = std::move(J);
                res.worst_ratio = r;
                res.shape = "box side " + std::to_string(t);
                return res;
            }
        }
    } else {
        for (int r = 0; r <= size_cap; ++r) {
            Ball b = word_ball(spec, identity_of(spec), r);
            Rat ratio = ratio_for(b.elements);
            if (ratio <= eps) {
                res.J = b.elements;
                res.worst_ratio = ratio;
                res.shape = "ball radius " + std::to_string(r);
                return res;
            }
        }
    }
    throw ResourceError("folner_set: cap reached before the bound was met");
}

namespace {

// Per-backend central-series plumbing for the growth recursion. The center
// element is the deepest coordinate: the last entry for Z^m, the (1,3)-entry
// for U_3(Z).
struct CentralLayer {
    GroupSpec quotient;
    int center_idx;

    Coords project(const GroupSpec& spec, const Coords& x) const {
        if (spec.kind == GroupKind::FreeAbelian)
            return Coords(x.begin(), x.end() - 1);
        return {x[0], x[2]};  // U_3: (a, c)
    }
    Coords section(const GroupSpec& spec, const Coords& k) const {
        if (spec.kind == GroupKind::FreeAbelian) {
            Coords out = k;
            out.push_back(0);
            return out;
        }
        return {k[0], 0, k[1]};
    }
    Int central_exp(const GroupSpec& spec, const Coords& x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (static_cast<int>(i) != center_idx && x[i] != 0)
                throw std::logic_error("element is not central");
        return x[center_idx];
    }
    Coords central_pow(const GroupSpec& spec, const Int& e) const {
        Coords out = identity_of(spec);
        out[center_idx] = e;
        return out;
    }
};

CentralLayer central_layer(const GroupSpec& spec) {
    if (spec.kind == GroupKind::FreeAbelian) {
        if (spec.param < 2)
            throw std::invalid_argument("no proper central quotient for Z");
        return {free_abelian(spec.param - 1), spec.param - 1};
    }
    if (spec.kind == GroupKind::Unitriangular && spec.param == 3)
        return {free_abelian(2), ut_index(3, 1, 3)};
    throw std::invalid_argument("nilpotent_growth: supported backends are Z^m "
                                "and U_3(Z)");
}

struct LevelCert {
    std::vector<Coords> F;
    std::vector<Coords> translators;
    std::vector<Coords> F0_lift;  // sections of the quotient-level F
    Int n = 0;
    int hirsch = 0;
};

LevelCert growth_rec(const GroupSpec& spec, const std::vector<Coords>& M) {
    LevelCert cert;
    if (spec.kind == GroupKind::FreeAbelian && spec.param == 1) {
        Int n = 0;
        for (const auto& m : M) n = std::max(n, Int(abs(m[0])));
        cert.n = n;
        for (Int i = -3 * n; i <= 3 * n; ++i) cert.F.push_back({i});
        for (int i = -1; i <= 1; ++i) cert.translators.push_back({4 * n * i});
        cert.hirsch = 1;
        return cert;
    }

    CentralLayer layer = central_layer(spec);
    std::vector<Coords> Mbar;
    for (const auto& m : M) Mbar.push_back(layer.project(spec, m));
    std::sort(Mbar.begin(), Mbar.end());
    Mbar.erase(std::unique(Mbar.begin(), Mbar.end()), Mbar.end());
    LevelCert sub = growth_rec(layer.quotient, Mbar);

    // Quotient-level member lookup.
    CoordsSet F0(sub.F.begin(), sub.F.end());
    auto find_translator = [&](const Coords& xbar) {
        for (std::size_t j = 0; j < sub.translators.size(); ++j) {
            bool ok = true;
            for (const auto& mb : Mbar) {
                Coords y = multiply(layer.quotient, mb, xbar);
                Coords f0 = multiply(layer.quotient,
                                     invert(layer.quotient, sub.translators[j]),
                                     y);
                if (!F0.count(f0)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return static_cast<int>(j);
        }
        throw std::logic_error("quotient growth certificate is incomplete");
    };

    // n bounds the central discrepancy between m * sigma(k1)^-1 sigma(k2)
    // and its sectioned image through the chosen translator.
    Int n = 0;
    for (std::size_t i1 = 0; i1 < sub.F.size(); ++i1)
        for (std::size_t i2 = 0; i2 < sub.F.size(); ++i2) {
            Coords xbar = multiply(layer.quotient,
                                   invert(layer.quotient, sub.F[i1]),
                                   sub.F[i2]);
            int j = find_translator(xbar);
            Coords sk1 = layer.section(spec, sub.F[i1]);
            Coords sk2 = layer.section(spec, sub.F[i2]);
            Coords tail = multiply(spec, invert(spec, sk1), sk2);
            for (const auto& m : M) {
                Coords mbar = layer.project(spec, m);
                Coords y = multiply(layer.quotient, mbar, xbar);
                Coords f0 = multiply(layer.quotient,
                                     invert(layer.quotient, sub.translators[j]),
                                     y);
                Coords target = multiply(
                    spec, layer.section(spec, sub.translators[j]),
                    layer.section(spec, f0));
                Coords actual = multiply(spec, m, tail);
                Int e = layer.central_exp(
                    spec, multiply(spec, invert(spec, target), actual));
                n = std::max(n, Int(abs(e)));
            }
        }

    cert.n = n;
    cert.hirsch = sub.hirsch + 1;
    for (const auto& k : sub.F) {
        Coords sk = layer.section(spec, k);
        cert.F0_lift.push_back(sk);
        for (Int i = -3 * n; i <= 3 * n; ++i)
            cert.F.push_back(multiply(spec, sk, layer.central_pow(spec, i)));
    }
    for (int i = -1; i <= 1; ++i)
        for (const auto& h : sub.translators)
            cert.translators.push_back(
                multiply(spec, layer.central_pow(spec, Int(4) * n * i),
                         layer.section(spec, h)));
    return cert;
}

}  // namespace

GrowthCertificate nilpotent_growth(const GroupSpec& spec,
                                   const std::vector<Coords>& M) {
    for (const auto& m : M) check_conforms(spec, m);
    LevelCert lc = growth_rec(spec, M);
    GrowthCertificate cert;
    cert.group = spec;
    cert.M = M;
    cert.F = std::move(lc.F);
    cert.translators = std::move(lc.translators);
    cert.hirsch = lc.hirsch;
    cert.quotient_F = std::move(lc.F0_lift);
    cert.n = static_cast<int>(lc.n);
    Int expected = 1;
    for (int i = 0; i < cert.hirsch; ++i) expected *= 3;
    if (Int(cert.translators.size()) != expected)
        throw std::logic_error("translator count is not 3^hirsch");
    return cert;
}

GrowthCheckResult verify_growth(const GrowthCertificate& cert) {
    GrowthCheckResult res;
    const GroupSpec& spec = cert.group;

    // F^-1 F enumerated in layered form: central exponents commute, so
    // every quotient F^-1 F = { t^delta * sigma(k1)^-1 sigma(k2) } with
    // |delta| <= 6n; for the base layer just take pairwise quotients.
    std::vector<Coords> fif;
    {
        CoordsSet seen;
        if (cert.quotient_F.empty()) {
            for (const auto& a : cert.F)
                for (const auto& b : cert.F) {
                    Coords q = multiply(spec, invert(spec, a), b);
                    if (seen.insert(q).second) fif.push_back(q);
                }
        } else {
            int center_idx = spec.kind == GroupKind::FreeAbelian
                                 ? spec.param - 1
                                 : ut_index(3, 1, 3);
            for (const auto& a : cert.quotient_F)
                for (const auto& b : cert.quotient_F) {
                    Coords base = multiply(spec, invert(spec, a), b);
                    for (Int d = -6 * cert.n; d <= 6 * cert.n; ++d) {
                        Coords x = base;
                        x[center_idx] += d;
                        if (seen.insert(x).second) fif.push_back(x);
                    }
                }
        }
    }

    CoordsSet fset(cert.F.begin(), cert.F.end());
    std::vector<Coords> inv_translators;
    for (const auto& g : cert.translators)
        inv_translators.push_back(invert(spec, g));

    for (const auto& x : fif) {
        std::vector<Coords> mx;
        for (const auto& m : cert.M) mx.push_back(multiply(spec, m, x));
        bool ok = false;
        for (const auto& gj : inv_translators) {
            bool all = true;
            for (const auto& y : mx)
                if (!fset.count(multiply(spec, gj, y))) {
                    all = false;
                    break;
                }
            if (all) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            res.pass = false;
            res.witness_x = x;
            res.witness_mx = mx.empty() ? x : mx[0];
            return res;
        }
    }
    return res;
}

MarkerResult marker_search(const FiniteAction& action,
                           const std::vector<Coords>& F,
                           const std::vector<Coords>& translators,
                           std::uint64_t seed) {
    const GroupSpec& spec = action.group;
    // F^-1 F as a set of group elements.
    std::vector<Coords> fif;
    {
        CoordsSet seen;
        for (const auto& a : F)
            for (const auto& b : F) {
                Coords q = multiply(spec, invert(spec, a), b);
                if (seen.insert(q).second) fif.push_back(q);
            }
    }
    // Pre: the translator-shifted F^-1 F sets are pairwise disjoint.
    for (std::size_t i = 0; i < translators.size(); ++i)
        for (std::size_t j = i + 1; j < translators.size(); ++j) {
            CoordsSet si;
            for (const auto& q : fif)
                si.insert(multiply(spec, translators[i], q));
            for (const auto& q : fif)
                if (si.count(multiply(spec, translators[j], q)))
                    throw std::invalid_argument(
                        "marker_search: translator sets g_l F^-1 F are not "
                        "pairwise disjoint");
        }

    std::vector<std::vector<int>> f_perms;
    for (const auto& f : F) f_perms.push_back(action.permutation_of(f));
    std::vector<std::vector<int>> cover_perms;
    for (const auto& t : translators)
        for (const auto& q : fif)
            cover_perms.push_back(
                action.permutation_of(multiply(spec, t, q)));

    std::vector<int> order(action.size);
    std::iota(order.begin(), order.end(), 0);
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    MarkerResult res;
    std::vector<char> used(action.size, 0);
    for (int x : order) {
        std::vector<int> images;
        bool ok = true;
        for (const auto& p : f_perms) {
            int y = p[x];
            if (used[y] ||
                std::find(images.begin(), images.end(), y) != images.end()) {
                ok = false;
                break;
            }
            images.push_back(y);
        }
        if (!ok) continue;
        res.Z.push_back(x);
        for (int y : images) used[y] = 1;
    }
    std::sort(res.Z.begin(), res.Z.end());

    std::vector<char> covered(action.size, 0);
    for (int z : res.Z)
        for (const auto& p : cover_perms) covered[p[z]] = 1;
    for (int x = 0; x < action.size; ++x)
        if (!covered[x]) res.uncovered.push_back(x);
    res.found = res.uncovered.empty();
    return res;
}

Coords AmdimWitness::reduce_index(const Coords& g) const {
    if (index_mod.empty()) return g;
    return divisor_canon(action.group, index_mod, g);
}

bool WitnessReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

const CheckResult* WitnessReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

AmdimWitness build_amdim_witness_product(const TowerSystem& ts,
                                         const DecayFamily& family) {
    const FiniteAction& act = ts.action;
    if (!(act.group == family.group))
        throw std::invalid_argument("product witness: group mismatch");
    if (ts.quot->divs != family.period_divisors)
        throw std::invalid_argument("product witness: period stage mismatch");
    if (!family.supports_complete)
        throw std::invalid_argument("product witness: family supports must be "
                                    "complete");

    AmdimWitness w;
    w.action = act;
    w.M = generators_of(act.group);
    w.am_d = static_cast<int>(ts.values.size() * family.functions.size()) - 1;

    // eps: the decay family's exact sup-shift over the generators.
    Rat shift = 0;
    for (const auto& g : w.M) {
        Coords ginv = invert(act.group, g);
        for (std::size_t j = 0; j < family.functions.size(); ++j) {
            std::vector<Coords> us;
            for (const auto& [p, v] : family.functions[j]) {
                us.push_back(p);
                us.push_back(multiply(act.group, ginv, p));
            }
            std::sort(us.begin(), us.end());
            us.erase(std::unique(us.begin(), us.end()), us.end());
            for (const auto& u : us) {
                Rat a = family.value(j, u).value_or(Rat(0));
                Rat b = family.value(j, multiply(act.group, g, u)).value_or(Rat(0));
                Rat d = a - b;
                if (d < 0) d = -d;
                if (d > shift) shift = d;
            }
        }
    }
    w.eps = shift;

    // mu^{(l,j)}_g = nu^{(j)}(g) * f^{(l)}_{gbar}
    for (std::size_t l = 0; l < ts.values.size(); ++l)
        for (std::size_t j = 0; j < family.functions.size(); ++j) {
            std::map<Coords, std::vector<Rat>> fam;
            for (const auto& [g, v] : family.functions[j]) {
                int gbar = ts.quot->id_of(g);
                std::vector<Rat> vals(act.size);
                for (int x = 0; x < act.size; ++x)
                    vals[x] = v * ts.values[l][gbar][x];
                fam.emplace(g, std::move(vals));
            }
            w.families.push_back(std::move(fam));
        }
    return w;
}

AmdimWitness build_amdim_witness_folner(const FiniteAction& action,
                                        const GrowthCertificate& growth,
                                        const MarkerResult& markers,
                                        const std::vector<Coords>& J) {
    if (!action.is_odometer || action.group.kind != GroupKind::FreeAbelian ||
        action.group.param != 1)
        throw std::invalid_argument(
            "folner witness: implemented for Z odometer models");
    if (!markers.found)
        throw std::invalid_argument("folner witness: marker search failed");
    Int expected = 1;
    for (int i = 0; i < growth.hirsch; ++i) expected *= 3;
    if (Int(markers.Z.size()) != expected)
        throw std::invalid_argument(
            "folner witness: marker count must equal 3^hirsch");
    if (J.empty()) throw std::invalid_argument("folner witness: empty J");

    const Int N = action.size;
    auto num_of = [&](int x) { return action.cs->reps[x][0]; };
    auto id_of_num = [&](const Int& v) {
        Int r = v % N;
        if (r < 0) r += N;
        return action.cs->id_of({r});
    };

    // Marker positions in circle order; block j is the half-open arc from
    // marker j to the next marker.
    std::vector<Int> zpos;
    for (int z : markers.Z) zpos.push_back(num_of(z));
    std::sort(zpos.begin(), zpos.end());
    int m = static_cast<int>(zpos.size());
    auto assign = [&](const Int& vraw) {
        Int v = vraw % N;
        if (v < 0) v += N;
        int j = m - 1;  // values below zpos[0] wrap into the last block
        for (int i = 0; i < m; ++i)
            if (zpos[i] <= v) j = i;
        Int u = v - zpos[j];
        if (u < 0) u += N;
        return std::make_pair(j, u);
    };

    AmdimWitness w;
    w.action = action;
    w.M = generators_of(action.group);
    w.am_d = m - 1;
    w.index_mod = {N};

    // Certified bound: max_g |J delta gJ| / |J| over the shift generators.
    {
        CoordsSet jset(J.begin(), J.end());
        Rat worst = 0;
        for (const auto& g : w.M) {
            Int diff = 0;
            CoordsSet gj;
            for (const auto& x : J)
                gj.insert(multiply(action.group, g, x));
            for (const auto& x : J)
                if (!gj.count(x)) diff += 1;
            for (const auto& x : gj)
                if (!jset.count(x)) diff += 1;
            Rat r(diff, Int(J.size()));
            if (r > worst) worst = r;
        }
        w.eps = worst;
    }

    // mu^{(j)}_g(x) = (1/|J|) |{ h in J : assign(x - h) = (j, g - h) }|
    // with indices g in Z/N.
    for (int j = 0; j < m; ++j) {
        std::map<Coords, std::vector<Rat>> fam;
        for (Int g = 0; g < N; ++g) {
            std::vector<Rat> vals(action.size, Rat(0));
            bool any = false;
            for (int x = 0; x < action.size; ++x) {
                Int xv = num_of(x);
                Int hits = 0;
                for (const auto& h : J) {
                    auto [bj, bu] = assign(xv - h[0]);
                    if (bj != j) continue;
                    Int gu = (g - h[0]) % N;
                    if (gu < 0) gu += N;
                    if (bu == gu) hits += 1;
                }
                if (hits != 0) {
                    vals[x] = Rat(hits, Int(J.size()));
                    any = true;
                }
            }
            if (any) fam.emplace(Coords{g}, std::move(vals));
        }
        w.families.push_back(std::move(fam));
    }
    return w;
}

WitnessReport verify_witness(const AmdimWitness& w) {
    WitnessReport rep;
    const FiniteAction& act = w.action;

    {
        CheckResult c{"partition-of-unity", true, "", ""};
        for (int x = 0; x < act.size && c.pass; ++x) {
            Rat s = 0;
            for (const auto& fam : w.families)
                for (const auto& [g, vals] : fam) s += vals[x];
            if (s != 1) {
                c.pass = false;
                c.witness = "point " + std::to_string(x) + " sums to " + s.str();
            }
        }
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"orthogonality", true, "", ""};
        for (std::size_t l = 0; l < w.families.size() && c.pass; ++l) {
            const auto& fam = w.families[l];
            for (auto it1 = fam.begin(); it1 != fam.end() && c.pass; ++it1)
                for (auto it2 = std::next(it1); it2 != fam.end() && c.pass;
                     ++it2)
                    for (int x = 0; x < act.size; ++x)
                        if (it1->second[x] != 0 && it2->second[x] != 0) {
                            c.pass = false;
                            c.witness = "family " + std::to_string(l) +
                                        " indices " +
                                        coords_to_string(it1->first) + ", " +
                                        coords_to_string(it2->first) +
                                        " overlap at point " +
                                        std::to_string(x);
                            break;
                        }
        }
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"shift-defect", true, "", ""};
        Rat defect = 0;
        for (const auto& g : w.M) {
            auto perm_ginv = act.permutation_of(invert(act.group, g));
            for (const auto& fam : w.families) {
                // h over keys and g^-1 * keys so both sides are covered.
                std::vector<Coords> hs;
                Coords ginv = invert(act.group, g);
                for (const auto& [k, vals] : fam) {
                    hs.push_back(k);
                    hs.push_back(w.reduce_index(multiply(act.group, ginv, k)));
                }
                std::sort(hs.begin(), hs.end());
                hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
                for (const auto& h : hs) {
                    auto ith = fam.find(h);
                    auto itgh = fam.find(
                        w.reduce_index(multiply(act.group, g, h)));
                    for (int x = 0; x < act.size; ++x) {
                        Rat a = ith == fam.end() ? Rat(0)
                                                 : ith->second[perm_ginv[x]];
                        Rat b = itgh == fam.end() ? Rat(0) : itgh->second[x];
                        Rat d = a - b;
                        if (d < 0) d = -d;
                        if (d > defect) defect = d;
                    }
                }
            }
        }
        rep.measured_defect = defect;
        c.measured = defect.str();
        if (defect > w.eps) {
            c.pass = false;
            c.witness = "measured defect " + defect.str() +
                        " exceeds certified eps " + w.eps.str();
        }
        rep.checks.push_back(c);
    }
    return rep;
}

SimplicialReport witness_to_simplicial_map(const AmdimWitness& w) {
    SimplicialReport rep;
    const FiniteAction& act = w.action;
    rep.bound = Rat(2 * (w.am_d + 1)) * w.eps;
    for (const auto& g : w.M) {
        auto perm_g = act.permutation_of(g);
        Coords ginv = invert(act.group, g);
        for (int x = 0; x < act.size; ++x) {
            // l1 distance between phi(alpha_g x) and g * phi(x): the
            // coefficient of vertex (l,u) is mu_u(alpha_g x) vs mu_{g^-1 u}(x).
            Rat sum = 0;
            for (const auto& fam : w.families) {
                std::vector<Coords> us;
                for (const auto& [k, vals] : fam) {
                    us.push_back(k);
                    us.push_back(w.reduce_index(multiply(act.group, g, k)));
                }
                std::sort(us.begin(), us.end());
                us.erase(std::unique(us.begin(), us.end()), us.end());
                for (const auto& u : us) {
                    auto itu = fam.find(u);
                    auto itgu = fam.find(
                        w.reduce_index(multiply(act.group, ginv, u)));
                    Rat a = itu == fam.end() ? Rat(0) : itu->second[perm_g[x]];
                    Rat b = itgu == fam.end() ? Rat(0) : itgu->second[x];
                    Rat d = a - b;
                    if (d < 0) d = -d;
                    sum += d;
                }
            }
            if (sum > rep.measured_defect) rep.measured_defect = sum;
        }
    }
    rep.pass = rep.measured_defect <= rep.bound;
    return rep;
}

}  // namespace boxdim
