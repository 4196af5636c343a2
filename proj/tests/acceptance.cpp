// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.

#include "boxdim/dynamics.hpp"
#include "boxdim/io.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace boxdim;

namespace {

int failures = 0;

void report(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

ColoredCover demo_cover_z() {
    ColoredCover c;
    c.group = free_abelian(1);
    c.period_divisors = {8};
    c.scale_R = 1;
    c.colors.push_back({explicit_base({{0}, {1}, {2}, {3}, {4}, {5}})});
    c.colors.push_back({explicit_base({{4}, {5}, {6}, {7}, {8}, {9}})});
    return c;
}

// ---------------------------------------------------------------- criterion 1
void criterion_covers_zm(std::vector<std::pair<ColoredCover, int>>& out_covers) {
    struct Case { int m, L, R; };
    bool ok = true;
    std::string detail;
    for (Case c : {Case{1, 8, 1}, Case{1, 16, 2}, Case{2, 8, 1},
                   Case{2, 16, 2}, Case{3, 8, 1}}) {
        auto t0 = std::chrono::steady_clock::now();
        ColoredCover cover = synth_shifted_cover_zm(c.m, c.L);
        GroupSpec g = free_abelian(c.m);
        Ball window = word_ball(g, identity_of(g), 5 * c.L);
        CoverReport rep = verify_cover(cover, window, c.R, 4);
        double dt = seconds_since(t0);
        bool case_ok = rep.pass() && cover.s() == c.m &&
                       rep.multiplicity <= c.m + 1 && dt < 60.0;
        if (!case_ok) {
            ok = false;
            detail += " (m=" + std::to_string(c.m) + ",L=" +
                      std::to_string(c.L) + " failed)";
        }
        out_covers.emplace_back(std::move(cover), c.R);
    }
    report(ok, "Z^m shifted-cube covers: m+1 colors, multiplicity <= m+1, "
               "Lebesgue >= R on radius-5L windows for the five pinned "
               "(m,L,R) cases, each under 60 s" + detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion_covers_u3(std::vector<std::pair<ColoredCover, int>>& out_covers) {
    auto t0 = std::chrono::steady_clock::now();
    GroupSpec u3 = unitriangular(3);
    Ball window = word_ball(u3, identity_of(u3), 8);
    ColoredCover base = u3_base_cover();
    bool ok = true;

    // k = 2 of the standard base certifies scale 1; its own alpha_2 rescale
    // (a 4-color alpha_2-scaled brick cover) certifies scale 2.
    ColoredCover k2 = synth_scaled_cover_ud(3, 2, base);
    ok = ok && k2.colors.size() == 4 && verify_cover(k2, window, 1, 4).pass();
    ColoredCover k2big = synth_scaled_cover_ud(3, 2, k2);
    ok = ok && k2big.colors.size() == 4 &&
         verify_cover(k2big, window, 2, 4).pass();

    ColoredCover k6 = synth_scaled_cover_ud(3, 6, base);
    ok = ok && k6.colors.size() == 4;
    for (int R : {1, 2}) ok = ok && verify_cover(k6, window, R, 4).pass();

    double dt = seconds_since(t0);
    ok = ok && dt < 300.0;
    out_covers.emplace_back(std::move(k2), 1);
    out_covers.emplace_back(std::move(k6), 2);
    report(ok, "U_3 scaled brick covers: 4 colors pass Lebesgue R in {1,2} "
               "for scalings built from k in {2,6} on radius-8 windows, "
               "under 5 min");
}

// ---------------------------------------------------------------- criterion 3
void criterion_decay(const std::vector<std::pair<ColoredCover, int>>& zm_covers,
                     const std::vector<std::pair<ColoredCover, int>>& u3_covers) {
    bool ok = true;
    std::string detail;

    auto audit = [&](const ColoredCover& cover, int R, const Ball& window,
                     int margin, const Int& cap) {
        DecayFamily fam = cover_to_decay(cover, window, cap);
        DecayReport rep = verify_decay(fam, window, fam.scale_M,
                                       fam.tolerance_eps, margin);
        bool case_ok = rep.pass();
        // Lipschitz constant of the distance-ratio construction
        case_ok = case_ok &&
                  rep.sup_shift <= Rat(2 * (2 * cover.s() + 3),
                                       std::max(1, cover.scale_R));
        if (case_ok && fam.supports_complete &&
            rep.sup_shift < Rat(1, cover.s() + 1)) {
            auto rt = decay_to_cover(fam, window);
            case_ok = rt.verified_R >= R;
        }
        return case_ok;
    };

    for (const auto& [cover, R] : zm_covers) {
        GroupSpec g = cover.group;
        // smaller audit window than the cover certificate; margins stay exact
        int radius = g.param >= 3 ? 16 : 32;
        Ball window = word_ball(g, identity_of(g), radius);
        if (!audit(cover, R, window, 0, Int(20000))) {
            ok = false;
            detail += " (Z^" + std::to_string(g.param) + " failed)";
        }
    }
    for (const auto& [cover, R] : u3_covers) {
        Ball window = word_ball(cover.group, identity_of(cover.group), 6);
        if (!audit(cover, R, window, 1, Int(5000))) {
            ok = false;
            detail += " (U_3 failed)";
        }
    }
    report(ok, "decay exactness: partition sums exactly 1 on audited points, "
               "sup-shift <= 2(2s+3)/R, and the support cover re-verifies at "
               "the same R whenever the measured shift is below 1/(s+1)" +
               detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_schreier() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(2026);
    bool ok = true;

    // Z/6 and Z^2/2Z^2: the word metric on Z^m is the l1 norm, so the
    // infimum over the subgroup is a closed-form lattice minimization.
    {
        SubgroupChain ch = factorial_abelian_chain(free_abelian(1));
        CosetSpace cs = coset_space(ch, 3);
        std::uniform_int_distribution<int> pt(-50, 50);
        for (int t = 0; t < 1000 && ok; ++t) {
            Int x = pt(rng), y = pt(rng);
            Int best = -1;
            for (Int k = -20; k <= 20; ++k) {
                Int d = abs(x + 6 * k - y);
                if (best < 0 || d < best) best = d;
            }
            ok = quotient_distance(cs, {x}, {y}) == best;
        }
    }
    {
        SubgroupChain ch = factorial_abelian_chain(free_abelian(2));
        CosetSpace cs = coset_space(ch, 2);
        std::uniform_int_distribution<int> pt(-20, 20);
        for (int t = 0; t < 1000 && ok; ++t) {
            Coords x{pt(rng), pt(rng)}, y{pt(rng), pt(rng)};
            Int best = -1;
            for (Int k0 = -42; k0 <= 42; k0 += 2)
                for (Int k1 = -42; k1 <= 42; k1 += 2) {
                    Int d = abs(x[0] + k0 - y[0]) + abs(x[1] + k1 - y[1]);
                    if (best < 0 || d < best) best = d;
                }
            ok = quotient_distance(cs, x, y) == best;
        }
    }
    // U_3 / alpha_2 image: brute force over subgroup elements of a ball that
    // provably contains every minimizer, with an independent distance table.
    {
        GroupSpec u3 = unitriangular(3);
        SubgroupChain ch = scaled_unitriangular_chain(u3);
        CosetSpace cs = coset_space(ch, 1);
        int diam = cs.diameter();
        Ball pool = word_ball(u3, identity_of(u3), 4);
        Ball gball = word_ball(u3, identity_of(u3), 8 + diam);
        std::vector<Coords> subgroup;
        for (const auto& g : gball.elements)
            if (ch.contains(1, g)) subgroup.push_back(g);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int t = 0; t < 1000 && ok; ++t) {
            Coords x = pool.elements[pick(rng)], y = pool.elements[pick(rng)];
            Coords yinv = invert(u3, y);
            int best = -1;
            for (const auto& g : subgroup) {
                Coords w = multiply(u3, multiply(u3, x, g), yinv);
                auto it = gball.distance_of.find(w);
                if (it == gball.distance_of.end()) continue;
                if (best < 0 || it->second < best) best = it->second;
            }
            ok = quotient_distance(cs, x, y) == best;
        }
    }
    double dt = seconds_since(t0);
    report(ok && dt < 60.0,
           "Schreier-metric oracle: quotient_distance equals the brute-force "
           "infimum over subgroup translates on 1000 random pairs each for "
           "Z/6, Z^2/2Z^2 and the 16-point U_3 quotient, under 60 s");
}

// ---------------------------------------------------------------- criterion 5
void criterion_isometry() {
    bool ok = true;
    int hypotheses = 0;
    std::mt19937 rng(7);

    auto sweep = [&](const SubgroupChain& ch, int stage,
                     const std::vector<Coords>& xs, int maxR) {
        CosetSpace cs = coset_space(ch, stage);
        for (const auto& x : xs)
            for (int R = 1; R <= maxR; ++R) {
                auto res = isometry_radius_check(cs, x, R);
                if (!res.hypothesis_holds) continue;
                ++hypotheses;
                if (!res.isometric || !res.image_is_ball || res.has_witness)
                    ok = false;
            }
    };

    std::vector<Coords> zs;
    std::uniform_int_distribution<int> zpt(-20, 20);
    for (int i = 0; i < 10; ++i) zs.push_back({zpt(rng)});
    sweep(factorial_abelian_chain(free_abelian(1)), 4, zs, 3);
    sweep(factorial_abelian_chain(free_abelian(1)), 5, zs, 8);

    std::vector<Coords> z2s;
    for (int i = 0; i < 6; ++i) z2s.push_back({zpt(rng), zpt(rng)});
    sweep(factorial_abelian_chain(free_abelian(2)), 4, z2s, 3);

    GroupSpec u3 = unitriangular(3);
    Ball pool = word_ball(u3, identity_of(u3), 3);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<Coords> us;
    for (int i = 0; i < 5; ++i) us.push_back(pool.elements[pick(rng)]);
    sweep(scaled_unitriangular_chain(u3), 2, us, 2);
    sweep(congruence_unitriangular_chain(u3), 4, us, 2);

    report(ok && hypotheses > 0,
           "isometry radius: whenever the quotient map is injective on "
           "B_3R(x), distances on B_R(x) are preserved exactly and the image "
           "is the quotient ball (" + std::to_string(hypotheses) +
               " hypothesis instances, zero counterexamples)");
}

// ---------------------------------------------------------------- criterion 6
void criterion_towers() {
    bool ok = true;
    SubgroupChain zch = factorial_abelian_chain(free_abelian(1));
    FiniteAction za = build_odometer(zch, 3);
    for (int n : {1, 2}) {
        TowerSystem ts = build_towers(za, n);
        TowerReport rep = verify_towers(ts, generators_of(za.group));
        ok = ok && rep.pass() && rep.eps == 0 && rep.checks.size() == 4;
    }
    SubgroupChain uch = scaled_unitriangular_chain(unitriangular(3));
    FiniteAction ua = build_odometer(uch, 1);
    TowerSystem uts = build_towers(ua, 1);
    TowerReport urep = verify_towers(uts, generators_of(ua.group));
    ok = ok && ua.size == 16 && urep.pass() && urep.eps == 0;
    report(ok, "exact Rokhlin towers: measured eps = 0 for all four "
               "conditions at stage pairs (1,3), (2,3) over Z and on the "
               "16-point U_3 model");
}

// ---------------------------------------------------------------- criterion 7
void criterion_product_witness() {
    bool ok = true;
    GroupSpec z = free_abelian(1);
    Ball window = word_ball(z, {0}, 40);
    DecayFamily fam = cover_to_decay(demo_cover_z(), window);
    DecayReport drep = verify_decay(fam, window, fam.scale_M,
                                    fam.tolerance_eps);
    ok = ok && drep.pass();

    for (int m : {1, 2}) {
        SubgroupChain ch = custom_chain(z, {{8}, {24}});
        FiniteAction act = build_odometer(ch, m);
        TowerSystem ts = build_towers(act, 1);
        AmdimWitness w = build_amdim_witness_product(ts, fam);
        WitnessReport rep = verify_witness(w);
        ok = ok && rep.pass();
        ok = ok && (w.am_d + 1) <= (ts.r_tower + 1) * (fam.s() + 1);
        // measured per-element defect is exactly the decay sup-shift
        ok = ok && rep.measured_defect == drep.sup_shift;
        ok = ok && w.eps == drep.sup_shift;
    }
    report(ok, "product witnesses: family count (am_d+1) <= (s+1)(r+1) and "
               "the measured shift defect equals the decay sup-shift exactly "
               "(1/3) on the Z/8 and Z/24 odometer stages");
}

// ---------------------------------------------------------------- criterion 8
void criterion_growth() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;

    GroupSpec z = free_abelian(1);
    GrowthCertificate cz =
        nilpotent_growth(z, {{-2}, {-1}, {0}, {1}, {2}});
    ok = ok && cz.F.size() == 13 && cz.F.front() == Coords{-6} &&
         cz.F.back() == Coords{6};  // F = {-3n..3n} with n = 2
    ok = ok && cz.translators.size() == 3 && verify_growth(cz).pass;

    GroupSpec z2 = free_abelian(2);
    GrowthCertificate c2 = nilpotent_growth(z2, generators_of(z2));
    ok = ok && c2.translators.size() == 9 && verify_growth(c2).pass;

    GroupSpec u3 = unitriangular(3);
    GrowthCertificate c3 = nilpotent_growth(u3, generators_of(u3));
    double dt = seconds_since(t0);
    ok = ok && c3.translators.size() == 27 && verify_growth(c3).pass;
    ok = ok && dt < 300.0;
    report(ok, "nilpotent growth: certificates for Z (M = B_2, 3 "
               "translators), Z^2 (9) and U_3 (27, M = generators) pass the "
               "exhaustive F^-1 F check with 3^l translators, under 5 min");
}

// ---------------------------------------------------------------- criterion 9
void criterion_folner_witness() {
    bool ok = true;
    GroupSpec z = free_abelian(1);
    SubgroupChain ch = custom_chain(z, {{8}, {24}});
    FiniteAction act = build_odometer(ch, 2);
    GrowthCertificate growth = nilpotent_growth(z, {{-1}, {0}, {1}});
    MarkerResult markers = marker_search(act, growth.F, {{0}});
    ok = ok && markers.found && markers.Z.size() == 3;

    std::vector<Coords> J;
    for (Int i = 0; i < 8; ++i) J.push_back({i});
    AmdimWitness w = build_amdim_witness_folner(act, growth, markers, J);
    // |J delta (J+1)| / |J| = 2/8 certifies the condition-(c) bound
    ok = ok && w.eps == Rat(1, 4);
    WitnessReport rep = verify_witness(w);
    ok = ok && rep.pass() && rep.measured_defect <= Rat(1, 4);

    SimplicialReport sm = witness_to_simplicial_map(w);
    ok = ok && sm.bound == Rat(2 * (w.am_d + 1)) * w.eps && sm.pass;
    report(ok, "Folner-averaged witness on the Z/24 odometer: marker blocks "
               "verify all conditions with shift bound |J delta (J+1)|/|J| = "
               "1/4 for the size-8 interval, and the simplicial report bounds "
               "the l1 defect by 2(am_d+1)eps");
}

// --------------------------------------------------------------- criterion 10
void criterion_negative_controls() {
    bool ok = true;
    GroupSpec z = free_abelian(1);

    // demo cover rejects scale 2 and names x = 8 among the witnesses
    ColoredCover c = demo_cover_z();
    Ball window = word_ball(z, {0}, 40);
    CoverReport rep = verify_cover(c, window, 2, 1);
    const CheckResult* leb = rep.find("lebesgue_at_R");
    ok = ok && !rep.pass() && leb && !leb->pass &&
         leb->witness.find("8") != std::string::npos;
    bool covered8 = false;
    for (const auto& m : members_containing(c, {8})) {
        bool whole = true;
        for (Int v = 6; v <= 10; ++v)
            if (!member_contains(c, m, {v})) whole = false;
        if (whole) covered8 = true;
    }
    ok = ok && !covered8;

    // the constant chain 6Z never injects B_3: -3 and 3 collide forever
    SubgroupChain constant = custom_chain(z, {{6}, {6}, {6}, {6}});
    auto inj = injective_radius_stage(constant, 3, 0, 1, 4);
    ok = ok && !inj.found;
    ok = ok && divisor_canon(z, {6}, {-3}) == divisor_canon(z, {6}, {3});

    // a perturbed tower reports a nonzero eps with a witness point
    FiniteAction act = build_odometer(factorial_abelian_chain(z), 3);
    TowerSystem ts = build_towers(act, 2);
    ts.values[0][0][0] = Rat(1, 2);
    TowerReport trep = verify_towers(ts, generators_of(z));
    bool witnessed = false;
    for (const auto& chk : trep.checks)
        if (!chk.pass && !chk.witness.empty()) witnessed = true;
    ok = ok && !trep.pass() && trep.eps > 0 && witnessed;

    report(ok, "negative controls: the period-8 cover fails Lebesgue at R=2 "
               "with witness 8, the constant 6Z chain never injects B_3 "
               "(-3 = 3 mod 6), and a perturbed tower reports nonzero eps "
               "with a witness point");
}

}  // namespace

int main() {
    std::vector<std::pair<ColoredCover, int>> zm_covers, u3_covers;
    criterion_covers_zm(zm_covers);
    criterion_covers_u3(u3_covers);
    criterion_decay(zm_covers, u3_covers);
    criterion_schreier();
    criterion_isometry();
    criterion_towers();
    criterion_product_witness();
    criterion_growth();
    criterion_folner_witness();
    criterion_negative_controls();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
