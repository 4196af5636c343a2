#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "boxdim/dynamics.hpp"

using namespace boxdim;

static ColoredCover demo_cover_z() {
    ColoredCover c;
    c.group = free_abelian(1);
    c.period_divisors = {8};
    c.scale_R = 1;
    c.colors.push_back({explicit_base({{0}, {1}, {2}, {3}, {4}, {5}})});
    c.colors.push_back({explicit_base({{4}, {5}, {6}, {7}, {8}, {9}})});
    return c;
}

TEST_CASE("odometer on Z/6: relations, freeness, translation") {
    SubgroupChain ch = factorial_abelian_chain(free_abelian(1));
    FiniteAction a = build_odometer(ch, 3);
    CHECK(a.size == 6);
    CHECK(audit_relations(a).pass);
    CHECK(audit_freeness(a, 5).free);

    // alpha_2 is the square of alpha_1
    auto p1 = a.permutation_of({1});
    auto p2 = a.permutation_of({2});
    for (int x = 0; x < 6; ++x) CHECK(p2[x] == p1[p1[x]]);
    // alpha_6 is trivial on Z/6
    auto p6 = a.permutation_of({6});
    for (int x = 0; x < 6; ++x) CHECK(p6[x] == x);
}

TEST_CASE("odometer on the 16-point U_3 model is free and consistent") {
    SubgroupChain ch = scaled_unitriangular_chain(unitriangular(3));
    FiniteAction a = build_odometer(ch, 1);
    CHECK(a.size == 16);
    CHECK(audit_relations(a).pass);
    // free only below the shortest subgroup element: (2,0,0) has length 2
    // and fixes the identity coset
    CHECK(audit_freeness(a, 1).free);
    auto res = audit_freeness(a, 2);
    CHECK_FALSE(res.free);
    CHECK_FALSE(is_identity(res.witness_g));
    CHECK(ch.contains(1, res.witness_g));  // a subgroup element of length 2
}

TEST_CASE("a custom permutation model failing a relation is caught") {
    FiniteAction a;
    a.group = free_abelian(2);
    a.size = 4;
    // e1 -> 4-cycle, e2 -> transposition: the generators do not commute
    a.gen_perms = {{1, 2, 3, 0}, {3, 2, 1, 0},
                   {3, 0, 1, 2}, {3, 2, 1, 0}};
    auto res = audit_relations(a, 3);
    CHECK_FALSE(res.pass);
    CHECK_FALSE(res.witness.empty());
}

TEST_CASE("exact towers for the Z odometer at stages (1,3) and (2,3)") {
    SubgroupChain ch = factorial_abelian_chain(free_abelian(1));
    FiniteAction a = build_odometer(ch, 3);
    auto M = generators_of(a.group);

    for (int n : {1, 2}) {
        CAPTURE(n);
        TowerSystem ts = build_towers(a, n);
        CHECK(ts.eps == 0);
        CHECK(ts.r_tower == 0);
        TowerReport rep = verify_towers(ts, M);
        CHECK(rep.pass());
        CHECK(rep.eps == 0);
        for (const char* name :
             {"sum-to-one", "orthogonality", "equivariance", "commutators"}) {
            const CheckResult* c = rep.find(name);
            REQUIRE(c != nullptr);
            CHECK(c->pass);
        }
    }

    // stage order must respect the chain: G_m inside G_n only for n <= m
    FiniteAction small = build_odometer(ch, 2);
    CHECK_THROWS(build_towers(small, 3));
}

TEST_CASE("exact towers on the 16-point U_3 model") {
    SubgroupChain ch = scaled_unitriangular_chain(unitriangular(3));
    FiniteAction a = build_odometer(ch, 1);
    TowerSystem ts = build_towers(a, 1);
    TowerReport rep = verify_towers(ts, generators_of(a.group));
    CHECK(rep.pass());
    CHECK(rep.eps == 0);
}

TEST_CASE("a perturbed tower value produces a nonzero defect") {
    SubgroupChain ch = factorial_abelian_chain(free_abelian(1));
    FiniteAction a = build_odometer(ch, 3);
    TowerSystem ts = build_towers(a, 2);
    ts.values[0][0][0] = Rat(1, 2);  // was 0 or 1
    TowerReport rep = verify_towers(ts, generators_of(a.group));
    CHECK_FALSE(rep.pass());
    CHECK(rep.eps == Rat(1, 2));
    bool witnessed = false;
    for (const auto& c : rep.checks)
        if (!c.pass && !c.witness.empty()) witnessed = true;
    CHECK(witnessed);
}

TEST_CASE("Folner boxes in Z^2") {
    GroupSpec z2 = free_abelian(2);
    auto M = generators_of(z2);

    // |J delta gJ| / |J| = 2t / t^2 for a t-box, first <= 1/2 at t = 4
    FolnerResult r = folner_set(z2, M, Rat(1, 2));
    CHECK(r.J.size() == 16);
    CHECK(r.worst_ratio == Rat(1, 2));
    CHECK(r.shape == "box side 4");

    // the 8x8 box: each shift moves 8 of the 64 points out, ratio 16/64
    FolnerResult r8 = folner_set(z2, M, Rat(1, 4));
    CHECK(r8.J.size() == 64);
    CHECK(r8.worst_ratio == Rat(16, 64));

    // eps = 2 is satisfied by the single point already
    FolnerResult r1 = folner_set(z2, M, Rat(2));
    CHECK(r1.J.size() == 1);
}

TEST_CASE("Folner balls in U_3") {
    GroupSpec u3 = unitriangular(3);
    FolnerResult r = folner_set(u3, generators_of(u3), Rat(3, 2), 6);
    CHECK(r.worst_ratio <= Rat(3, 2));
    CHECK(r.shape.rfind("ball", 0) == 0);
}

TEST_CASE("growth certificate for Z with M = B_2") {
    GroupSpec z = free_abelian(1);
    std::vector<Coords> M{{-2}, {-1}, {0}, {1}, {2}};
    GrowthCertificate cert = nilpotent_growth(z, M);
    CHECK(cert.n == 2);
    CHECK(cert.hirsch == 1);
    REQUIRE(cert.F.size() == 13);  // {-6..6}
    CHECK(cert.F.front() == Coords{-6});
    CHECK(cert.F.back() == Coords{6});
    CHECK(cert.translators ==
          std::vector<Coords>{{-8}, {0}, {8}});
    CHECK(verify_growth(cert).pass);
}

TEST_CASE("growth certificate for Z^2 has 9 translators") {
    GroupSpec z2 = free_abelian(2);
    GrowthCertificate cert = nilpotent_growth(z2, generators_of(z2));
    CHECK(cert.hirsch == 2);
    CHECK(cert.translators.size() == 9);
    CHECK(verify_growth(cert).pass);
    // F contains the identity and every M-translate of it
    CoordsSet F(cert.F.begin(), cert.F.end());
    CHECK(F.count(identity_of(z2)));
    for (const auto& m : generators_of(z2)) CHECK(F.count(m));
}

TEST_CASE("growth certificate for U_3 has 27 translators") {
    GroupSpec u3 = unitriangular(3);
    GrowthCertificate cert = nilpotent_growth(u3, generators_of(u3));
    CHECK(cert.hirsch == 3);
    CHECK(cert.translators.size() == 27);
    CoordsSet F(cert.F.begin(), cert.F.end());
    CHECK(F.count(identity_of(u3)));
    CHECK(verify_growth(cert).pass);
}

TEST_CASE("marker search on Z/12 with F = {0,1,2}") {
    SubgroupChain ch = custom_chain(free_abelian(1), {{12}});
    FiniteAction a = build_odometer(ch, 1);
    MarkerResult res = marker_search(a, {{0}, {1}, {2}}, {{0}});
    CHECK(res.found);
    // id i corresponds to residue via the coset table; compare as residues
    std::vector<Int> residues;
    for (int z : res.Z) residues.push_back(a.cs->reps[z][0]);
    std::sort(residues.begin(), residues.end());
    CHECK(residues == std::vector<Int>{0, 3, 6, 9});
}

TEST_CASE("marker search on Z/24 with the symmetric window") {
    SubgroupChain ch = custom_chain(free_abelian(1), {{8}, {24}});
    FiniteAction a = build_odometer(ch, 2);
    std::vector<Coords> F;
    for (Int i = -3; i <= 3; ++i) F.push_back({i});

    MarkerResult res = marker_search(a, F, {{0}});
    REQUIRE(res.found);
    CHECK(res.Z.size() == 3);
    // marker translates are pairwise disjoint and 7-separated
    std::vector<Int> residues;
    for (int z : res.Z) residues.push_back(a.cs->reps[z][0]);
    std::sort(residues.begin(), residues.end());
    for (std::size_t i = 0; i < residues.size(); ++i) {
        Int gap = residues[(i + 1) % 3] - residues[i];
        if (gap < 0) gap += 24;
        CHECK(gap >= 7);
    }

    // seeded reshuffles still find markers (possibly different ones)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        MarkerResult rs = marker_search(a, F, {{0}}, seed);
        CHECK(rs.found);
    }

    // overlapping translator windows are rejected up front
    CHECK_THROWS(marker_search(a, F, {{0}, {4}}));
}

TEST_CASE("product witness: Z/24 towers times period-8 decay") {
    GroupSpec z = free_abelian(1);
    SubgroupChain ch = custom_chain(z, {{8}, {24}});
    FiniteAction a = build_odometer(ch, 2);
    TowerSystem ts = build_towers(a, 1);
    CHECK(verify_towers(ts, generators_of(z)).pass());

    ColoredCover cover = demo_cover_z();
    Ball window = word_ball(z, {0}, 40);
    DecayFamily fam = cover_to_decay(cover, window);

    AmdimWitness w = build_amdim_witness_product(ts, fam);
    CHECK(w.am_d == 1);  // (r+1)(s+1) = 1*2 families
    CHECK(w.families.size() == 2);
    CHECK(w.eps == Rat(1, 3));  // the decay family's exact sup-shift

    WitnessReport rep = verify_witness(w);
    CHECK(rep.pass());
    // the measured per-element defect equals the decay sup-shift exactly
    CHECK(rep.measured_defect == Rat(1, 3));

    SimplicialReport sm = witness_to_simplicial_map(w);
    CHECK(sm.bound == Rat(4, 3));  // 2 (am_d + 1) eps
    CHECK(sm.pass);
    CHECK(sm.measured_defect <= sm.bound);
    CHECK(sm.measured_defect > 0);
}

TEST_CASE("product witness counts never exceed (r+1)(s+1)") {
    GroupSpec z = free_abelian(1);
    SubgroupChain ch = custom_chain(z, {{8}, {24}});
    FiniteAction a = build_odometer(ch, 2);
    TowerSystem ts = build_towers(a, 1);
    ColoredCover cover = demo_cover_z();
    Ball window = word_ball(z, {0}, 40);
    DecayFamily fam = cover_to_decay(cover, window);
    AmdimWitness w = build_amdim_witness_product(ts, fam);
    int r = ts.r_tower, s = fam.s();
    CHECK(w.am_d + 1 <= (r + 1) * (s + 1));
}

TEST_CASE("Folner-averaged witness over Z/24 marker blocks") {
    GroupSpec z = free_abelian(1);
    SubgroupChain ch = custom_chain(z, {{8}, {24}});
    FiniteAction a = build_odometer(ch, 2);

    GrowthCertificate growth = nilpotent_growth(z, {{-1}, {0}, {1}});
    CHECK(growth.n == 1);
    std::vector<Coords> F = growth.F;  // {-3..3}
    REQUIRE(F.size() == 7);
    MarkerResult markers = marker_search(a, F, {{0}});
    REQUIRE(markers.found);
    REQUIRE(markers.Z.size() == 3);

    std::vector<Coords> J;
    for (Int i = 0; i < 8; ++i) J.push_back({i});
    AmdimWitness w = build_amdim_witness_folner(a, growth, markers, J);
    CHECK(w.am_d == 2);
    CHECK(w.eps == Rat(1, 4));  // |J delta (J+1)| / |J| = 2/8

    WitnessReport rep = verify_witness(w);
    CHECK(rep.pass());
    CHECK(rep.measured_defect <= w.eps);
    CHECK(rep.measured_defect > 0);

    SimplicialReport sm = witness_to_simplicial_map(w);
    CHECK(sm.bound == Rat(3, 2));  // 2 * 3 * 1/4
    CHECK(sm.pass);
}

TEST_CASE("Folner witness with J = full period is exactly invariant") {
    GroupSpec z = free_abelian(1);
    SubgroupChain ch = custom_chain(z, {{8}, {24}});
    FiniteAction a = build_odometer(ch, 2);
    GrowthCertificate growth = nilpotent_growth(z, {{-1}, {0}, {1}});
    MarkerResult markers = marker_search(a, growth.F, {{0}});
    std::vector<Coords> J;
    for (Int i = 0; i < 24; ++i) J.push_back({i});
    AmdimWitness w = build_amdim_witness_folner(a, growth, markers, J);
    WitnessReport rep = verify_witness(w);
    CHECK(rep.pass());
    // indices live in Z/24, so averaging over a full period kills the shift
    CHECK(rep.measured_defect == 0);
}
