#pragma once

#include "boxdim/chain.hpp"
#include "boxdim/cover.hpp"
#include "boxdim/decay.hpp"

#include <map>

namespace boxdim {

// A finite permutation model of a group action. Odometers act on G/G_m by
// left translation and know the full action; custom models act through
// generator permutations only.
struct FiniteAction {
    GroupSpec group;
    int size = 0;
    std::vector<std::vector<int>> gen_perms;  // parallel to generators_of(group)
    bool is_odometer = false;
    std::shared_ptr<CosetSpace> cs;  // odometer backing
    int stage = 0;

    // Full permutation of alpha_g; odometers only.
    std::vector<int> permutation_of(const Coords& g) const;
    int apply(const Coords& g, int x) const;  // via cs for odometers
    int apply_generator(int gen_idx, int x) const;
};

struct RelationAuditResult {
    bool pass = true;
    std::string witness;
};

// Checks the generator permutations against group relations sampled from a
// ball: every word relation w = 1 with |w| <= radius must act trivially.
RelationAuditResult audit_relations(const FiniteAction& action, int radius = 4);

// No nontrivial g in B_rho(1) fixes a point.
struct FreenessAuditResult {
    bool free = true;
    int rho = 0;
    Coords witness_g;
    int witness_point = -1;
};
FreenessAuditResult audit_freeness(const FiniteAction& action, int rho);

FiniteAction build_odometer(const SubgroupChain& chain, int m,
                            const Int& index_cap = kDefaultIndexCap);

// Rokhlin towers: fiber indicators of G/G_m -> G/G_n.
struct TowerSystem {
    FiniteAction action;
    int n_stage = 0;
    int r_tower = 0;  // color count minus one
    std::shared_ptr<CosetSpace> quot;  // G/G_n
    // values[l][coset of G/G_n][point of the space], exact rationals
    std::vector<std::vector<std::vector<Rat>>> values;
    Rat eps = 0;
};

TowerSystem build_towers(const FiniteAction& action, int n,
                         const Int& index_cap = kDefaultIndexCap);

struct TowerReport {
    std::vector<CheckResult> checks;
    Rat eps = 0;  // max defect across all conditions

    bool pass() const;
    const CheckResult* find(const std::string& name) const;
};

// Exact sup-norm defects of the four tower conditions: sum, orthogonality,
// equivariance over M, commutators (identically zero here).
TowerReport verify_towers(const TowerSystem& ts, const std::vector<Coords>& M);

struct FolnerResult {
    std::vector<Coords> J;
    Rat worst_ratio = 0;  // max over M of |J delta gJ| / |J|
    std::string shape;    // "box side t" or "ball radius r"
};

// Searches boxes (Z^m) or word balls (U_d) of growing size for
// |J delta gJ| <= eps * |J| for all g in M; exact counting.
FolnerResult folner_set(const GroupSpec& spec, const std::vector<Coords>& M,
                        const Rat& eps, int size_cap = 512);

struct GrowthCertificate {
    GroupSpec group;
    std::vector<Coords> M;
    std::vector<Coords> F;            // contains the identity
    std::vector<Coords> translators;  // exactly 3^hirsch, with multiplicity
    int hirsch = 0;
    // Layered form for exhaustive F^-1 F enumeration: F = sigma(F0) * F1 with
    // F1 = central powers t^i, |i| <= 3n.
    std::vector<Coords> quotient_F;  // F0 lifted through the cross-section
    int n = 0;                       // the recursion's exponent bound
};

// The central-series recursion producing F and the 3^l translators; the
// certificate is verified exhaustively over F^-1 F.
GrowthCertificate nilpotent_growth(const GroupSpec& spec,
                                   const std::vector<Coords>& M);

struct GrowthCheckResult {
    bool pass = true;
    Coords witness_x, witness_mx;  // M*x not contained in any g_j*F
};

GrowthCheckResult verify_growth(const GrowthCertificate& cert);

struct MarkerResult {
    bool found = false;
    std::vector<int> Z;  // marker points
    std::vector<int> uncovered;  // residue on failure
};

// Greedy search for Z with pairwise disjoint alpha_f(Z), f in F, and
// coverage of the space by alpha_{g_l g}(Z), g in F^-1 F. A seed permutes
// the candidate order.
MarkerResult marker_search(const FiniteAction& action,
                           const std::vector<Coords>& F,
                           const std::vector<Coords>& translators,
                           std::uint64_t seed = 0);

// Witness families mu^(l): index set -> function on the space. For odometer
// models the index ranges over the finite quotient group Z/N... the coset
// space of the acted stage, making exact invariance attainable.
struct AmdimWitness {
    FiniteAction action;
    int am_d = 0;  // color count minus one
    // families[l]: sorted map index-element -> values per point
    std::vector<std::map<Coords, std::vector<Rat>>> families;
    // When nonempty, indices live in the quotient by this divisor lattice.
    std::vector<Int> index_mod;
    Rat eps = 0;  // certified shift bound
    std::vector<Coords> M;

    Coords reduce_index(const Coords& g) const;
};

struct WitnessReport {
    std::vector<CheckResult> checks;
    Rat measured_defect = 0;  // condition (c), per-element

    bool pass() const;
    const CheckResult* find(const std::string& name) const;
};

// mu^{(l,j)}_g = nu^{(j)}_g * f^{(l)}_{gbar}: (r+1)(s+1) families from a
// tower system and a decay family sharing the period stage.
AmdimWitness build_amdim_witness_product(const TowerSystem& ts,
                                         const DecayFamily& family);

// Folner-averaged witness over marker blocks:
// mu^{(j)}_g = (1/|J|) sum_{h in J} nu^{(j, h^-1 g)} o alpha_{h^-1}.
// Implemented for odometer models over Z; families = marker blocks.
AmdimWitness build_amdim_witness_folner(const FiniteAction& action,
                                        const GrowthCertificate& growth,
                                        const MarkerResult& markers,
                                        const std::vector<Coords>& J);

// Exact checks of (a) partition of unity, (b) orthogonality within each
// family, (c) per-element shift defect <= eps for g in M.
WitnessReport verify_witness(const AmdimWitness& w);

struct SimplicialReport {
    Rat measured_defect = 0;  // max over g in M, x of d1(phi(alpha_g x), g phi(x))
    Rat bound = 0;            // 2 (am_d + 1) eps
    bool pass = false;
};

// Barycentric map phi(x) = sum mu_g^(l)(x) v_{(l,g)} and its exact l1
// equivariance defect.
SimplicialReport witness_to_simplicial_map(const AmdimWitness& w);

}  // namespace boxdim
