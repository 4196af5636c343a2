#pragma once

#include "boxdim/core.hpp"

#include <memory>

namespace boxdim {

enum class ChainKind {
    FactorialAbelian,        // G_n = n! * Z^m
    ScaledUnitriangular,     // H_n = alpha_{(n+1)!}(U_d(Z)), divisors ((n+1)!)^(j-i)
    CongruenceUnitriangular, // entries divisible by n!
    Custom,                  // explicit divisor vector per stage
};

// A decreasing chain of finite-index subgroups, each stage given by a
// coordinatewise divisibility vector.
struct SubgroupChain {
    GroupSpec group;
    ChainKind kind = ChainKind::FactorialAbelian;
    // Custom chains: stage n (0-based into this list) has divisor vector
    // custom_stages[n]; closure for unitriangular requires d_ij | d_im * d_mj.
    std::vector<std::vector<Int>> custom_stages;
    std::vector<bool> custom_normal;

    std::vector<Int> divisors(int stage) const;
    bool is_normal(int stage) const;
    bool contains(int stage, const Coords& x) const;
    int min_stage() const;  // 1 for built-in kinds, 0 for custom
    int max_stage() const;  // last custom stage, or a large bound for built-ins
    Int index(int stage) const;
};

SubgroupChain factorial_abelian_chain(const GroupSpec& group);
SubgroupChain scaled_unitriangular_chain(const GroupSpec& group);
SubgroupChain congruence_unitriangular_chain(const GroupSpec& group);
SubgroupChain custom_chain(const GroupSpec& group,
                           std::vector<std::vector<Int>> stages,
                           std::vector<bool> normal_flags = {});

// Validates divisor-vector closure under the group law (always fine for
// free-abelian; unitriangular needs d_ij | d_im * d_mj for i < m < j).
void check_divisor_closure(const GroupSpec& group, const std::vector<Int>& d);

// Canonical left-coset representative of x modulo the divisor-lattice
// subgroup {h : d_i | h_i}: every coordinate reduced into [0, d_i).
Coords divisor_canon(const GroupSpec& group, const std::vector<Int>& divs,
                     const Coords& x);

inline const Int kDefaultIndexCap = 100000;

// Left cosets xH with canonical representatives having each coordinate
// reduced into [0, d_ij), processed by increasing j-i.
struct CosetSpace {
    GroupSpec group;
    SubgroupChain chain;
    int stage = 0;
    std::vector<Int> divs;
    Int index = 0;
    std::vector<Coords> reps;                 // ordered: BFS discovery order
    CoordsMap<int> rep_index;
    std::vector<std::vector<int>> schreier_edges;  // [coset][generator] -> coset

    Coords canon(const Coords& x) const;
    int id_of(const Coords& x) const;
    std::vector<int> distances_from(int c) const;  // BFS in the Schreier graph
    int graph_distance(int a, int b) const;
    int diameter() const;
};

CosetSpace coset_space(const SubgroupChain& chain, int n,
                       const Int& index_cap = kDefaultIndexCap);

// Schreier-graph distance between canon(x) and canon(y); equals
// inf_{g in G_n} |x g y^{-1}| in the word metric.
int quotient_distance(const CosetSpace& cs, const Coords& x, const Coords& y);

struct InjectiveRadiusResult {
    bool found = false;
    int stage = -1;
    // On failure: a colliding pair on the last stage tried.
    Coords witness_a, witness_b, witness_k;
    int conjugator_radius = 0;
};

// Least materialized stage n in [n0, n1] with pi_n injective on B_R(1)*k for
// all k in the conjugator ball (k = 1 only when the stage is normal).
InjectiveRadiusResult injective_radius_stage(const SubgroupChain& chain, int R,
                                             int conjugator_radius, int n0,
                                             int n1,
                                             const Int& index_cap = kDefaultIndexCap);

struct IsometryCheckResult {
    bool hypothesis_holds = false;  // pi injective on B_{3R}(x)
    bool isometric = false;
    bool image_is_ball = false;
    // Violating pair if any (must never occur when the hypothesis holds).
    bool has_witness = false;
    Coords witness_a, witness_b;
};

IsometryCheckResult isometry_radius_check(const CosetSpace& cs, const Coords& x,
                                          int R);

struct DominationStageResult {
    int n = 0;
    bool dominated = false;   // found m with B_m subset of A_n
    int witness_m = -1;
    bool never = false;       // certified impossible via a prime obstruction
    Int obstruction_prime = 0;
};

// For each stage n of chainA up to horizon, searches a stage m of chainB with
// stage-m(B) contained in stage-n(A); containment is divisor divisibility.
std::vector<DominationStageResult> dominates(const SubgroupChain& chainA,
                                             const SubgroupChain& chainB,
                                             int horizon);

struct BoxWindow {
    SubgroupChain chain;
    int n0 = 0, n1 = 0;
    std::vector<CosetSpace> blocks;
    std::vector<std::vector<std::vector<int>>> metric_tables;  // per block
    std::vector<int> diameters;
    std::vector<Int> separation;  // C_n = n + sum_{k<=n} diam(G/G_k)

    // d^B: within-block Schreier distance, C_n + C_m across blocks.
    Int distance(int block_a, int coset_a, int block_b, int coset_b) const;
};

BoxWindow box_window(const SubgroupChain& chain, int n0, int n1,
                     const Int& index_cap = kDefaultIndexCap);

}  // namespace boxdim
