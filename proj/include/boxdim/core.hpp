#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace boxdim {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Group elements are coordinate vectors: m entries for Z^m, the d(d-1)/2
// strictly-upper entries in row-major order for U_d(Z), concatenation for
// products.
using Coords = std::vector<Int>;

struct CoordsHash {
    std::size_t operator()(const Coords& c) const {
        std::size_t h = 1469598103934665603ull;
        for (const Int& v : c) {
            auto lo = static_cast<std::uint64_t>(v & 0xffffffffffffffffull);
            h = (h ^ lo) * 1099511628211ull;
            h = (h ^ (v < 0 ? 0x9eu : 0x3cu)) * 1099511628211ull;
        }
        return h;
    }
};

using CoordsSet = std::unordered_set<Coords, CoordsHash>;
template <typename T>
using CoordsMap = std::unordered_map<Coords, T, CoordsHash>;

enum class GroupKind { FreeAbelian, Unitriangular, Product };

struct GroupSpec {
    GroupKind kind = GroupKind::FreeAbelian;
    int param = 1;  // m for free-abelian, d for unitriangular
    std::vector<GroupSpec> factors;
    std::vector<Coords> generators;  // symmetric; defaulted if empty

    int rank() const;
    bool operator==(const GroupSpec& o) const;
};

GroupSpec free_abelian(int m);
GroupSpec unitriangular(int d);
GroupSpec direct_product(std::vector<GroupSpec> factors);

// Index of entry (i,j), 1 <= i < j <= d, in row-major strictly-upper order.
int ut_index(int d, int i, int j);

Coords identity_of(const GroupSpec& spec);
bool is_identity(const Coords& a);
void check_conforms(const GroupSpec& spec, const Coords& a);

Coords multiply(const GroupSpec& spec, const Coords& a, const Coords& b);
Coords invert(const GroupSpec& spec, const Coords& a);
Coords conjugate(const GroupSpec& spec, const Coords& g, const Coords& k);

// alpha_r: entry (i,j) scales by r^(j-i); every coordinate by r on Z^m.
Coords scaling_endomorphism(const GroupSpec& spec, const Int& r, const Coords& a);

const std::vector<Coords>& generators_of(const GroupSpec& spec);

struct Ball {
    Coords center;
    int radius = 0;
    // Sorted by (distance, lexicographic coordinates); deterministic.
    std::vector<Coords> elements;
    std::vector<int> distances;  // parallel to elements
    CoordsMap<int> distance_of;  // element -> distance

    bool contains(const Coords& x) const { return distance_of.count(x) != 0; }
    std::size_t size() const { return elements.size(); }
};

inline constexpr std::size_t kDefaultBallCap = 5000000;

// BFS over right multiplication by generators, translated to the center:
// B_R(x) = B_R(1) * x since d(g,h) = |g h^{-1}| is right-invariant.
Ball word_ball(const GroupSpec& spec, const Coords& center, int radius,
               std::size_t cap = kDefaultBallCap);

// |a b^{-1}| if it is <= max_radius, nullopt otherwise.
std::optional<int> word_distance(const GroupSpec& spec, const Coords& a,
                                 const Coords& b, int max_radius,
                                 std::size_t cap = kDefaultBallCap);

std::string coords_to_string(const Coords& a);

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace boxdim
