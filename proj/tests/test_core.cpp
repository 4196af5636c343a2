#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "boxdim/core.hpp"

#include <deque>

using namespace boxdim;

TEST_CASE("unitriangular product law") {
    GroupSpec u3 = unitriangular(3);
    CHECK(multiply(u3, {1, 0, 0}, {0, 0, 1}) == Coords{1, 1, 1});
    CHECK(multiply(u3, {2, 3, 0}, {-2, -3, 0}) == Coords{0, 0, 0});

    // commutator x y x^-1 y^-1 of the two elementary generators
    Coords x{1, 0, 0}, y{0, 0, 1};
    Coords c = multiply(u3, multiply(u3, x, y),
                        multiply(u3, invert(u3, x), invert(u3, y)));
    CHECK(c == Coords{0, 1, 0});
}

TEST_CASE("free-abelian product and inverse") {
    GroupSpec z2 = free_abelian(2);
    CHECK(multiply(z2, {2, 3}, {-2, -3}) == Coords{0, 0});
    CHECK(invert(z2, {2, 3}) == Coords{-2, -3});
}

TEST_CASE("unitriangular inverses by back-substitution") {
    GroupSpec u3 = unitriangular(3);
    CHECK(invert(u3, {1, 0, 0}) == Coords{-1, 0, 0});
    CHECK(invert(u3, {1, 1, 1}) == Coords{-1, 0, -1});
    GroupSpec u4 = unitriangular(4);
    Coords a{3, -2, 5, 1, 7, -4};
    CHECK(is_identity(multiply(u4, a, invert(u4, a))));
    CHECK(is_identity(multiply(u4, invert(u4, a), a)));
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS(multiply(free_abelian(2), {1}, {1, 2}));
    CHECK_THROWS(invert(unitriangular(3), {1, 2}));
}

TEST_CASE("word balls in Z^2") {
    GroupSpec z2 = free_abelian(2);
    Ball b1 = word_ball(z2, {0, 0}, 1);
    CHECK(b1.size() == 5);
    CHECK(b1.contains({1, 0}));
    CHECK(b1.contains({0, -1}));

    // l1 word length for the standard generators
    CHECK(word_distance(z2, {2, 3}, {0, 0}, 10) == 5);
}

TEST_CASE("distance to the central element of U_3") {
    GroupSpec u3 = unitriangular(3);
    CHECK(word_distance(u3, {0, 1, 0}, {0, 0, 0}, 8) == 4);
}

TEST_CASE("ball cap reports a resource error") {
    CHECK_THROWS_AS(word_ball(free_abelian(3), {0, 0, 0}, 50, 1000),
                    ResourceError);
}

TEST_CASE("scaling endomorphism") {
    GroupSpec u3 = unitriangular(3);
    CHECK(scaling_endomorphism(u3, 2, {1, 1, 1}) == Coords{2, 4, 2});
    CHECK(scaling_endomorphism(u3, 1, {5, -3, 2}) == Coords{5, -3, 2});
    CHECK(scaling_endomorphism(free_abelian(2), 3, {1, -2}) == Coords{3, -6});
    CHECK_THROWS(scaling_endomorphism(u3, 0, {1, 1, 1}));

    // homomorphism law and functoriality on sampled elements
    Ball b = word_ball(u3, {0, 0, 0}, 3);
    for (const auto& a : b.elements)
        for (const auto& c : b.elements) {
            CHECK(multiply(u3, scaling_endomorphism(u3, 2, a),
                           scaling_endomorphism(u3, 2, c)) ==
                  scaling_endomorphism(u3, 2, multiply(u3, a, c)));
        }
    for (Int r = 1; r <= 3; ++r)
        for (Int s = 1; s <= 3; ++s)
            for (const auto& a : b.elements)
                CHECK(scaling_endomorphism(u3, r * s, a) ==
                      scaling_endomorphism(
                          u3, r, scaling_endomorphism(u3, s, a)));
}

TEST_CASE("right-invariance of the word metric") {
    GroupSpec u3 = unitriangular(3);
    Ball b = word_ball(u3, {0, 0, 0}, 3);
    std::vector<Coords> sample;
    for (std::size_t i = 0; i < b.size(); i += 7) sample.push_back(b.elements[i]);
    for (const auto& g : sample)
        for (const auto& h : sample)
            for (const auto& k : sample) {
                auto d1 = word_distance(u3, g, h, 6);
                auto d2 = word_distance(u3, multiply(u3, g, k),
                                        multiply(u3, h, k), 6);
                REQUIRE(d1.has_value());
                CHECK(d1 == d2);
            }
}

// Independent brute-force BFS using only multiply/invert, no distance
// bookkeeping shared with word_ball.
static CoordsMap<int> oracle_ball(const GroupSpec& spec, int radius) {
    CoordsMap<int> dist;
    std::deque<Coords> layer{identity_of(spec)};
    dist.emplace(identity_of(spec), 0);
    for (int r = 1; r <= radius; ++r) {
        std::deque<Coords> next;
        for (const auto& w : layer)
            for (const auto& g : generators_of(spec)) {
                Coords nw = multiply(spec, g, w);  // left append, unlike word_ball
                if (dist.emplace(nw, r).second) next.push_back(nw);
            }
        layer = std::move(next);
    }
    return dist;
}

TEST_CASE("ball growth oracle for U_3 up to radius 8") {
    GroupSpec u3 = unitriangular(3);
    auto oracle = oracle_ball(u3, 8);
    Ball ball = word_ball(u3, {0, 0, 0}, 8);
    REQUIRE(ball.size() == oracle.size());
    for (std::size_t i = 0; i < ball.size(); ++i) {
        auto it = oracle.find(ball.elements[i]);
        REQUIRE(it != oracle.end());
        CHECK(it->second == ball.distances[i]);
    }
}

TEST_CASE("ball ordering is deterministic and frontier-closed") {
    GroupSpec z2 = free_abelian(2);
    Ball b = word_ball(z2, {1, -1}, 3);
    for (std::size_t i = 1; i < b.size(); ++i) {
        CHECK(b.distances[i - 1] <= b.distances[i]);
        if (b.distances[i - 1] == b.distances[i])
            CHECK(b.elements[i - 1] < b.elements[i]);
    }
    // every element at distance k > 0 has a neighbor at distance k-1
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.distances[i] == 0) continue;
        bool has = false;
        for (const auto& g : generators_of(z2)) {
            auto it = b.distance_of.find(multiply(z2, g, b.elements[i]));
            if (it != b.distance_of.end() && it->second == b.distances[i] - 1)
                has = true;
        }
        CHECK(has);
    }
}

TEST_CASE("product groups multiply factorwise") {
    GroupSpec p = direct_product({free_abelian(1), unitriangular(3)});
    Coords a{2, 1, 0, 0}, b{-1, 0, 0, 1};
    Coords ab = multiply(p, a, b);
    CHECK(ab == Coords{1, 1, 1, 1});
    CHECK(is_identity(multiply(p, ab, invert(p, ab))));
    Ball ball = word_ball(p, identity_of(p), 1);
    CHECK(ball.size() == 7);  // identity + 2 + 4 generator neighbors
}

TEST_CASE("generators generate: ball sizes match known counts") {
    CHECK(word_ball(free_abelian(1), {0}, 3).size() == 7);
    CHECK(word_ball(free_abelian(2), {0, 0}, 2).size() == 13);
    // |B_2| in U_3: 16 length-2 words, 4 cancel to the identity, rest distinct
    CHECK(word_ball(unitriangular(3), {0, 0, 0}, 2).size() == 17);
}
