#include "doctest.h"
#include "walls/tropical.hpp"

using namespace walls;

namespace {

// root at the origin, one trivalent vertex at (2,2) with two unbounded edges
TropicalDisc three_edge_disc(LatticeVector out1 = {1, 0}, LatticeVector out2 = {0, 1}, long long w1 = 1,
                             long long w2 = 1) {
    TropicalDisc d;
    d.vertices = {{Rat(0), Rat(0)}, {Rat(2), Rat(2)}};
    d.root = 0;
    LatticeVector sum = w1 * out1 + w2 * out2;
    auto [dir, w] = primitive(sum);
    d.edges.push_back({0, 1, dir, w});          // stop edge toward the vertex
    d.edges.push_back({1, -1, out1, w1});
    d.edges.push_back({1, -1, out2, w2});
    return d;
}

TropicalDisc straight_disc(LatticeVector out = {0, -1}, long long w = 1) {
    TropicalDisc d;
    d.vertices = {{Rat(0), Rat(0)}};
    d.root = 0;
    d.edges.push_back({0, -1, out, w});
    return d;
}

}  // namespace

TEST_CASE("balancing") {
    CHECK(check_balancing(straight_disc()));
    CHECK(check_balancing(three_edge_disc()));
    TropicalDisc bad = three_edge_disc();
    bad.edges[2].dir = {-1, 0};  // (1,0) + (-1,0) + stop != 0
    CHECK_FALSE(check_balancing(bad));
}

TEST_CASE("maslov index is twice the weight of the unbounded edges") {
    CHECK(maslov_index(straight_disc()) == 2);
    CHECK(maslov_index(three_edge_disc()) == 4);
    CHECK(maslov_index(three_edge_disc({1, 0}, {0, 1}, 2, 1)) == 6);
    TropicalDisc trip = three_edge_disc();
    trip.edges[0].b = -1;  // make the stop edge unbounded too: three ends, weights 1,1,1
    trip.edges[0].dir = -trip.edges[0].dir;
    CHECK(maslov_index(trip) == 6);
}

TEST_CASE("generalized index counts unbounded edges minus twice the constraints") {
    auto d = straight_disc();
    CHECK(generalized_maslov(d) == 1);
    d.constraints.push_back({Rat(5), Rat(5)});
    CHECK(generalized_maslov(d) == -1);
    auto t = three_edge_disc();
    t.constraints.push_back({Rat(3), Rat(2)});
    CHECK(generalized_maslov(t) == 0);
    TropicalDisc two_ends = three_edge_disc();
    two_ends.constraints.push_back({Rat(9), Rat(2)});
    CHECK(generalized_maslov(two_ends) == 0);
}

TEST_CASE("multiplicity") {
    CHECK(multiplicity(straight_disc()) == 1);
    CHECK(multiplicity(three_edge_disc()) == 1);
    CHECK(multiplicity(three_edge_disc({1, 0}, {0, 1}, 2, 1)) == 2);
    TropicalDisc four = three_edge_disc();
    four.edges.push_back({1, -1, {-1, -1}, 1});
    CHECK_THROWS_WITH_AS(multiplicity(four), doctest::Contains("NotTrivalent"), Error);
}

TEST_CASE("multiplicity is a positive integer on random valid discs") {
    std::vector<std::pair<LatticeVector, LatticeVector>> pairs = {
        {{1, 0}, {0, 1}}, {{2, 1}, {-1, 1}}, {{1, 2}, {1, -1}}, {{3, 1}, {0, 1}}};
    for (auto [a, b] : pairs)
        for (long long w1 = 1; w1 <= 3; ++w1)
            for (long long w2 = 1; w2 <= 3; ++w2) {
                auto d = three_edge_disc(a, b, w1, w2);
                CHECK(check_balancing(d));
                CHECK(multiplicity(d) >= 1);
            }
}

TEST_CASE("clip removes the marked edge and extends the survivor") {
    auto d = three_edge_disc({1, 0}, {0, 1});
    RatPoint p{Rat(5), Rat(2)};  // on the (1,0)-edge from (2,2)
    auto res = clip(d, p, {-1, 0}, {0, -1});
    CHECK(res.status == ClipStatus::clipped);
    REQUIRE(res.disc.edges.size() == 1);
    CHECK(res.disc.edges[0].b == -1);
    CHECK(res.disc.edges[0].dir == LatticeVector{1, 1});
    CHECK(res.disc.edges[0].weight == 1);
    CHECK(res.disc.vertices.size() == 1);
    CHECK(multiplicity(res.disc) == 1);

    SUBCASE("clipped discs have strictly fewer vertices") {
        CHECK(res.disc.vertices.size() < d.vertices.size());
    }
}

TEST_CASE("clip degenerate and untouched cases") {
    auto ray = straight_disc({-1, 0});
    RatPoint p{Rat(-4), Rat(0)};
    CHECK_THROWS_WITH_AS(clip(ray, p, {1, 0}, {0, 1}), doctest::Contains("NotClippable"), Error);

    auto d = three_edge_disc();
    auto res = clip(d, {Rat(100), Rat(100)}, {-1, 0}, {0, -1});
    CHECK(res.status == ClipStatus::untouched);
    CHECK(res.disc.edges.size() == d.edges.size());
}

TEST_CASE("semifano coefficients") {
    Fan p2({{1, 0}, {0, 1}, {-1, -1}}, true);
    auto pot = semifano_toric_potential(p2);
    for (auto& [m, c] : lattice_coefficients(pot)) CHECK(c.is_one());
    CHECK(lattice_coefficients(pot).size() == 3);

    // one -2 divisor in a run of length one
    Fan run1({{1, 0}, {2, 1}, {1, 1}, {0, 1}, {-1, -1}}, true);
    auto pot1 = semifano_toric_potential(run1);
    for (auto& [m, c] : lattice_coefficients(pot1))
        CHECK(c == (m == LatticeVector{1, 1} ? Rat(2) : Rat(1)));

    // the (2,1),(1,1) run has length two: coefficients C(3,1) = C(3,2) = 3;
    // (1,0) is an isolated -2 divisor here and picks up C(2,1) = 2
    Fan run2({{1, 0}, {3, 1}, {2, 1}, {1, 1}, {0, 1}, {-1, -1}}, true);
    auto pot2 = semifano_toric_potential(run2);
    for (auto& [m, c] : lattice_coefficients(pot2)) {
        if (m == LatticeVector{2, 1} || m == LatticeVector{1, 1})
            CHECK(c == Rat(3));
        else if (m == LatticeVector{1, 0})
            CHECK(c == Rat(2));
        else
            CHECK(c.is_one());
    }

    Fan f2({{0, -1}, {-1, 2}, {0, 1}, {1, 0}}, true);
    CHECK_THROWS_WITH_AS(semifano_toric_potential(f2), doctest::Contains("ExcludedSurface"), Error);
}

TEST_CASE("run coefficients are symmetric in the run") {
    Fan run2({{1, 0}, {3, 1}, {2, 1}, {1, 1}, {0, 1}, {-1, -1}}, true);
    auto coeffs = lattice_coefficients(semifano_toric_potential(run2));
    Rat a, b;
    for (auto& [m, c] : coeffs) {
        if (m == LatticeVector{2, 1}) a = c;
        if (m == LatticeVector{1, 1}) b = c;
    }
    CHECK(a == b);  // C(m+1, l) = C(m+1, m+1-l)
}

TEST_CASE("empty chain reproduces the Fano potential") {
    BlowupChain chain;
    chain.fano = Fan({{1, 0}, {0, 1}, {-1, -1}}, true);
    auto bulk = bulk_potential_via_chain(chain, {Rat(1, 3), Rat(2, 7)});
    auto direct = semifano_toric_potential(chain.fano);
    CHECK(lattice_coefficients(bulk) == lattice_coefficients(direct));
}

TEST_CASE("single blowup chain: bulk count equals the blown-up toric potential") {
    BlowupChain chain;
    chain.fano = Fan({{1, 0}, {0, 1}, {-1, -1}}, true);
    chain.added_rays = {{1, 1}};
    chain.constraint_points = {{Rat(-50), Rat(-47)}};
    auto bulk = bulk_potential_via_chain(chain, {Rat(1, 3), Rat(2, 7)});
    auto target = semifano_toric_potential(chain.fans().back());
    CHECK(lattice_coefficients(bulk) == lattice_coefficients(target));
}

TEST_CASE("two-step chain: bulk count equals the final-fan formula with a 2") {
    BlowupChain chain;
    chain.fano = Fan({{1, 0}, {0, 1}, {-1, -1}}, true);
    chain.added_rays = {{1, 1}, {2, 1}};
    chain.constraint_points = {{Rat(-50), Rat(-47)}, {Rat(-40), Rat(-59, 3)}};
    auto bulk = bulk_potential_via_chain(chain, {Rat(1, 3), Rat(2, 7)});
    auto target = semifano_toric_potential(chain.fans().back());
    CHECK(lattice_coefficients(bulk) == lattice_coefficients(target));
    bool has2 = false;
    for (auto& [m, c] : lattice_coefficients(bulk))
        if (m == LatticeVector{1, 1} && c == Rat(2)) has2 = true;
    CHECK(has2);
}

TEST_CASE("invalid chains are rejected") {
    BlowupChain chain;
    chain.fano = Fan({{1, 0}, {0, 1}, {-1, -1}}, true);
    chain.added_rays = {{2, 1}};  // not a corner sum of the base fan
    chain.constraint_points = {{Rat(-9), Rat(-5)}};
    CHECK_THROWS_WITH_AS(chain.fans(), doctest::Contains("NotSemiFanoChain"), Error);

    BlowupChain nonfano;
    nonfano.fano = Fan({{1, 0}, {3, 1}, {2, 1}, {1, 1}, {0, 1}, {-1, -1}}, true);  // has -2 divisors
    CHECK_THROWS_WITH_AS(nonfano.fans(), doctest::Contains("NotSemiFanoChain"), Error);
}

TEST_CASE("clip undoes the three-edge extension over a family of discs") {
    std::vector<std::pair<LatticeVector, LatticeVector>> bases = {
        {{-1, 0}, {0, -1}}, {{0, -1}, {1, 1}}, {{-1, 0}, {1, 1}}};
    for (auto [w1, w2] : bases) {
        // disc with unbounded edges -w1, -w2 meeting at v, stop edge to the root
        LatticeVector stop_dir = -(w1 + w2);
        if (stop_dir.is_zero()) continue;
        auto [sd, sw] = primitive(stop_dir);
        TropicalDisc d;
        d.vertices = {{Rat(0), Rat(0)}, {Rat(3) * Rat(sd.x), Rat(3) * Rat(sd.y)}};
        d.root = 0;
        d.edges.push_back({0, 1, sd, sw});
        d.edges.push_back({1, -1, -w1, 1});
        d.edges.push_back({1, -1, -w2, 1});
        REQUIRE(check_balancing(d));
        RatPoint p{d.vertices[1].x - Rat(5) * Rat(w1.x), d.vertices[1].y - Rat(5) * Rat(w1.y)};
        auto res = clip(d, p, w1, w2);
        REQUIRE(res.status == ClipStatus::clipped);
        REQUIRE(res.disc.edges.size() == 1);
        CHECK(res.disc.edges[0].dir == sd);
        CHECK(res.disc.vertices.size() == 1);
        // rebuild the clipped-away vertex from the surviving ray and the point
        // and compare with the original disc
        RatPoint root = res.disc.vertices[0];
        Rat det = Rat(wedge(sd, w1));
        REQUIRE(!det.is_zero());
        Rat t = (cross(p - root, w1)) / det;
        RatPoint v{root.x + t * Rat(sd.x), root.y + t * Rat(sd.y)};
        CHECK(v == d.vertices[1]);
    }
}
