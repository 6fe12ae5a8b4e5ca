#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <raag/metric.hpp>

using namespace raag;

namespace {

// Brute-force geodesic count: all letter strings of length |x^-1 y| spelling x^-1 y.
int64_t brute_geodesic_count(const GroupModel& G, const Element& x, const Element& y) {
    Element diff = G.multiply(G.invert(x), y);
    int d = diff.length();
    int L = G.num_letters();
    int64_t count = 0;
    std::vector<int> idx(d, 0);
    while (true) {
        std::string w;
        for (int i : idx) w.push_back((char)i);
        if (G.from_code(w) == diff) ++count;
        int p = d - 1;
        while (p >= 0 && idx[p] == L - 1) idx[p--] = 0;
        if (p < 0) break;
        ++idx[p];
    }
    return count;
}

}  // namespace

TEST_CASE("canonical_geodesic is a valid geodesic with distance+1 points") {
    std::mt19937 rng(3);
    for (const GroupModel& G : {make_free_group(2), make_abelian_group(2), make_z2_free_z()}) {
        GeodesicAutomaton A = GeodesicAutomaton::build(G);
        auto xs = sample_sphere_uniform(A, 5, 20, 5);
        auto ys = sample_sphere_uniform(A, 4, 20, 6);
        for (int i = 0; i < 20; ++i) {
            PathSegment p = canonical_geodesic(G, xs[i], ys[i]);
            CHECK(is_valid_path(G, p));
            CHECK(p.num_points() == distance(G, xs[i], ys[i]) + 1);
            CHECK(p.front() == xs[i]);
            CHECK(p.back() == ys[i]);
        }
    }
}

TEST_CASE("enumerate_geodesics counts") {
    GroupModel f2 = make_free_group(2);
    GroupModel z2 = make_abelian_group(2);
    GroupModel zz = make_z2_free_z();

    SUBCASE("trees have exactly one geodesic") {
        for (const char* t : {"a", "a b", "a^3 b^-2", "b a^-1 b"}) {
            auto res = enumerate_geodesics(f2, f2.identity(), parse_element(f2, t), 10);
            CHECK(res.count == 1);
            CHECK(!res.truncated);
        }
    }
    SUBCASE("Z^2: e to a^2 b^2 has 6 geodesics") {
        auto res = enumerate_geodesics(z2, z2.identity(), parse_element(z2, "a^2 b^2"), 100);
        CHECK(res.count == 6);
        CHECK(!res.truncated);
        for (const auto& p : res.geodesics) CHECK(is_valid_path(z2, p));
        // enumeration is lexicographic: first geodesic spells a a b b, last b b a a
        CHECK(res.geodesics.front().points[2] == parse_element(z2, "a^2"));
        CHECK(res.geodesics.back().points[2] == parse_element(z2, "b^2"));
    }
    SUBCASE("Z^2 * Z: e to c a c has 1 geodesic") {
        auto res = enumerate_geodesics(zz, zz.identity(), parse_element(zz, "c a c"), 10);
        CHECK(res.count == 1);
        CHECK(!res.truncated);
    }
    SUBCASE("cap truncates with flag") {
        auto res = enumerate_geodesics(z2, z2.identity(), parse_element(z2, "a^2 b^2"), 3);
        CHECK(res.truncated);
        CHECK((int)res.geodesics.size() == 3);
    }
    SUBCASE("counts match brute force on short pairs") {
        std::mt19937 rng(17);
        for (const GroupModel& G : {make_free_group(2), make_abelian_group(2), make_z2_free_z()}) {
            GeodesicAutomaton A = GeodesicAutomaton::build(G);
            for (int n = 1; n <= 4; ++n) {
                auto ys = sample_sphere_uniform(A, n, 8, 99 + n);
                for (const Element& y : ys) {
                    auto res = enumerate_geodesics(G, G.identity(), y, 1000);
                    REQUIRE(!res.truncated);
                    CHECK(res.count == brute_geodesic_count(G, G.identity(), y));
                }
            }
        }
    }
}

TEST_CASE("project examples") {
    GroupModel z2 = make_abelian_group(2);
    GroupModel f2 = make_free_group(2);

    SUBCASE("Z^2: a^3 b^5 onto [e, a^10] hits index 3 at distance 5") {
        PathSegment g = canonical_geodesic(z2, z2.identity(), parse_element(z2, "a^10"));
        auto res = project(z2, parse_element(z2, "a^3 b^5"), g);
        CHECK(res.distance == 5);
        REQUIRE(res.projections.size() == 1);
        CHECK(res.projections[0] == 3);
        CHECK(g.points[3] == parse_element(z2, "a^3"));
    }
    SUBCASE("F2: b^5 onto [e, a^10] hits the origin") {
        PathSegment g = canonical_geodesic(f2, f2.identity(), parse_element(f2, "a^10"));
        auto res = project(f2, parse_element(f2, "b^5"), g);
        CHECK(res.distance == 5);
        REQUIRE(res.projections.size() == 1);
        CHECK(res.projections[0] == 0);
    }
}

TEST_CASE("projection_diameter: Z^2 staircase endpoints spread the projection") {
    GroupModel z2 = make_abelian_group(2);
    PathSegment g = canonical_geodesic(z2, z2.identity(), parse_element(z2, "a^6"));
    int d = projection_diameter(z2, g, {parse_element(z2, "b^6")},
                                {parse_element(z2, "a^6 b^6")});
    CHECK(d == 6);
    // single set, empty second argument
    CHECK(projection_diameter(z2, g, {parse_element(z2, "b^6")}, {}) == 0);
    CHECK_THROWS_AS(projection_diameter(z2, g, {}, {}), usage_error);
}

TEST_CASE("hausdorff_distance and fellow_travel") {
    GroupModel z2 = make_abelian_group(2);
    // two extreme geodesics e -> a^2 b^2: a a b b vs b b a a
    Element target = parse_element(z2, "a^2 b^2");
    auto all = enumerate_geodesics(z2, z2.identity(), target, 100);
    REQUIRE(all.count == 6);
    PathSegment lo = all.geodesics.front();   // a a b b
    PathSegment hi = all.geodesics.back();    // b b a a
    CHECK(hausdorff_distance(z2, lo, hi) == 2);
    CHECK(fellow_travel(z2, lo, hi, 3));
    CHECK(!fellow_travel(z2, lo, hi, 2));
    CHECK(hausdorff_distance(z2, lo, lo) == 0);
}

TEST_CASE("enumerate_ball agrees with the BFS oracle and honors the guard") {
    for (const GroupModel& G : {make_abelian_group(2), make_z2_free_z()}) {
        CAPTURE(G.canonical_text());
        GeodesicAutomaton A = GeodesicAutomaton::build(G);
        BallIndex ball = enumerate_ball(A, 5);
        auto oracle_spheres = bfs_spheres(G, 5);
        REQUIRE(ball.radius == 5);
        REQUIRE(ball.spheres.size() == oracle_spheres.size());
        for (int r = 0; r <= 5; ++r) {
            REQUIRE(ball.spheres[r].size() == oracle_spheres[r].size());
            for (size_t i = 0; i < ball.spheres[r].size(); ++i)
                CHECK(ball.spheres[r][i] == oracle_spheres[r][i]);
        }
    }
    GeodesicAutomaton A = GeodesicAutomaton::build(make_z2_free_z());
    try {
        enumerate_ball(A, 10, 200);  // B(3) = 143 fits, B(4) would need 609
        FAIL("expected resource_error");
    } catch (const resource_error& e) {
        CHECK(e.completed_radius == 3);
    }
}

TEST_CASE("distance is a metric on samples") {
    GroupModel zz = make_z2_free_z();
    GeodesicAutomaton A = GeodesicAutomaton::build(zz);
    auto pts = sample_sphere_uniform(A, 4, 12, 77);
    for (const Element& x : pts)
        for (const Element& y : pts) {
            CHECK(distance(zz, x, y) == distance(zz, y, x));
            CHECK((distance(zz, x, y) == 0) == (x == y));
            for (const Element& z : pts)
                CHECK(distance(zz, x, z) <= distance(zz, x, y) + distance(zz, y, z));
        }
}
