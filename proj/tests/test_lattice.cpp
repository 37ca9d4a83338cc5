#include <doctest.h>

#include <initializer_list>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "tfpp/lattice.hpp"

using namespace tfpp;

TEST_CASE("neighbor offsets are the six unit-distance lattice directions") {
    int sum_a = 0, sum_b = 0;
    for (auto d : kNeighborOffsets) {
        Vec2 p = position(d);
        CHECK(std::hypot(p.x, p.y) == doctest::Approx(1.0).epsilon(1e-12));
        sum_a += d.a;
        sum_b += d.b;
    }
    CHECK(sum_a == 0);
    CHECK(sum_b == 0);
    // counterclockwise order: each offset is the previous rotated by 60 degrees
    for (int k = 0; k < 6; ++k) {
        Vec2 u = position(kNeighborOffsets[k]);
        Vec2 v = position(kNeighborOffsets[(k + 1) % 6]);
        CHECK(u.x * v.y - u.y * v.x == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    }
}

TEST_CASE("position maps strip terminals onto the imaginary axis") {
    for (int k = 0; k <= 5; ++k) {
        Vec2 p = position(SiteCoord{-k, 2 * k});
        CHECK(p.x == doctest::Approx(0.0));
        CHECK(p.y == doctest::Approx(kSqrt3 * k).epsilon(1e-12));
    }
}

TEST_CASE("hex vertices have circumradius 1/sqrt(3) around the site center") {
    auto vs = hex_vertices(SiteCoord{3, -2});
    Vec2 c = position(SiteCoord{3, -2});
    for (auto v : vs)
        CHECK(std::hypot(v.x - c.x, v.y - c.y) ==
              doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

namespace {

// Independent membership scan: every site in a generous (a,b) window whose
// hexagon meets the closed continuum region.
std::set<std::pair<int, int>> brute_half_disk(int n) {
    std::set<std::pair<int, int>> out;
    for (int b = -2; b <= 2 * n + 2; ++b)
        for (int a = -2 * n - 2; a <= 2 * n + 2; ++a) {
            SiteCoord s{a, b};
            if (hex_intersects_half_disk(s, n)) out.insert({a, b});
        }
    return out;
}

std::set<std::pair<int, int>> mask_sites(const RegionMask& m) {
    std::set<std::pair<int, int>> out;
    for (auto s : m.sites()) out.insert({s.a, s.b});
    return out;
}

} // namespace

TEST_CASE("half-disk membership equals the brute hexagon scan") {
    for (int n : {1, 2, 3, 5}) {
        RegionMask m = build_region(HalfDiskSpec{n});
        CHECK(mask_sites(m) == brute_half_disk(n));
    }
}

TEST_CASE("half-annulus membership is the disk-set difference") {
    RegionMask m = build_region(HalfAnnulusSpec{2, 4});
    auto outer = brute_half_disk(4);
    auto inner = brute_half_disk(2);
    std::set<std::pair<int, int>> expect;
    for (auto p : outer)
        if (!inner.count(p)) expect.insert(p);
    CHECK(mask_sites(m) == expect);
}

TEST_CASE("sites come back in canonical (b,a) order") {
    RegionMask m = build_region(HalfAnnulusSpec{1, 4});
    auto& ss = m.sites();
    CHECK(std::is_sorted(ss.begin(), ss.end(), canonical_less));
}

TEST_CASE("region sites form one connected component") {
    for (RegionSpec spec :
         {RegionSpec{HalfDiskSpec{4}}, RegionSpec{HalfAnnulusSpec{2, 5}},
          RegionSpec{StripSpec{0, 3}}, RegionSpec{SectorSpec{M_PI / 2, 0.125}}}) {
        RegionMask m = build_region(spec);
        std::vector<char> seen(m.site_count(), 0);
        std::queue<int32_t> q;
        q.push(0);
        seen[0] = 1;
        int64_t reached = 1;
        while (!q.empty()) {
            SiteCoord s = m.site(q.front());
            q.pop();
            for (auto nb : neighbors(s)) {
                int32_t j = m.site_index(nb);
                if (j >= 0 && !seen[j]) {
                    seen[j] = 1;
                    ++reached;
                    q.push(j);
                }
            }
        }
        CHECK(reached == m.site_count());
    }
}

TEST_CASE("boundary lists are disjoint, correctly classified, region-adjacent") {
    RegionMask m = build_region(HalfAnnulusSpec{2, 5});
    std::set<std::pair<int, int>> seen;
    auto check_list = [&](const std::vector<SiteCoord>& list, BoundaryClass cls) {
        for (auto s : list) {
            CHECK(m.classify(s) == cls);
            CHECK(!m.contains(s));
            CHECK(seen.insert({s.a, s.b}).second); // no overlap between classes
            bool adj = false;
            for (auto nb : neighbors(s)) adj = adj || m.contains(nb);
            CHECK(adj);
        }
    };
    check_list(m.boundary_l(), BoundaryClass::Dl);
    check_list(m.boundary_r(), BoundaryClass::Dr);
    check_list(m.boundary_i(), BoundaryClass::Di);
    check_list(m.boundary_o(), BoundaryClass::Do);
    CHECK(!m.boundary_l().empty());
    CHECK(!m.boundary_r().empty());
    CHECK(!m.boundary_i().empty());
    CHECK(!m.boundary_o().empty());

    // l/r boundary hexagons sit strictly below the real axis, split by sign
    for (auto s : m.boundary_l()) {
        CHECK(position(s).y < 0.0);
        CHECK(position(s).x < 0.0);
    }
    for (auto s : m.boundary_r()) {
        CHECK(position(s).y < 0.0);
        CHECK(position(s).x > 0.0);
    }
    // inner boundary hexagons meet the inner disk; outer ones do not
    for (auto s : m.boundary_i())
        if (position(s).y >= 0.0) CHECK(hex_intersects_half_disk(s, 2));
    for (auto s : m.boundary_o()) CHECK(!hex_intersects_half_disk(s, 2));
}

TEST_CASE("strip mask: row membership, truncation, terminals") {
    RegionMask m = build_region(StripSpec{0, 1});
    CHECK(m.contains(SiteCoord{0, 1}));
    CHECK(!m.contains(SiteCoord{1, 0})); // row b=0 holds only the terminal
    CHECK(m.contains(SiteCoord{0, 0}));  // lower terminal itself
    REQUIRE(m.terminals().size() == 2);
    CHECK(m.site(m.terminals()[0]) == SiteCoord{0, 0});
    CHECK(m.site(m.terminals()[1]) == SiteCoord{-1, 2});
    for (auto s : m.sites()) {
        CHECK(s.b >= 0);
        CHECK(s.b <= 2);
        if (s.b == 0) CHECK(s == SiteCoord{0, 0});
    }

    RegionMask narrow = build_region(StripSpec{0, 2, 1.5});
    for (auto s : narrow.sites()) CHECK(std::fabs(s.a + 0.5 * s.b) <= 1.5 + 1e-9);
    CHECK(narrow.site_count() == 15);
}

TEST_CASE("sector with opening pi matches the half-disk site set") {
    int n = 8;
    RegionMask disk = build_region(HalfDiskSpec{n});
    RegionMask sect = build_region(SectorSpec{M_PI, 1.0 / n});
    CHECK(mask_sites(disk) == mask_sites(sect));
}

TEST_CASE("polygon region covers the square and classifies all boundary as outer") {
    PolygonSpec sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.1};
    RegionMask m = build_region(sq);
    CHECK(m.site_count() > 80); // ~ area/hex-area = 1 / (sqrt(3)/2 * 0.01)
    CHECK(m.boundary_l().empty());
    CHECK(m.boundary_r().empty());
    CHECK(m.boundary_i().empty());
    CHECK(!m.boundary_o().empty());
}

TEST_CASE("spec ids are stable strings") {
    CHECK(spec_id(HalfDiskSpec{7}) == "half_disk 7");
    CHECK(spec_id(HalfAnnulusSpec{2, 4}) == "half_annulus 2 4");
    CHECK(spec_name(RegionSpec{StripSpec{0, 3}}) == "strip");
}

TEST_CASE("invalid specs are refused") {
    CHECK_THROWS_AS(build_region(HalfDiskSpec{0}), RegionError);
    CHECK_THROWS_AS(build_region(HalfAnnulusSpec{3, 3}), RegionError);
    CHECK_THROWS_AS(build_region(HalfAnnulusSpec{4, 2}), RegionError);
    CHECK_THROWS_AS(build_region(StripSpec{2, 2}), RegionError);
    CHECK_THROWS_AS(build_region(SectorSpec{0.0, 0.1}), RegionError);
    CHECK_THROWS_AS(build_region(SectorSpec{M_PI, 0.0}), RegionError);
}

TEST_CASE("serialization round-trips bit-exactly") {
    for (RegionSpec spec : {RegionSpec{HalfAnnulusSpec{2, 4}}, RegionSpec{StripSpec{0, 2}},
                            RegionSpec{HalfDiskSpec{3}}}) {
        RegionMask m = build_region(spec);
        std::stringstream ss;
        m.serialize(ss);
        RegionMask back = RegionMask::deserialize(ss);
        CHECK(back.id() == m.id());
        CHECK(back.sites() == m.sites());
        CHECK(back.terminals() == m.terminals());
        for (int b = m.b_min(); b <= m.b_max(); ++b)
            for (int a = m.a_min(); a <= m.a_max(); ++a)
                CHECK(back.classify(SiteCoord{a, b}) == m.classify(SiteCoord{a, b}));
        std::stringstream ss2;
        back.serialize(ss2);
        std::stringstream ss3;
        m.serialize(ss3);
        CHECK(ss2.str() == ss3.str());
    }
}

TEST_CASE("sites_adjacent_to returns exactly the exposed sites") {
    RegionMask m = build_region(HalfAnnulusSpec{1, 3});
    auto idx = m.sites_adjacent_to(BoundaryClass::Di);
    for (auto i : idx) {
        bool adj = false;
        for (auto nb : neighbors(m.site(i)))
            adj = adj || (m.classify(nb) == BoundaryClass::Di);
        CHECK(adj);
    }
    for (int32_t i = 0; i < m.site_count(); ++i) {
        bool adj = false;
        for (auto nb : neighbors(m.site(i)))
            adj = adj || (m.classify(nb) == BoundaryClass::Di);
        CHECK(adj == (std::find(idx.begin(), idx.end(), i) != idx.end()));
    }
}
