#include <doctest.h>

#include <initializer_list>

#include <set>
#include <sstream>
#include <string>

#include "tfpp/percolation.hpp"

using namespace tfpp;

TEST_CASE("sampling is a pure function of (mask, seed, stream)") {
    RegionMask m = build_region(HalfDiskSpec{6});
    RngStream s1(42, 7), s2(42, 7), s3(42, 8);
    Configuration a = sample_config(m, s1);
    Configuration b = sample_config(m, s2);
    Configuration c = sample_config(m, s3);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("per-site marginals sit in the binomial 6-sigma band") {
    RegionMask m = build_region(HalfDiskSpec{8}); // ~200 sites
    const int reps = 4000;
    std::vector<int> ones(m.site_count(), 0);
    for (int r = 0; r < reps; ++r) {
        RngStream s(123, static_cast<uint64_t>(r));
        Configuration c = sample_config(m, s);
        for (int64_t i = 0; i < m.site_count(); ++i) ones[i] += c.bit(i);
    }
    double band = 6.0 * 0.5 / std::sqrt(static_cast<double>(reps));
    for (int64_t i = 0; i < m.site_count(); ++i)
        CHECK(std::fabs(ones[i] / static_cast<double>(reps) - 0.5) <= band);
}

TEST_CASE("enumeration yields 2^sites distinct configurations in counter order") {
    RegionMask m = build_region(HalfAnnulusSpec{1, 2}); // 7 sites
    ConfigEnumerator en(m);
    CHECK(en.total() == 128);
    Configuration c;
    std::set<uint64_t> seen;
    uint64_t expect = 0;
    while (en.next(c)) {
        CHECK(c.words()[0] == expect); // canonical binary order
        seen.insert(c.words()[0]);
        ++expect;
    }
    CHECK(seen.size() == 128);
}

TEST_CASE("enumeration refuses masks beyond the 30-site limit") {
    RegionMask m = build_region(HalfDiskSpec{5}); // > 30 sites
    REQUIRE(m.site_count() > 30);
    CHECK_THROWS(ConfigEnumerator{m});
}

TEST_CASE("configuration snapshot round-trips bit-exactly") {
    RegionMask m = build_region(HalfAnnulusSpec{2, 5});
    RngStream s(9, 1);
    Configuration c = sample_config(m, s);
    std::stringstream ss;
    c.serialize(ss);
    std::string line = ss.str();
    CHECK(line.rfind("config half_annulus 2 5 ", 0) == 0);
    std::stringstream in(line);
    Configuration back = Configuration::deserialize(in);
    // bit count is known only byte-rounded without the mask; payload and id
    // must match exactly
    CHECK(back.mask_id() == m.id());
    CHECK(back.words() == c.words());
    for (int64_t i = 0; i < m.site_count(); ++i) CHECK(back.bit(i) == c.bit(i));
}

TEST_CASE("flip/set/fill_all keep padding bits clear") {
    RegionMask m = build_region(HalfDiskSpec{3});
    Configuration c(m);
    c.fill_all(true);
    for (int64_t i = 0; i < c.bit_count(); ++i) CHECK(c.bit(i));
    uint64_t top = c.words().back();
    int used = static_cast<int>(c.bit_count() & 63);
    if (used) CHECK((top >> used) == 0);
    c.flip(0);
    CHECK(!c.bit(0));
    c.set(0, true);
    c.fill_all(false);
    for (auto w : c.words()) CHECK(w == 0);
}

TEST_CASE("effective coloring covers sites and classified boundary") {
    RegionMask m = build_region(HalfAnnulusSpec{1, 3});
    Configuration c(m);
    c.set(0, true);
    EffectiveColoring color(m, c,
                            {Color::Open, Color::Open, Color::Open, Color::Blue});
    CHECK(color(m.site(0)) == Color::Yellow);
    CHECK(color(m.site(1)) == Color::Blue);
    CHECK(color(m.boundary_o().front()) == Color::Blue);
    CHECK(color(m.boundary_l().front()) == Color::Open);
    CHECK(color(m.boundary_i().front()) == Color::Open);
    // far outside both sites and boundary
    CHECK_THROWS_AS(color(SiteCoord{100, 100}), RegionError);
}
