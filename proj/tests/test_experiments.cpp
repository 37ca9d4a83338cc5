#include <doctest.h>

#include <initializer_list>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "tfpp/experiments.hpp"

using namespace tfpp;

TEST_CASE("estimator merge equals sequential feeding") {
    RngStream s(17, 0);
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) xs.push_back(s.next_normal() * 3.0 + 1.5);

    EstimatorState whole;
    for (double x : xs) whole.add(x);

    for (size_t cut : {size_t{1}, size_t{137}, size_t{2500}, size_t{4999}}) {
        EstimatorState a, b;
        for (size_t i = 0; i < cut; ++i) a.add(xs[i]);
        for (size_t i = cut; i < xs.size(); ++i) b.add(xs[i]);
        EstimatorState m = merge(a, b);
        CHECK(m.count == whole.count);
        CHECK(m.mean == doctest::Approx(whole.mean).epsilon(1e-9));
        CHECK(m.variance() == doctest::Approx(whole.variance()).epsilon(1e-9));
    }
    EstimatorState empty;
    CHECK(merge(empty, whole).mean == whole.mean);
    CHECK(merge(whole, empty).count == whole.count);
}

TEST_CASE("normal cdf and KS distance behave sanely") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.975).epsilon(1e-3));
    CHECK(normal_cdf(-8.0) < 1e-14);

    RngStream s(23, 0);
    std::vector<double> normals, uniforms;
    for (int i = 0; i < 5000; ++i) {
        normals.push_back(s.next_normal());
        uniforms.push_back(s.next_double());
    }
    CHECK(ks_distance_normal(normals) < 0.03);
    CHECK(ks_distance_normal(uniforms) > 0.3);
}

TEST_CASE("CSV output has the fixed header and empty optional fields") {
    std::vector<ResultRow> rows(2);
    rows[0] = {"demo", 8.0, 1.25, 0.5, 0.05, 100, 0.2757, 0.6};
    rows[1].experiment = "demo";
    rows[1].scale = 16.0;
    rows[1].count = 50;
    std::ostringstream os;
    write_csv(os, rows);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "experiment,scale,estimate,variance,stderr,count,target,normalized");
    std::getline(is, line);
    CHECK(line.rfind("demo,8,", 0) == 0);
    std::getline(is, line);
    CHECK(line.substr(line.size() - 2) == ",,"); // absent target/normalized
    CHECK(!std::getline(is, line));

    std::ostringstream os2;
    write_csv(os2, rows, /*truncated=*/true);
    CHECK(os2.str().find("# truncated") != std::string::npos);
}

TEST_CASE("map_replicas is schedule-independent and ordered") {
    auto fn = [](int64_t i) { return std::sqrt(static_cast<double>(i)) + 1.0; };
    std::vector<double> one, four;
    REQUIRE(map_replicas(500, 1, fn, one));
    REQUIRE(map_replicas(500, 4, fn, four));
    CHECK(one == four);
    for (int64_t i = 0; i < 500; ++i) CHECK(one[i] == fn(i));
}

TEST_CASE("replica streams and site coins are stable hashes") {
    CHECK(replica_stream("cn", 3) == replica_stream("cn", 3));
    CHECK(replica_stream("cn", 3) != replica_stream("cn", 4));
    CHECK(replica_stream("cn", 3) != replica_stream("cyl", 3));
    SiteCoord s{5, -2};
    CHECK(site_coin(99, s) == site_coin(99, s));
}

TEST_CASE("coupled configurations agree site-for-site across masks") {
    RegionMask small = build_region(HalfDiskSpec{4});
    RegionMask big = build_region(HalfDiskSpec{8});
    uint64_t key = replica_stream("couple", 0);
    Configuration cs = coupled_config(small, key);
    Configuration cb = coupled_config(big, key);
    for (int32_t i = 0; i < small.site_count(); ++i) {
        int32_t j = big.site_index(small.site(i));
        REQUIRE(j >= 0);
        CHECK(cs.bit(i) == cb.bit(j));
    }
}

TEST_CASE("experiment runners emit well-formed rows deterministically") {
    auto rows1 = run_cn_scaling({4, 8}, 40, 2024, 1);
    auto rows4 = run_cn_scaling({4, 8}, 40, 2024, 4);
    std::ostringstream a, b;
    write_csv(a, rows1);
    write_csv(b, rows4);
    CHECK(a.str() == b.str()); // worker count cannot change results

    REQUIRE(!rows1.empty());
    bool saw_mean = false;
    for (auto& r : rows1) {
        CHECK(!r.experiment.empty());
        CHECK(r.count > 0);
        if (r.experiment == "cn_mean") {
            saw_mean = true;
            CHECK(r.estimate >= 0.0);
            REQUIRE(r.target.has_value());
            CHECK(*r.target == doctest::Approx(0.27566444771089593));
        }
    }
    CHECK(saw_mean);
}

TEST_CASE("renewal-slope runner normalizes by the threshold") {
    auto rows = run_renewal_slope({40.0}, 60, 7, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].scale == doctest::Approx(40.0));
    CHECK(rows[0].count == 60);
    REQUIRE(rows[0].normalized.has_value());
    CHECK(*rows[0].normalized == doctest::Approx(rows[0].estimate / 40.0));
    CHECK(std::fabs(*rows[0].normalized - 0.2757) < 0.1);
}

TEST_CASE("resource guards and precondition refusals") {
    CHECK_THROWS_AS(audit_shape(build_region(HalfAnnulusSpec{1, 4})), ResourceError);
    CHECK_THROWS(run_clt_renewal(10.0, 50, 1, 1)); // needs >= 100 replicas
    for (auto& [name, spec] : bundled_audit_shapes()) {
        RegionMask m = build_region(spec);
        CHECK(m.site_count() <= 22);
        CHECK(!name.empty());
    }
}

TEST_CASE("tail runner produces a survival curve and a fit") {
    TailResult t = run_tail(1, 8, 3000, 11, 2);
    CHECK(t.fit_slope < 0.0);
    CHECK(t.r_squared > 0.5);
    REQUIRE(!t.rows.empty());
    // survival is nonincreasing in the level
    double prev = 2.0;
    for (auto& r : t.rows) {
        if (r.experiment != "tail_survival") continue;
        CHECK(r.estimate <= prev + 1e-12);
        prev = r.estimate;
    }
}
