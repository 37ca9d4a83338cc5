#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "tfpp/estimator.hpp"
#include "tfpp/radial_sde.hpp"

using namespace tfpp;

TEST_CASE("drift reduces to (2/5) cot(theta/2) at kappa 6") {
    for (int k = 1; k < 1000; ++k) {
        double theta = 2.0 * M_PI * k / 1000.0;
        double expect = 0.4 / std::tan(theta / 2.0);
        CHECK(drift(theta, 6.0) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(drift(M_PI, 6.0) == doctest::Approx(0.0));
}

TEST_CASE("general-kappa drift at theta = pi") {
    for (double kappa : {24.0 / 5.0, 5.0, 7.0, 8.0}) {
        // sin(pi/2) = 1 and cos(pi/2) = 0 collapse the formula
        CHECK(drift(M_PI, kappa) ==
              doctest::Approx(0.8 * (3.0 - kappa / 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("drift is singular at the endpoints") {
    CHECK_THROWS(drift(0.0, 6.0));
    CHECK_THROWS(drift(2.0 * M_PI, 6.0));
}

TEST_CASE("closed-form MGF: normalization, known values, blow-up") {
    CHECK(mgf_Z(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // lambda = -1: radicand 1/36 - 2/3 < 0, cosh branch
    double expect = std::sqrt(3.0) / (2.0 * std::cosh(M_PI * std::sqrt(23.0) / 6.0));
    CHECK(mgf_Z(-1.0) == doctest::Approx(expect).epsilon(1e-14));
    // strictly increasing in lambda, divergence toward 1/3
    CHECK(mgf_Z(-0.5) < mgf_Z(-0.25));
    CHECK(mgf_Z(0.25) > 1.0);
    CHECK(mgf_Z(1.0 / 3.0 - 1e-10) > 1e3);
    CHECK_THROWS(mgf_Z(1.0 / 3.0));
    CHECK_THROWS(mgf_Z(0.5));
}

TEST_CASE("closed-form moments match the MGF derivatives and known decimals") {
    Moments mom = moments_Z();
    CHECK(mom.mean == doctest::Approx(2.0 * std::sqrt(3.0) * M_PI / 3.0).epsilon(1e-14));
    CHECK(mom.mean == doctest::Approx(3.6275987284684357).epsilon(1e-14));
    CHECK(mom.variance == doctest::Approx(9.106705397522013).epsilon(1e-12));
    // central finite differences of the MGF at 0
    double h = 1e-5;
    double d1 = (mgf_Z(h) - mgf_Z(-h)) / (2.0 * h);
    double d2 = (mgf_Z(h) - 2.0 * mgf_Z(0.0) + mgf_Z(-h)) / (h * h);
    CHECK(d1 == doctest::Approx(mom.mean).epsilon(1e-8));
    CHECK(d2 - d1 * d1 == doctest::Approx(mom.variance).epsilon(1e-4));
}

TEST_CASE("Z sampling refuses kappa other than 6") {
    RngStream s(1, 1);
    ThetaParams p;
    p.kappa = 5.0;
    CHECK_THROWS(sample_Z(p, s));
}

TEST_CASE("hitting-time sampling is deterministic per stream and dt-consistent") {
    ThetaParams p;
    p.dt = 1e-3;
    RngStream s1(77, 3), s2(77, 3);
    CHECK(sample_hitting_time(p, s1) == sample_hitting_time(p, s2));

    // coarse smoke test of the mean against the closed form E Z = 2 E S / 5
    EstimatorState coarse, fine;
    for (int r = 0; r < 3000; ++r) {
        RngStream sc(5, 2 * r), sf(5, 2 * r + 1);
        ThetaParams pc;
        pc.dt = 2e-3;
        ThetaParams pf;
        pf.dt = 5e-4;
        coarse.add(sample_Z(pc, sc));
        fine.add(sample_Z(pf, sf));
    }
    double mean = moments_Z().mean;
    CHECK(std::fabs(coarse.mean - mean) < 0.35);
    CHECK(std::fabs(fine.mean - mean) < 0.25);
    // discretization bias shrinks with dt
    CHECK(std::fabs(fine.mean - mean) <
          std::fabs(coarse.mean - mean) + 3.0 * (coarse.std_error() + fine.std_error()));
}

TEST_CASE("renewal counters agree between the epsilon and log parameterizations") {
    ThetaParams p;
    p.dt = 1e-3;
    for (int r = 0; r < 10; ++r) {
        RngStream s1(31, r), s2(31, r);
        CHECK(renewal_count(1e-6, p, s1) == renewal_count_log(-std::log(1e-6), p, s2));
    }
}

TEST_CASE("renewal counts scale linearly in the threshold (coarse)") {
    ThetaParams p;
    p.dt = 1e-3;
    EstimatorState e;
    double L = 60.0;
    for (int r = 0; r < 400; ++r) {
        RngStream s(99, r);
        e.add(static_cast<double>(renewal_count_log(L, p, s)) / L);
    }
    // limit sqrt(3)/(2 pi) = 0.2757 with O(1/L) boundary bias
    CHECK(std::fabs(e.mean - 0.27566444771089593) < 0.03);
}
