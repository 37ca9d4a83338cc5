#pragma once

#include <cstdint>

#include "tfpp/rng.hpp"

namespace tfpp {

// Parameters of the reflected angular diffusion on (0, 2*pi):
//   d theta = drift(theta, kappa) dt - sqrt(4*kappa/5) dW,
// started at 0, reflected at 0, absorbed at 2*pi.
struct ThetaParams {
    double kappa = 6.0;
    double dt = 1e-4;
};

// (4 / (5 sin(theta/2))) * (3 - kappa/2 + (kappa/4 - 1) cos(theta/2));
// reduces to (2/5) cot(theta/2) at kappa = 6. Throws at theta in {0, 2*pi}.
double drift(double theta, double kappa);

// First time the Euler-Maruyama discretization reaches 2*pi (theta <- |theta|
// after every step realizes the reflection at 0). Throws after 1e4 time units
// without absorption.
double sample_hitting_time(const ThetaParams& params, RngStream& stream);

// Log-conformal-radius decrement Z = (2/5) * hitting time; the identity
// behind this scaling is specific to kappa = 6, so other kappas are refused.
double sample_Z(const ThetaParams& params, RngStream& stream);

// Closed form E[e^{lambda Z}] = sqrt(3) / (2 cos(pi sqrt(1/36 + 2 lambda/3)))
// for lambda < 1/3 (cos turns into cosh when the radicand is negative).
double mgf_Z(double lambda);

// Closed-form (mean, variance) of Z.
struct Moments {
    double mean;
    double variance;
};
Moments moments_Z();

// Renewal count: draws Z_1, Z_2, ... and returns max{k : sum_{i<=k} Z_i <=
// -log(epsilon)}; the number of nested cut domains whose conformal radius
// still exceeds epsilon.
int64_t renewal_count(double epsilon, const ThetaParams& params, RngStream& stream);

// Same threshold expressed directly as -log(epsilon) > 0, convenient for
// large depths where epsilon itself underflows.
int64_t renewal_count_log(double minus_log_eps, const ThetaParams& params, RngStream& stream);

} // namespace tfpp
