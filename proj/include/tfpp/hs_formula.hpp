#pragma once

#include <cstdint>

namespace tfpp {

// Gamma(1/3), to double precision.
inline constexpr double kGammaOneThird = 2.678938534707747633;

// Conformal cross-ratio in (0,1). The complement is carried separately so
// that values exponentially close to 1 (half-annuli with log R ~ 100) stay
// meaningful: 1 - lambda is then far below double round-off of lambda.
struct CrossRatio {
    double lambda;
    double one_minus_lambda;
};

struct SeriesControl {
    double tol = 1e-12;
    int64_t max_terms = 10'000'000;
};

// 2F1(1/3, 2/3; 4/3; lambda) for lambda in [0,1]. Convergent at 1 (parametric
// excess 1/3); within 1e-6 of 1 the series is summed at 1 with an algebraic
// tail estimate, introducing an O((1-lambda)^(1/3)) error.
double hyp2f1_a(double lambda, SeriesControl ctl = {});

// 3F2(1, 1, 4/3; 5/3, 2; lambda), same domain and edge handling.
double hyp3f2(double lambda, SeriesControl ctl = {});

// Expected number of crossing clusters at cross-ratio lambda:
//   (2*pi*sqrt(3)/Gamma(1/3)^3) lambda^(1/3) 2F1(...)
//   - (sqrt(3)/(4*pi)) lambda 3F2(...) + (sqrt(3)/(4*pi)) log(1/(1-lambda)).
double expected_crossing_clusters(CrossRatio x);
double expected_crossing_clusters(double lambda); // convenience, lambda in (0,1)

// First two terms of the formula above (their combination stays bounded by 1
// on all of (0,1); the log term carries the divergence).
double crossing_clusters_bounded_part(CrossRatio x);

// Complete elliptic integral of the first kind, parameter m = k^2 in [0,1),
// via the arithmetic-geometric mean.
double elliptic_K(double m);

// Cross-ratio of the eta x 1 rectangle with marked corners (i, 0, eta,
// eta+i): solves 2K(k^2)/K(1-k^2) = eta and returns (1-k)^2/(1+k)^2.
CrossRatio rect_cross_ratio(double eta);

// Cross-ratio of the upper-half annulus of modulus R (> 1) with its four
// boundary arcs: 1 - rect_cross_ratio(log(R)/pi).
CrossRatio half_annulus_cross_ratio_log(double log_R);
CrossRatio half_annulus_cross_ratio(double R);

// expected_crossing_clusters at the half-annulus cross-ratio, divided by
// log R; tends to sqrt(3)/(4*pi) as R grows.
double slope_log(double log_R);
double slope(double R);

} // namespace tfpp
