#include "tfpp/hs_formula.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace tfpp {

namespace {

// Generalized hypergeometric series with term ratio `ratio(k)` (excluding the
// lambda factor). Both series used here have term decay ~ k^(-4/3) at
// lambda = 1, so the tail beyond K terms is estimated by the integral
// comparison sum_{j>K} t_j ~ 3 K t_K (valid for t_k ~ C k^(-4/3)).
double sum_series(const std::function<double(int64_t)>& ratio, double lambda,
                  SeriesControl ctl) {
    if (!(lambda >= 0.0 && lambda <= 1.0 + 1e-15))
        throw std::invalid_argument("hypergeometric series: lambda must lie in [0,1]");
    const bool at_one = lambda > 1.0 - 1e-6;
    const double lam = at_one ? 1.0 : lambda;
    const int64_t k_limit = at_one ? std::min<int64_t>(ctl.max_terms, 2'000'000) : ctl.max_terms;

    double t = 1.0, s = 1.0;
    for (int64_t k = 0; k < k_limit; ++k) {
        t *= ratio(k) * lam;
        s += t;
        // geometric tail bound: remaining terms sum to at most |t| lam/(1-lam)
        if (!at_one && std::fabs(t) * lam < ctl.tol * (1.0 - lam) * std::fabs(s)) return s;
    }
    if (at_one) {
        double kd = static_cast<double>(k_limit);
        return s + 3.0 * t * kd * (1.0 + 1.0 / (6.0 * kd));
    }
    throw std::runtime_error("hypergeometric series: max_terms exceeded without convergence");
}

} // namespace

double hyp2f1_a(double lambda, SeriesControl ctl) {
    const double a = 1.0 / 3.0, b = 2.0 / 3.0, c = 4.0 / 3.0;
    return sum_series(
        [=](int64_t k) {
            double kd = static_cast<double>(k);
            return (a + kd) * (b + kd) / ((c + kd) * (1.0 + kd));
        },
        lambda, ctl);
}

double hyp3f2(double lambda, SeriesControl ctl) {
    const double a3 = 4.0 / 3.0, b1 = 5.0 / 3.0, b2 = 2.0;
    return sum_series(
        [=](int64_t k) {
            double kd = static_cast<double>(k);
            return (1.0 + kd) * (a3 + kd) / ((b1 + kd) * (b2 + kd));
        },
        lambda, ctl);
}

double crossing_clusters_bounded_part(CrossRatio x) {
    // 2*pi*sqrt(3)/Gamma(1/3)^3: with 2F1(1/3,2/3;4/3;1) = sqrt(3)Gamma(1/3)^3/(6 pi)
    // the first term equals exactly 1 at lambda = 1, keeping this part bounded by 1.
    const double g3 = kGammaOneThird * kGammaOneThird * kGammaOneThird;
    const double c1 = 2.0 * M_PI * std::sqrt(3.0) / g3;
    const double c2 = std::sqrt(3.0) / (4.0 * M_PI);
    return c1 * std::cbrt(x.lambda) * hyp2f1_a(x.lambda) - c2 * x.lambda * hyp3f2(x.lambda);
}

double expected_crossing_clusters(CrossRatio x) {
    // lambda may round to 1.0 in double when the true value is within one ulp
    // of 1; the complement field is authoritative there.
    if (!(x.lambda > 0.0 && x.lambda <= 1.0) ||
        !(x.one_minus_lambda > 0.0 && x.one_minus_lambda < 1.0))
        throw std::invalid_argument("expected_crossing_clusters: lambda must lie in (0,1)");
    const double c2 = std::sqrt(3.0) / (4.0 * M_PI);
    return crossing_clusters_bounded_part(x) - c2 * std::log(x.one_minus_lambda);
}

double expected_crossing_clusters(double lambda) {
    return expected_crossing_clusters(CrossRatio{lambda, 1.0 - lambda});
}

double elliptic_K(double m) {
    if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("elliptic_K: m must lie in [0,1)");
    double a = 1.0, g = std::sqrt(1.0 - m);
    for (int it = 0; it < 64 && std::fabs(a - g) > 4e-16 * a; ++it) {
        double an = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = an;
    }
    return M_PI / (2.0 * a);
}

namespace {

// K computed from the complementary parameter pieces so that k -> 1 stays
// accurate: with e = 1-k, K(k^2) = pi/(2 AGM(1, sqrt(e(2-e)))) and
// K(1-k^2) = pi/(2 AGM(1, 1-e)).
double aspect_ratio_from_e(double e) {
    double agm1 = 1.0, g1 = std::sqrt(e * (2.0 - e));
    for (int it = 0; it < 64 && std::fabs(agm1 - g1) > 4e-16 * agm1; ++it) {
        double an = 0.5 * (agm1 + g1);
        g1 = std::sqrt(agm1 * g1);
        agm1 = an;
    }
    double agm2 = 1.0, g2 = 1.0 - e;
    for (int it = 0; it < 64 && std::fabs(agm2 - g2) > 4e-16 * agm2; ++it) {
        double an = 0.5 * (agm2 + g2);
        g2 = std::sqrt(agm2 * g2);
        agm2 = an;
    }
    return 2.0 * agm2 / agm1; // = 2 K(k^2) / K(1-k^2)
}

} // namespace

CrossRatio rect_cross_ratio(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("rect_cross_ratio: eta must be positive");
    // Squat rectangles: rotating by 90 degrees inverts the aspect ratio and
    // cycles the marked corners, complementing the cross-ratio. Solving the
    // tall orientation keeps 1-k representable when k is near 0 or 1.
    if (eta < 1.0) {
        CrossRatio tall = rect_cross_ratio(1.0 / eta);
        return {tall.one_minus_lambda, tall.lambda};
    }
    // Bisection in s = log(1-k); the aspect ratio is monotone decreasing in s.
    double s_lo = -745.0, s_hi = -1e-14;
    double f_lo = aspect_ratio_from_e(std::exp(s_lo)) - eta;
    double f_hi = aspect_ratio_from_e(std::exp(s_hi)) - eta;
    if (!(f_lo > 0.0) || !(f_hi < 0.0))
        throw std::runtime_error("rect_cross_ratio: bisection bracket failed");
    for (int it = 0; it < 200; ++it) {
        double s = 0.5 * (s_lo + s_hi);
        if (aspect_ratio_from_e(std::exp(s)) > eta)
            s_lo = s;
        else
            s_hi = s;
    }
    double e = std::exp(0.5 * (s_lo + s_hi));
    double lambda = (e / (2.0 - e)) * (e / (2.0 - e));
    double one_minus = 4.0 * (1.0 - e) / ((2.0 - e) * (2.0 - e));
    return {lambda, one_minus};
}

CrossRatio half_annulus_cross_ratio_log(double log_R) {
    if (!(log_R > 0.0))
        throw std::invalid_argument("half_annulus_cross_ratio: requires R > 1");
    CrossRatio rect = rect_cross_ratio(log_R / M_PI);
    return {rect.one_minus_lambda, rect.lambda};
}

CrossRatio half_annulus_cross_ratio(double R) {
    if (!(R > 1.0)) throw std::invalid_argument("half_annulus_cross_ratio: requires R > 1");
    return half_annulus_cross_ratio_log(std::log(R));
}

double slope_log(double log_R) {
    if (!(log_R > 1.0)) throw std::invalid_argument("slope: requires R > e");
    return expected_crossing_clusters(half_annulus_cross_ratio_log(log_R)) / log_R;
}

double slope(double R) { return slope_log(std::log(R)); }

} // namespace tfpp
