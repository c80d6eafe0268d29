#include "lmotif/bounds.hpp"

#include <cmath>

#include "lmotif/common.hpp"

namespace lmotif::bounds {

namespace {
constexpr double kPi = 3.14159265358979323846;

double require_positive(double v, const char* name) {
    if (!(v > 0) || std::isnan(v)) throw Error(std::string(name) + " must be positive");
    return v;
}
}  // namespace

double poisson_upper_tail_log(double lambda, std::uint64_t k_at_least) {
    if (lambda < 0 || std::isnan(lambda)) throw Error("poisson tail: lambda must be >= 0");
    if (k_at_least == 0) return 0.0;
    if (lambda == 0) return kNegInf;
    const double kd = double(k_at_least);

    if (kd > lambda) {
        // Sum upward from K: term ratios lambda/(K+i) < 1.
        const double log_first = -lambda + kd * std::log(lambda) - std::lgamma(kd + 1);
        double series = 1.0, term = 1.0;
        for (std::uint64_t i = 1; i < 100000000ull; ++i) {
            term *= lambda / (kd + double(i));
            series += term;
            if (term < series * 1e-18) break;
        }
        return log_first + std::log(series);
    }
    // K <= lambda: both tails are moderate, so 1 - lower_tail is stable.
    // Sum the lower tail downward from K-1: ratios j/lambda <= K/lambda <= 1.
    const double j0 = kd - 1;
    const double log_first = -lambda + j0 * std::log(lambda) - std::lgamma(j0 + 1);
    double series = 1.0, term = 1.0;
    for (double j = j0; j >= 1; j -= 1) {
        term *= j / lambda;
        series += term;
        if (term < series * 1e-18) break;
    }
    const double log_lower = log_first + std::log(series);
    return std::log1p(-std::exp(log_lower));
}

double poisson_upper_tail(double lambda, std::uint64_t k_at_least) {
    return std::exp(poisson_upper_tail_log(lambda, k_at_least));
}

double chen_stein_bound_log(double lambda, std::uint64_t k_at_least) {
    require_positive(lambda, "chen-stein: lambda");
    const double kd = double(k_at_least);
    if (!(kd > 2 * lambda))
        throw Error("chen-stein bound requires K > 2*lambda");
    return std::log((kd - lambda) / (kd - 2 * lambda)) +
           poisson_upper_tail_log(lambda, k_at_least);
}

double chen_stein_bound(double lambda, std::uint64_t k_at_least) {
    return std::exp(chen_stein_bound_log(lambda, k_at_least));
}

double t_threshold(double lambda) {
    require_positive(lambda, "t_threshold: lambda");
    return 1.0 + (1.0 + std::sqrt(1.0 + 16.0 * kPi * lambda)) / (4.0 * kPi * lambda);
}

double h_factor(double lambda, double t) {
    require_positive(lambda, "h_factor: lambda");
    require_positive(t, "h_factor: t");
    if (t <= t_threshold(lambda)) return 1.0;
    return std::sqrt(t + 1.0) / (std::sqrt(2.0 * kPi * lambda) * (t - 1.0));
}

double concentration_exponent(double t) {
    return (1.0 + t) * std::log1p(t) - t;
}

double g_score(double lambda, double t) {
    require_positive(lambda, "g_score: lambda");
    require_positive(t, "g_score: t");
    double g = lambda * concentration_exponent(t);
    if (t > t_threshold(lambda))
        g += 0.5 * std::log(2.0 * kPi * lambda) + std::log(t - 1.0) - 0.5 * std::log1p(t);
    return g;
}

double local_bound_log(const BoundInputs& in) {
    if (!(in.occ_prob >= 0 && in.occ_prob <= 1))
        throw Error("local_bound: occ_prob must be in [0,1]");
    require_positive(in.lambda, "local_bound: lambda");
    require_positive(in.t, "local_bound: t");
    return std::log(in.occ_prob) - g_score(in.lambda, in.t);
}

double local_bound(const BoundInputs& in) { return std::exp(local_bound_log(in)); }

double invert_g(double lambda, double s) {
    require_positive(lambda, "invert_g: lambda");
    require_positive(s, "invert_g: s");
    double lo = 0.0, hi = 1.0;
    while (g_score(lambda, hi) < s) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw Error("invert_g: no bracket (s too large)");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double val = g_score(lambda, mid);
        if (std::fabs(val - s) <= 1e-12 * std::max(1.0, s)) return mid;
        (val < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double global_pvalue(double expected_count, double s_star) {
    if (expected_count < 0) throw Error("global_pvalue: expected count must be >= 0");
    if (s_star < 0) throw Error("global_pvalue: s_star must be >= 0");
    return std::min(1.0, expected_count * std::exp(-s_star));
}

double global_pvalue_log10(double expected_count_log, double s_star) {
    constexpr double kLn10 = 2.302585092994046;
    return std::min(0.0, (expected_count_log - s_star) / kLn10);
}

std::optional<double> lower_bound_ratio(double lambda, double lambda2, double t) {
    if (!(lambda > 0) || !(lambda2 > 0)) return std::nullopt;
    if (!(lambda2 < 0.25)) return std::nullopt;
    if (!(t > 1.0) || !(t < 1.0 / (8.0 * std::sqrt(lambda2)) - 1.0)) return std::nullopt;
    const double r = (1.0 - 52.0 * (lambda2 / lambda) * (1.0 + t)) *
                     (1.0 - 2.0 / (1.0 + t)) * (1.0 - 1.0 / (10.0 * lambda * (1.0 + t)));
    return std::max(0.0, r);
}

double tv_distance_bound(double lambda, double lambda2) {
    require_positive(lambda, "tv bound: lambda");
    if (lambda2 < 0) throw Error("tv bound: lambda2 must be >= 0");
    return std::min(1.0, 1.0 / lambda) * lambda2;
}

}  // namespace lmotif::bounds
