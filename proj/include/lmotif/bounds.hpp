#pragma once

// Tail bounds for theme orders. A theme order N_U is a sum of independent
// Bernoulli indicators with mean lambda; everything here bounds its upper
// tail, either through a Poisson approximation (Chen-Stein) or directly
// through a concentration inequality, and converts the relative excess
// Delta = (N_U - lambda) / lambda into the additive score
//   g(lambda, t) = lambda*((1+t)ln(1+t) - t) - ln h(lambda, t),
// whose exceedance probability obeys P(g >= s) <= occ_prob * e^{-s}.
// All tails are computed in log space so p-values far below DBL_MIN survive.

#include <cstdint>
#include <optional>

namespace lmotif::bounds {

// log P(Poisson(lambda) >= K). K = 0 gives 0 (= log 1).
double poisson_upper_tail_log(double lambda, std::uint64_t k_at_least);
double poisson_upper_tail(double lambda, std::uint64_t k_at_least);

// log of ((K - lambda)/(K - 2 lambda)) * P(Poisson(lambda) >= K); requires K > 2 lambda.
double chen_stein_bound_log(double lambda, std::uint64_t k_at_least);
double chen_stein_bound(double lambda, std::uint64_t k_at_least);

// Threshold above which the sqrt prefactor improves on the plain
// concentration bound: t_lambda = 1 + (1 + sqrt(1 + 16 pi lambda))/(4 pi lambda).
double t_threshold(double lambda);

// Piecewise prefactor: 1 for t <= t_lambda, else sqrt(t+1)/(sqrt(2 pi lambda)(t-1)).
double h_factor(double lambda, double t);

// (1+t)ln(1+t) - t, the exponent of the concentration bound.
double concentration_exponent(double t);

struct BoundInputs {
    double lambda = 0;
    double lambda2 = 0;  // sum of squared extension probabilities (diagnostics)
    double occ_prob = 1;
    double t = 0;
};

// P(Delta_U >= t and U is an occurrence) <= occ_prob * h * e^{-lambda * phi(t)}
// = occ_prob * e^{-g(lambda,t)}.
double local_bound_log(const BoundInputs& in);
double local_bound(const BoundInputs& in);

// The score function; strictly increasing bijection of (0, inf) in t.
double g_score(double lambda, double t);

// Inverse of g_score in t: unique t with g(lambda, t) = s.
double invert_g(double lambda, double s);

// min(1, expected_count * e^{-s_star}); the log10 variant takes the expected
// count in natural log to keep values below 1e-300 meaningful.
double global_pvalue(double expected_count, double s_star);
double global_pvalue_log10(double expected_count_log, double s_star);

// Lower bound on the ratio (true tail) / (concentration bound); only valid
// when lambda2 < 1/4 and 1 < t < 1/(8 sqrt(lambda2)) - 1, else nullopt.
std::optional<double> lower_bound_ratio(double lambda, double lambda2, double t);

// Total-variation distance between law(N_U | occurrence) and Poisson(lambda):
// at most min(1, 1/lambda) * lambda2.
double tv_distance_bound(double lambda, double lambda2);

}  // namespace lmotif::bounds
