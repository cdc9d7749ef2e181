#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "simpair/error.hpp"

namespace simpair {

double sigmoid(double t);
double logit(double p);
// log(1 + exp(t)) without overflow.
double log1pexp(double t);
// Pearson correlation; 0 when either input is constant.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

enum class FitStatus {
    converged,
    max_iter,
    separated,  // slope ran away: perfectly ordered outcomes
    degenerate, // fit impossible: constant outcome or constant predictor
};
const char* to_string(FitStatus status);

// One univariate regression: outcome ~ alpha + beta * x behind the model link.
// loglik_null is the intercept-only model, always nested in the full model.
struct FitResult {
    double alpha = 0.0;
    double beta = 0.0;
    double loglik_full = 0.0;
    double loglik_null = 0.0;
    double p_value = 1.0;  // likelihood-ratio test of beta = 0
    std::size_t n = 0;
    FitStatus status = FitStatus::degenerate;
};

// Two-predictor logistic fit; the null model drops beta_p but keeps beta_c.
struct MultiFitResult {
    double alpha = 0.0;
    double beta_p = 0.0;
    double beta_c = 0.0;
    double loglik = 0.0;
    double loglik_null = 0.0;
    double p_value_beta_p = 1.0;
    std::size_t n = 0;
    FitStatus status = FitStatus::degenerate;
};

// Three-valued trend classification: -1, 0, +1.
struct TrendSign {
    int value = 0;
};

// Per-iteration log-likelihood record, filled when a caller passes one in.
struct IrlsTrace {
    std::vector<double> loglik;
};

// Maximum-likelihood logistic regression of a binary y on x via iteratively
// reweighted least squares. x is standardized internally and the coefficients
// mapped back, so results are invariant under affine rescaling of x.
FitResult fit_logistic(std::span<const double> x, std::span<const double> y,
                       IrlsTrace* trace = nullptr);

// Ordinary least squares (Gaussian maximum likelihood) of y on x.
FitResult fit_linear(std::span<const double> x, std::span<const double> y);

MultiFitResult fit_logistic_multivariate(std::span<const double> x_p,
                                         std::span<const double> x_c,
                                         std::span<const double> y,
                                         IrlsTrace* trace = nullptr);

// p-value of the statistic 2*(loglik_full - loglik_null), clamped at zero,
// under a chi-square distribution with df degrees of freedom.
double likelihood_ratio_test(double loglik_full, double loglik_null, int df);

// P(chi2_df > x), computed from the regularized upper incomplete gamma
// function Q(df/2, x/2).
double chi_square_survival(double x, int df);

// 0 if the fit is degenerate, beta is zero, or p_value exceeds the threshold;
// otherwise the sign of beta.
TrendSign trend_sign(const FitResult& fit, double threshold);

// Bernoulli log-likelihood of y under p_i = sigmoid(alpha + beta * x_i).
double logistic_loglik(std::span<const double> x, std::span<const double> y,
                       double alpha, double beta);

}  // namespace simpair
