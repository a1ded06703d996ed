#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isoscope {

struct Series {
    std::vector<double> values;
    std::string name;

    std::size_t size() const { return values.size(); }
};

struct CorrelationResult {
    double rho = 0.0;
    double p_value = 1.0;
    int n = 0;
    int df = 0; // n - 2 - (#controlled covariates)
};

// Affine fit: prediction = intercept + sum(coef * feature).
struct RegressionFit {
    double intercept = 0.0;
    std::vector<double> coefficients;
    std::vector<std::string> feature_names;
};

enum class PValueMethod {
    TApprox,          // two-tailed Student-t via the incomplete beta
    ExactPermutation, // full permutation distribution, n <= 10 only
};

// 1-based ranks; ties receive the mean of their rank range.
Series ranks_average_ties(const Series& x);

// Product-moment correlation; throws StatsError on zero variance.
double pearson(const Series& x, const Series& y);

// Two-sided p-value for t with the given degrees of freedom.
double two_sided_t_pvalue(double t, int df);

// Spearman's rho (Pearson on average ranks) with a two-tailed p-value
// from t = rho * sqrt((n-2)/(1-rho^2)), df = n-2. rho = +-1 gives p = 0.
// The t approximation is adequate for n >= 10; ExactPermutation is
// available for smaller samples.
CorrelationResult spearman(const Series& x, const Series& y,
                           PValueMethod method = PValueMethod::TApprox);

// First-order partial correlation recursion:
// r_xy.z = (r_xy - r_xz*r_yz) / sqrt((1-r_xz^2)(1-r_yz^2)).
double partial_correlation_step(double r_xy, double r_xz, double r_yz);

// Rank-based partial correlation controlling 1 or 2 covariates; p-value
// from t with df = n - 2 - #covariates. Throws StatsError when a
// recursion denominator is nonpositive (collinear covariates).
CorrelationResult partial_spearman(const Series& x, const Series& y,
                                   const std::vector<Series>& covars);

// Least squares via column-pivoted QR; throws StatsError on a
// rank-deficient design.
RegressionFit ols_fit(const std::vector<Series>& X, const Series& y);

Series predict(const RegressionFit& fit, const std::vector<Series>& X);

// 1 - Var(y - yhat)/Var(y) with population variances; negative values
// mean the fit failed. Throws StatsError when Var(y) = 0.
double explained_variance(const Series& y, const Series& yhat);

// Mean held-out explained variance over k folds. Folds are contiguous
// index ranges when shuffle is false, or ranges of a splitmix64-seeded
// Fisher-Yates permutation when true.
double kfold_cv_explained_variance(const std::vector<Series>& X, const Series& y,
                                   int k, bool shuffle, std::uint64_t seed);

// Natural log elementwise; throws StatsError on nonpositive values.
Series log_series(const Series& x);

} // namespace isoscope
