#include "isoscope/stats.hpp"
#include "isoscope/errors.hpp"
#include "isoscope/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace isoscope {

namespace {

std::string series_label(const Series& s) {
    return s.name.empty() ? std::string("<series>") : s.name;
}

void require_finite(const Series& s) {
    for (double v : s.values)
        if (!std::isfinite(v))
            throw StatsError("series '" + series_label(s) + "' contains a non-finite value");
}

void require_same_length(const Series& a, const Series& b) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "length mismatch: '" << series_label(a) << "' has " << a.size() << ", '"
           << series_label(b) << "' has " << b.size();
        throw StatsError(os.str());
    }
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Population variance (divide by n); explained-variance scores shift if
// the sample convention is mixed in.
double population_variance(const std::vector<double>& v) {
    double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size());
}

double clamp_rho(double r) { return std::clamp(r, -1.0, 1.0); }

double pvalue_from_rho(double rho, int df) {
    if (df <= 0) throw StatsError("p-value needs positive degrees of freedom");
    if (std::abs(rho) >= 1.0) return 0.0;
    double t = rho * std::sqrt(static_cast<double>(df) / (1.0 - rho * rho));
    return two_sided_t_pvalue(t, df);
}

// Exact two-sided permutation p-value: fraction of the n! orderings of
// y whose |rho| reaches the observed one.
double exact_permutation_pvalue(const Series& rx, const Series& ry, double rho_obs) {
    std::size_t n = rx.size();
    if (n > 10)
        throw StatsError("exact permutation p-value supported only for n <= 10");
    std::vector<double> cx(n), cy(n);
    double mx = mean_of(rx.values), my = mean_of(ry.values);
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cx[i] = rx.values[i] - mx;
        cy[i] = ry.values[i] - my;
        sx += cx[i] * cx[i];
        sy += cy[i] * cy[i];
    }
    double denom = std::sqrt(sx * sy);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long hits = 0, count = 0;
    double threshold = std::abs(rho_obs) - 1e-12;
    do {
        double dot = 0;
        for (std::size_t i = 0; i < n; ++i) dot += cx[i] * cy[perm[i]];
        if (std::abs(dot / denom) >= threshold) ++hits;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(count);
}

Eigen::MatrixXd design_matrix(const std::vector<Series>& X, std::size_t n) {
    Eigen::MatrixXd A(n, X.size() + 1);
    A.col(0).setOnes();
    for (std::size_t j = 0; j < X.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) A(i, j + 1) = X[j].values[i];
    return A;
}

} // namespace

Series ranks_average_ties(const Series& x) {
    if (x.values.empty()) throw StatsError("ranks of an empty series");
    require_finite(x);
    std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x.values[a] < x.values[b]; });
    Series out;
    out.name = x.name;
    out.values.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x.values[order[j + 1]] == x.values[order[i]]) ++j;
        double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out.values[order[k]] = rank;
        i = j + 1;
    }
    return out;
}

double pearson(const Series& x, const Series& y) {
    require_same_length(x, y);
    if (x.size() < 3) throw StatsError("pearson needs at least 3 observations");
    require_finite(x);
    require_finite(y);
    double mx = mean_of(x.values), my = mean_of(y.values);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x.values[i] - mx, dy = y.values[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw StatsError("series '" + series_label(x) + "' has zero variance");
    if (syy == 0.0) throw StatsError("series '" + series_label(y) + "' has zero variance");
    return clamp_rho(sxy / std::sqrt(sxx * syy));
}

double two_sided_t_pvalue(double t, int df) {
    if (df <= 0) throw StatsError("t p-value needs positive degrees of freedom");
    if (!std::isfinite(t)) return 0.0;
    double nu = static_cast<double>(df);
    double x = nu / (nu + t * t);
    return std::clamp(boost::math::ibeta(nu / 2.0, 0.5, x), 0.0, 1.0);
}

CorrelationResult spearman(const Series& x, const Series& y, PValueMethod method) {
    require_same_length(x, y);
    if (x.size() < 4) throw StatsError("spearman needs at least 4 observations");
    Series rx = ranks_average_ties(x);
    Series ry = ranks_average_ties(y);
    double rho = pearson(rx, ry);
    int n = static_cast<int>(x.size());
    int df = n - 2;
    double p = method == PValueMethod::ExactPermutation
                   ? exact_permutation_pvalue(rx, ry, rho)
                   : pvalue_from_rho(rho, df);
    return CorrelationResult{rho, p, n, df};
}

double partial_correlation_step(double r_xy, double r_xz, double r_yz) {
    double dx = 1.0 - r_xz * r_xz;
    double dy = 1.0 - r_yz * r_yz;
    if (dx <= 0.0 || dy <= 0.0)
        throw StatsError("collinear covariate: partial correlation denominator is nonpositive");
    return (r_xy - r_xz * r_yz) / std::sqrt(dx * dy);
}

CorrelationResult partial_spearman(const Series& x, const Series& y,
                                   const std::vector<Series>& covars) {
    if (covars.empty() || covars.size() > 2)
        throw StatsError("partial_spearman controls 1 or 2 covariates");
    std::size_t n = x.size();
    std::size_t min_n = 5 + covars.size();
    if (n < min_n)
        throw StatsError("partial_spearman needs at least " + std::to_string(min_n) +
                         " observations");
    require_same_length(x, y);
    for (const Series& z : covars) require_same_length(x, z);

    Series rx = ranks_average_ties(x);
    Series ry = ranks_average_ties(y);
    Series rz = ranks_average_ties(covars[0]);
    double r_xy = pearson(rx, ry);
    double r_xz = pearson(rx, rz);
    double r_yz = pearson(ry, rz);
    double rho = partial_correlation_step(r_xy, r_xz, r_yz);
    if (covars.size() == 2) {
        Series rw = ranks_average_ties(covars[1]);
        double r_xw = pearson(rx, rw);
        double r_yw = pearson(ry, rw);
        double r_zw = pearson(rz, rw);
        double r_xw_z = partial_correlation_step(r_xw, r_xz, r_zw);
        double r_yw_z = partial_correlation_step(r_yw, r_yz, r_zw);
        rho = partial_correlation_step(rho, r_xw_z, r_yw_z);
    }
    rho = clamp_rho(rho);
    int df = static_cast<int>(n) - 2 - static_cast<int>(covars.size());
    return CorrelationResult{rho, pvalue_from_rho(rho, df), static_cast<int>(n), df};
}

RegressionFit ols_fit(const std::vector<Series>& X, const Series& y) {
    if (X.empty()) throw StatsError("ols_fit needs at least one feature");
    std::size_t n = y.size();
    require_finite(y);
    for (const Series& s : X) {
        require_same_length(s, y);
        require_finite(s);
    }
    if (n <= X.size() + 1)
        throw StatsError("ols_fit needs more observations than parameters");

    Eigen::MatrixXd A = design_matrix(X, n);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) b(i) = y.values[i];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < A.cols()) throw StatsError("singular design matrix (collinear features)");
    Eigen::VectorXd coef = qr.solve(b);

    RegressionFit fit;
    fit.intercept = coef(0);
    fit.coefficients.resize(X.size());
    fit.feature_names.resize(X.size());
    for (std::size_t j = 0; j < X.size(); ++j) {
        fit.coefficients[j] = coef(j + 1);
        fit.feature_names[j] = X[j].name.empty() ? "x" + std::to_string(j + 1) : X[j].name;
    }
    return fit;
}

Series predict(const RegressionFit& fit, const std::vector<Series>& X) {
    if (X.size() != fit.coefficients.size())
        throw StatsError("predict: feature arity mismatch");
    if (X.empty()) throw StatsError("predict needs at least one feature");
    std::size_t n = X[0].size();
    for (const Series& s : X) require_same_length(s, X[0]);
    Series out;
    out.name = "predicted";
    out.values.assign(n, fit.intercept);
    for (std::size_t j = 0; j < X.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.values[i] += fit.coefficients[j] * X[j].values[i];
    return out;
}

double explained_variance(const Series& y, const Series& yhat) {
    require_same_length(y, yhat);
    if (y.size() < 2) throw StatsError("explained_variance needs at least 2 observations");
    require_finite(y);
    require_finite(yhat);
    double var_y = population_variance(y.values);
    if (var_y == 0.0) throw StatsError("explained_variance: target has zero variance");
    std::vector<double> resid(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) resid[i] = y.values[i] - yhat.values[i];
    return 1.0 - population_variance(resid) / var_y;
}

double kfold_cv_explained_variance(const std::vector<Series>& X, const Series& y, int k,
                                   bool shuffle, std::uint64_t seed) {
    std::size_t n = y.size();
    if (k < 2) throw StatsError("kfold needs k >= 2");
    if (n < 2 * static_cast<std::size_t>(k))
        throw StatsError("kfold needs at least 2k observations");
    for (const Series& s : X) require_same_length(s, y);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (shuffle) idx = shuffled_indices(n, seed);

    auto take = [&](const Series& s, std::size_t lo, std::size_t hi, bool inside_fold) {
        Series out;
        out.name = s.name;
        for (std::size_t i = 0; i < n; ++i) {
            bool in_fold = i >= lo && i < hi;
            if (in_fold == inside_fold) out.values.push_back(s.values[idx[i]]);
        }
        return out;
    };

    double sum = 0.0;
    for (int f = 0; f < k; ++f) {
        std::size_t lo = n * static_cast<std::size_t>(f) / static_cast<std::size_t>(k);
        std::size_t hi = n * static_cast<std::size_t>(f + 1) / static_cast<std::size_t>(k);
        if (hi - lo < 2) throw StatsError("kfold fold has fewer than 2 rows");
        std::vector<Series> x_train, x_test;
        for (const Series& s : X) {
            x_train.push_back(take(s, lo, hi, false));
            x_test.push_back(take(s, lo, hi, true));
        }
        Series y_train = take(y, lo, hi, false);
        Series y_test = take(y, lo, hi, true);
        RegressionFit fit = ols_fit(x_train, y_train);
        sum += explained_variance(y_test, predict(fit, x_test));
    }
    return sum / static_cast<double>(k);
}

Series log_series(const Series& x) {
    require_finite(x);
    Series out;
    out.name = x.name.empty() ? "" : "log_" + x.name;
    out.values.reserve(x.size());
    for (double v : x.values) {
        if (v <= 0.0)
            throw StatsError("log of nonpositive value in series '" + series_label(x) + "'");
        out.values.push_back(std::log(v));
    }
    return out;
}

} // namespace isoscope
