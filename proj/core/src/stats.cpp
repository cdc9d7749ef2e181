#include "simpair/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace simpair {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double log1pexp(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("pearson_correlation: length mismatch");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

const char* to_string(FitStatus status) {
    switch (status) {
        case FitStatus::converged: return "converged";
        case FitStatus::max_iter: return "max_iter";
        case FitStatus::separated: return "separated";
        case FitStatus::degenerate: return "degenerate";
    }
    return "?";
}

double logistic_loglik(std::span<const double> x, std::span<const double> y,
                       double alpha, double beta) {
    double ll = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = alpha + beta * x[i];
        ll += y[i] * t - log1pexp(t);
    }
    return ll;
}

namespace {

constexpr int kMaxIterations = 100;
constexpr double kLoglikTol = 1e-10;
constexpr double kStepTol = 1e-6;
constexpr double kSeparationBound = 30.0;  // on the standardized slope
constexpr double kRidge = 1e-8;
constexpr double kMeanClamp = 1e-6;

struct Moments {
    double mean = 0.0;
    double sd = 0.0;  // population scale
};

Moments column_moments(std::span<const double> x) {
    Moments m;
    const double n = static_cast<double>(x.size());
    for (double v : x) m.mean += v;
    m.mean /= n;
    double ss = 0.0;
    for (double v : x) {
        const double d = v - m.mean;
        ss += d * d;
    }
    m.sd = std::sqrt(ss / n);
    return m;
}

// 0*log(0) = 0 convention.
double bernoulli_null_loglik(double ybar, std::size_t n) {
    double ll = 0.0;
    if (ybar > 0.0) ll += static_cast<double>(n) * ybar * std::log(ybar);
    if (ybar < 1.0) ll += static_cast<double>(n) * (1.0 - ybar) * std::log1p(-ybar);
    return ll;
}

// Gaussian log-likelihood at the MLE variance, floored to stay finite for
// exact fits.
double gaussian_loglik(double rss, std::size_t n) {
    const double s2 = std::max(rss / static_cast<double>(n), 1e-300);
    return -0.5 * static_cast<double>(n) *
           (std::log(2.0 * 3.14159265358979323846 * s2) + 1.0);
}

// Gaussian elimination with partial pivoting for the m x m system H d = g.
// Returns false when a pivot collapses relative to the matrix scale.
bool solve_small(std::array<std::array<double, 3>, 3> H, std::array<double, 3> g,
                 std::array<double, 3>& out, int m) {
    double scale = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) scale = std::max(scale, std::abs(H[i][j]));
    if (scale == 0.0) return false;
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(H[r][col]) > std::abs(H[pivot][col])) pivot = r;
        if (std::abs(H[pivot][col]) < 1e-14 * scale) return false;
        std::swap(H[col], H[pivot]);
        std::swap(g[col], g[pivot]);
        for (int r = col + 1; r < m; ++r) {
            const double f = H[r][col] / H[col][col];
            for (int c = col; c < m; ++c) H[r][c] -= f * H[col][c];
            g[r] -= f * g[col];
        }
    }
    for (int r = m - 1; r >= 0; --r) {
        double s = g[r];
        for (int c = r + 1; c < m; ++c) s -= H[r][c] * out[c];
        out[r] = s / H[r][r];
    }
    return true;
}

struct IrlsOutcome {
    std::array<double, 3> theta{};  // intercept, then one slope per predictor
    double loglik = 0.0;
    bool step_converged = false;
};

// Newton ascent on the Bernoulli log-likelihood over standardized predictors.
// Step halving keeps the log-likelihood non-decreasing; convergence requires
// both a flat log-likelihood and a small step, so runaway (separated) slopes
// keep growing until the bound check after the loop can see them.
IrlsOutcome run_irls(const std::vector<std::span<const double>>& zs,
                     std::span<const double> y, std::array<double, 3> init,
                     IrlsTrace* trace) {
    const int m = 1 + static_cast<int>(zs.size());
    const std::size_t n = y.size();

    auto loglik_at = [&](const std::array<double, 3>& th) {
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double t = th[0];
            for (int j = 1; j < m; ++j) t += th[j] * zs[j - 1][i];
            ll += y[i] * t - log1pexp(t);
        }
        return ll;
    };

    IrlsOutcome out;
    out.theta = init;
    out.loglik = loglik_at(out.theta);
    if (trace) trace->loglik.push_back(out.loglik);

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::array<double, 3> g{};
        std::array<std::array<double, 3>, 3> H{};
        for (std::size_t i = 0; i < n; ++i) {
            std::array<double, 3> basis{1.0, 0.0, 0.0};
            double t = out.theta[0];
            for (int j = 1; j < m; ++j) {
                basis[j] = zs[j - 1][i];
                t += out.theta[j] * basis[j];
            }
            const double p = sigmoid(t);
            const double w = p * (1.0 - p);
            const double r = y[i] - p;
            for (int a = 0; a < m; ++a) {
                g[a] += r * basis[a];
                for (int b = a; b < m; ++b) H[a][b] += w * basis[a] * basis[b];
            }
        }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < a; ++b) H[a][b] = H[b][a];

        std::array<double, 3> delta{};
        if (!solve_small(H, g, delta, m)) {
            for (int a = 0; a < m; ++a) H[a][a] += kRidge;
            if (!solve_small(H, g, delta, m)) {
                out.step_converged = true;  // nothing left to move
                break;
            }
        }

        double step = 1.0;
        std::array<double, 3> cand{};
        double ll_new = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            for (int a = 0; a < m; ++a) cand[a] = out.theta[a] + step * delta[a];
            ll_new = loglik_at(cand);
            if (std::isfinite(ll_new) && ll_new >= out.loglik - 1e-12) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.step_converged = true;  // at a numerical optimum
            break;
        }

        const double dll = ll_new - out.loglik;
        double dmax = 0.0;
        for (int a = 0; a < m; ++a) dmax = std::max(dmax, std::abs(step * delta[a]));
        out.theta = cand;
        out.loglik = ll_new;
        if (trace) trace->loglik.push_back(out.loglik);
        if (std::abs(dll) < kLoglikTol && dmax < kStepTol) {
            out.step_converged = true;
            break;
        }
    }
    return out;
}

void require_binary(std::span<const double> y, const char* where) {
    for (double v : y)
        if (v != 0.0 && v != 1.0)
            throw Error(std::string(where) + ": outcome values must be 0 or 1");
}

std::vector<double> standardize(std::span<const double> x, const Moments& m) {
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m.mean) / m.sd;
    return z;
}

}  // namespace

FitResult fit_logistic(std::span<const double> x, std::span<const double> y,
                       IrlsTrace* trace) {
    if (x.size() != y.size()) throw Error("fit_logistic: length mismatch");
    if (x.size() < 2) throw Error("fit_logistic: needs at least 2 rows");
    require_binary(y, "fit_logistic");

    FitResult r;
    r.n = x.size();
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    r.loglik_null = bernoulli_null_loglik(ybar, r.n);

    const Moments mx = column_moments(x);
    const double ybar_c = std::clamp(ybar, kMeanClamp, 1.0 - kMeanClamp);
    if (ybar == 0.0 || ybar == 1.0 || mx.sd == 0.0) {
        r.alpha = logit(ybar_c);
        r.beta = 0.0;
        r.loglik_full = r.loglik_null;
        r.p_value = 1.0;
        r.status = FitStatus::degenerate;
        return r;
    }

    const std::vector<double> z = standardize(x, mx);
    const IrlsOutcome ir =
        run_irls({std::span<const double>(z)}, y, {logit(ybar_c), 0.0, 0.0}, trace);

    const double beta_z = ir.theta[1];
    r.beta = beta_z / mx.sd;
    r.alpha = ir.theta[0] - beta_z * mx.mean / mx.sd;
    r.loglik_full = ir.loglik;
    if (std::abs(beta_z) > kSeparationBound)
        r.status = FitStatus::separated;
    else
        r.status = ir.step_converged ? FitStatus::converged : FitStatus::max_iter;
    r.p_value = likelihood_ratio_test(r.loglik_full, r.loglik_null, 1);
    return r;
}

FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("fit_linear: length mismatch");
    if (x.size() < 3) throw Error("fit_linear: needs at least 3 rows");

    FitResult r;
    r.n = x.size();
    const std::size_t n = x.size();
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xm;
        const double dy = y[i] - ym;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }

    r.loglik_null = gaussian_loglik(syy, n);
    if (sxx == 0.0 || syy == 0.0) {
        r.alpha = ym;
        r.beta = 0.0;
        r.loglik_full = r.loglik_null;
        r.p_value = 1.0;
        r.status = FitStatus::degenerate;
        return r;
    }

    r.beta = sxy / sxx;
    r.alpha = ym - r.beta * xm;
    const double rss = std::max(0.0, syy - r.beta * sxy);
    r.loglik_full = gaussian_loglik(rss, n);
    r.status = FitStatus::converged;
    r.p_value = likelihood_ratio_test(r.loglik_full, r.loglik_null, 1);
    return r;
}

MultiFitResult fit_logistic_multivariate(std::span<const double> x_p,
                                         std::span<const double> x_c,
                                         std::span<const double> y, IrlsTrace* trace) {
    if (x_p.size() != y.size() || x_c.size() != y.size())
        throw Error("fit_logistic_multivariate: length mismatch");
    if (y.size() < 3) throw Error("fit_logistic_multivariate: needs at least 3 rows");
    require_binary(y, "fit_logistic_multivariate");

    MultiFitResult r;
    r.n = y.size();
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    r.loglik_null = bernoulli_null_loglik(ybar, r.n);

    const Moments mp = column_moments(x_p);
    const Moments mc = column_moments(x_c);
    const double ybar_c = std::clamp(ybar, kMeanClamp, 1.0 - kMeanClamp);

    auto degenerate = [&]() {
        r.alpha = logit(ybar_c);
        r.beta_p = 0.0;
        r.beta_c = 0.0;
        r.loglik = r.loglik_null;
        r.p_value_beta_p = 1.0;
        r.status = FitStatus::degenerate;
        return r;
    };
    if (ybar == 0.0 || ybar == 1.0 || mp.sd == 0.0 || mc.sd == 0.0) return degenerate();
    if (std::abs(pearson_correlation(x_p, x_c)) > 1.0 - 1e-12) return degenerate();

    const std::vector<double> zp = standardize(x_p, mp);
    const std::vector<double> zc = standardize(x_c, mc);

    // Null model keeps the conditioning slope only; the full fit starts there
    // so its log-likelihood can never fall below the null's.
    const IrlsOutcome null_fit =
        run_irls({std::span<const double>(zc)}, y, {logit(ybar_c), 0.0, 0.0}, nullptr);
    const IrlsOutcome full_fit =
        run_irls({std::span<const double>(zp), std::span<const double>(zc)}, y,
                 {null_fit.theta[0], 0.0, null_fit.theta[1]}, trace);

    const double bp_z = full_fit.theta[1];
    const double bc_z = full_fit.theta[2];
    r.beta_p = bp_z / mp.sd;
    r.beta_c = bc_z / mc.sd;
    r.alpha = full_fit.theta[0] - bp_z * mp.mean / mp.sd - bc_z * mc.mean / mc.sd;
    r.loglik = full_fit.loglik;
    r.loglik_null = null_fit.loglik;
    if (std::max(std::abs(bp_z), std::abs(bc_z)) > kSeparationBound)
        r.status = FitStatus::separated;
    else
        r.status = full_fit.step_converged ? FitStatus::converged : FitStatus::max_iter;
    r.p_value_beta_p = likelihood_ratio_test(r.loglik, r.loglik_null, 1);
    return r;
}

namespace {

// Regularized upper incomplete gamma Q(a, t): series for the lower part when
// t < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double t) {
    if (t <= 0.0) return 1.0;
    const double log_prefix = -t + a * std::log(t) - std::lgamma(a);
    if (t < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int k = 0; k < 500; ++k) {
            ap += 1.0;
            del *= t / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        const double p = sum * std::exp(log_prefix);
        return std::clamp(1.0 - p, 0.0, 1.0);
    }
    const double tiny = 1e-300;
    double b = t + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 500; ++k) {
        const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

}  // namespace

double chi_square_survival(double x, int df) {
    if (df < 1) throw Error("chi_square_survival: df must be positive");
    if (x < 0.0) throw Error("chi_square_survival: x must be non-negative");
    return gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

double likelihood_ratio_test(double loglik_full, double loglik_null, int df) {
    if (df < 1) throw Error("likelihood_ratio_test: df must be positive");
    if (loglik_full < loglik_null - 1e-9)
        throw Error("likelihood_ratio_test: full model log-likelihood below nested null");
    const double stat = std::max(0.0, 2.0 * (loglik_full - loglik_null));
    return chi_square_survival(stat, df);
}

TrendSign trend_sign(const FitResult& fit, double threshold) {
    if (fit.status == FitStatus::degenerate || fit.beta == 0.0 || fit.p_value > threshold)
        return TrendSign{0};
    return TrendSign{fit.beta > 0.0 ? 1 : -1};
}

}  // namespace simpair
