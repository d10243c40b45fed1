#include "reltime/analysis.hpp"

#include "reltime/errors.hpp"
#include "reltime/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reltime {

namespace {

constexpr double kRidge = 1e-8;

// Dense column-major-free little matrix, big enough for whitening work.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

Mat multiply(const Mat& x, const Mat& y) {
    Mat out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
        }
    }
    return out;
}

Mat transpose(const Mat& x) {
    Mat out(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
    }
    return out;
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
// eigenvalues with the accumulated rotations in `vectors` (columns).
void jacobi_eigen(Mat a, std::vector<double>& values, Mat& vectors) {
    const std::size_t n = a.rows;
    vectors = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) vectors(i, i) = 1.0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            diag += a(p, p) * a(p, p);
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (off <= (off + diag) * 1e-28) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vectors(k, p), vkq = vectors(k, q);
                    vectors(k, p) = c * vkp - s * vkq;
                    vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
}

// Symmetric inverse square root via the eigendecomposition.
Mat inverse_sqrt(const Mat& a) {
    std::vector<double> values;
    Mat vectors;
    jacobi_eigen(a, values, vectors);
    for (double v : values) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw SingularCovariance("covariance not positive definite after ridge");
        }
    }
    const std::size_t n = a.rows;
    Mat scaled(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            scaled(i, j) = vectors(i, j) / std::sqrt(values[j]);
        }
    }
    return multiply(scaled, transpose(vectors));
}

Mat centered(const std::vector<std::vector<double>>& rows, const char* view) {
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();
    Mat out(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != p) {
            throw DomainError(std::string("cca: ragged rows in view ") + view);
        }
        for (std::size_t j = 0; j < p; ++j) out(i, j) = rows[i][j];
    }
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += out(i, j);
        mean /= static_cast<double>(n);
        bool constant = true;
        for (std::size_t i = 0; i < n; ++i) {
            out(i, j) -= mean;
            constant = constant && out(i, j) == 0.0;
        }
        if (constant) {
            throw SingularCovariance(std::string("cca: constant column ") +
                                     std::to_string(j) + " in view " + view);
        }
    }
    return out;
}

Mat covariance(const Mat& a, const Mat& b) {
    Mat out = multiply(transpose(a), b);
    for (double& v : out.a) v /= static_cast<double>(a.rows - 1);
    return out;
}

}  // namespace

std::vector<double> cca(const TwoViewSample& sample) {
    if (sample.x.empty() || sample.y.empty() || sample.x.size() != sample.y.size()) {
        throw DomainError("cca: views must be nonempty and row-aligned");
    }
    const std::size_t n = sample.x.size();
    const std::size_t p = sample.x.front().size();
    const std::size_t q = sample.y.front().size();
    if (p == 0 || q == 0 || n <= std::max(p, q)) {
        throw DomainError("cca: need more samples than the wider view");
    }
    Mat xc = centered(sample.x, "x");
    Mat yc = centered(sample.y, "y");
    Mat cxx = covariance(xc, xc);
    Mat cyy = covariance(yc, yc);
    Mat cxy = covariance(xc, yc);
    for (std::size_t i = 0; i < p; ++i) cxx(i, i) += kRidge;
    for (std::size_t i = 0; i < q; ++i) cyy(i, i) += kRidge;

    const Mat whitened = multiply(multiply(inverse_sqrt(cxx), cxy), inverse_sqrt(cyy));

    // Singular values via the Gram matrix of the narrow side.
    const bool tall = whitened.rows >= whitened.cols;
    const Mat gram = tall ? multiply(transpose(whitened), whitened)
                          : multiply(whitened, transpose(whitened));
    std::vector<double> values;
    Mat vectors;
    jacobi_eigen(gram, values, vectors);

    std::vector<double> correlations;
    correlations.reserve(values.size());
    for (double v : values) {
        correlations.push_back(std::sqrt(std::clamp(v, 0.0, 1.0)));
    }
    std::sort(correlations.begin(), correlations.end(), std::greater<>());
    return correlations;
}

AttributionResult kl_attribution(std::span<const AttributionProblem> problems,
                                 const AttributionConfig& cfg) {
    if (problems.empty()) {
        throw DomainError("kl_attribution: need at least one problem");
    }
    const std::size_t k = problems.front().features.empty()
                              ? 0
                              : problems.front().features.front().size();
    if (k == 0) {
        throw DomainError("kl_attribution: feature dimension must be positive");
    }
    for (const auto& prob : problems) {
        if (prob.alpha.size() != prob.features.size() || prob.alpha.empty()) {
            throw DomainError("kl_attribution: alpha and feature rows must align");
        }
        double sum = 0.0;
        for (double a : prob.alpha) {
            if (!(a >= 0.0)) throw DomainError("kl_attribution: alpha must be nonnegative");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw DomainError("kl_attribution: alpha must sum to 1");
        }
        for (const auto& row : prob.features) {
            if (row.size() != k) {
                throw DomainError("kl_attribution: inconsistent feature dimension");
            }
            for (double f : row) {
                if (f != 0.0 && f != 1.0) {
                    throw DomainError("kl_attribution: features must be binary");
                }
            }
        }
    }

    // KL up to the constant entropy term plus the L2 penalty; the constant
    // is added back when reporting so mean_kl is a true KL.
    auto cross_entropy = [&](const std::vector<double>& c) {
        double total = 0.0;
        for (const auto& prob : problems) {
            const std::size_t len = prob.alpha.size();
            std::vector<double> z(len, 0.0);
            for (std::size_t t = 0; t < len; ++t) {
                for (std::size_t f = 0; f < k; ++f) z[t] += prob.features[t][f] * c[f];
            }
            const double hi = *std::max_element(z.begin(), z.end());
            double lse = 0.0;
            for (double v : z) lse += std::exp(v - hi);
            lse = hi + std::log(lse);
            for (std::size_t t = 0; t < len; ++t) {
                if (prob.alpha[t] > 0.0) total -= prob.alpha[t] * (z[t] - lse);
            }
        }
        double penalty = 0.0;
        for (double v : c) penalty += v * v;
        return total + cfg.l2_penalty * penalty;
    };

    auto gradient = [&](const std::vector<double>& c) {
        std::vector<double> g(k, 0.0);
        for (const auto& prob : problems) {
            const std::size_t len = prob.alpha.size();
            std::vector<double> z(len, 0.0);
            for (std::size_t t = 0; t < len; ++t) {
                for (std::size_t f = 0; f < k; ++f) z[t] += prob.features[t][f] * c[f];
            }
            const double hi = *std::max_element(z.begin(), z.end());
            double lse = 0.0;
            for (double v : z) lse += std::exp(v - hi);
            for (std::size_t t = 0; t < len; ++t) {
                const double q = std::exp(z[t] - hi) / lse;
                const double resid = q - prob.alpha[t];
                for (std::size_t f = 0; f < k; ++f) g[f] += prob.features[t][f] * resid;
            }
        }
        for (std::size_t f = 0; f < k; ++f) g[f] += 2.0 * cfg.l2_penalty * c[f];
        return g;
    };

    std::vector<double> c(k, 0.0);
    double fc = cross_entropy(c);
    AttributionResult result;
    result.objective_trace.push_back(fc);

    double step = cfg.step_size;
    int iterations = 0;
    bool converged = false;
    while (iterations < cfg.max_iters && !converged) {
        ++iterations;
        const auto g = gradient(c);
        double gnorm = 0.0;
        for (double v : g) gnorm += v * v;
        gnorm = std::sqrt(gnorm);
        if (gnorm <= cfg.gradient_tolerance) {
            converged = true;
            break;
        }
        bool accepted = false;
        double s = step;
        std::vector<double> trial(k);
        for (int h = 0; h <= 60; ++h) {
            for (std::size_t f = 0; f < k; ++f) trial[f] = c[f] - s * g[f];
            const double ft = cross_entropy(trial);
            if (ft < fc) {
                const double rel = (fc - ft) / std::max(1.0, std::abs(fc));
                c = trial;
                fc = ft;
                result.objective_trace.push_back(fc);
                step = std::min(s * 2.0, 1e6);
                converged = rel < cfg.tolerance;
                accepted = true;
                break;
            }
            s /= 2.0;
        }
        if (!accepted) converged = true;
    }

    // Entropy constant turns the minimized cross-entropy back into KL.
    double entropy = 0.0;
    for (const auto& prob : problems) {
        for (double a : prob.alpha) {
            if (a > 0.0) entropy -= a * std::log(a);
        }
    }
    double penalty = 0.0;
    for (double v : c) penalty += v * v;
    const double total_kl = fc - cfg.l2_penalty * penalty - entropy;

    const auto g = gradient(c);
    double gnorm = 0.0;
    for (double v : g) gnorm += v * v;

    result.coefficients = std::move(c);
    result.mean_kl = std::max(total_kl, 0.0) / static_cast<double>(problems.size());
    result.iterations = iterations;
    result.converged = converged;
    result.final_gradient_norm = std::sqrt(gnorm);
    return result;
}

CoordinateAgreement coordinate_agreement(std::span<const RelationCoordinates> gold,
                                         std::span<const RelationCoordinates> pred) {
    if (gold.size() != pred.size() || gold.size() < 2) {
        throw DomainError("coordinate_agreement: need aligned lists of length >= 2");
    }
    std::array<std::vector<double>, 4> g, p;
    for (const auto& r : gold) {
        const auto v = r.values();
        for (int d = 0; d < 4; ++d) g[d].push_back(v[d]);
    }
    for (const auto& r : pred) {
        const auto v = r.values();
        for (int d = 0; d < 4; ++d) p[d].push_back(v[d]);
    }
    return {spearman(g[0], p[0]), spearman(g[1], p[1]),
            spearman(g[2], p[2]), spearman(g[3], p[3])};
}

}  // namespace reltime
