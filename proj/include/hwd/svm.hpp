#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "hwd/centrist.hpp"
#include "hwd/errors.hpp"
#include "hwd/rng.hpp"

namespace hwd {

using FeatureMatrix = std::vector<std::vector<double>>;

struct TrainConfig {
    double c = 1.0;                     // soft-margin penalty
    int rounds = 3;                     // bootstrap iterations
    int negatives_per_round = 200;      // windows sampled / hard examples kept per round
    double kkt_tol = 1e-3;              // solver termination tolerance
    long max_solver_iters = 2000000;    // coordinate / pair update cap
    std::uint64_t seed = 0x7a11b07;

    void validate() const {
        if (!(c > 0)) throw ValidationError("c must be > 0");
        if (rounds < 1) throw ValidationError("rounds must be >= 1");
        if (negatives_per_round < 1) throw ValidationError("negatives_per_round must be >= 1");
        if (!(kkt_tol > 0)) throw ValidationError("kkt_tol must be > 0");
        if (max_solver_iters < 1) throw ValidationError("max_solver_iters must be >= 1");
    }
};

/// First cascade stage: w . f + bias compared against stage_threshold.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double stage_threshold = 0.0;  // theta1

    double score(const std::vector<double>& f) const {
        if (f.size() != weights.size()) throw DimensionError("linear score: feature length mismatch");
        double s = bias;
        for (std::size_t i = 0; i < f.size(); ++i) s += weights[i] * f[i];
        return s;
    }

    double score(const CentristFeature& f) const {
        if (f.size() != weights.size()) throw DimensionError("linear score: feature length mismatch");
        double s = bias;
        for (std::size_t i = 0; i < f.size(); ++i) s += weights[i] * f[i];
        return s;
    }
};

/// Piecewise tabulation of the HIK decision function for integer-valued
/// features: rows[d][v] = sum_j alpha_j * min(v, sv_j[d]), so a prediction is
/// one lookup per dimension plus the bias. Values above the tabulated range
/// clamp to the last entry (min saturates there).
struct HikTable {
    std::vector<std::vector<double>> rows;

    bool empty() const { return rows.empty(); }

    double lookup(const CentristFeature& f) const {
        if (f.size() != rows.size()) throw DimensionError("hik table: feature length mismatch");
        double s = 0.0;
        for (std::size_t d = 0; d < rows.size(); ++d) {
            const auto& r = rows[d];
            s += r[std::min<std::size_t>(f[d], r.size() - 1)];
        }
        return s;
    }
};

/// Histogram intersection kernel: K(x, y) = sum_i min(x_i, y_i).
inline double hik_kernel(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("hik_kernel: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::min(a[i], b[i]);
    return s;
}

/// Second cascade stage: kernel expansion over support vectors with
/// label-folded coefficients.
struct HikModel {
    FeatureMatrix support_vectors;
    std::vector<double> alphas;  // y_j * alpha_j
    double bias = 0.0;
    double stage_threshold = 0.0;  // theta2

    double score_direct(const std::vector<double>& f) const {
        double s = bias;
        for (std::size_t j = 0; j < support_vectors.size(); ++j)
            s += alphas[j] * hik_kernel(f, support_vectors[j]);
        return s;
    }
};

/// Solver diagnostics for tests and training statistics.
struct SolverInfo {
    std::vector<double> alphas;  // one per training sample, sample order pos then neg
    double kkt_residual = 0.0;
    long iterations = 0;
    bool converged = false;
};

namespace detail {

inline void check_training_input(const FeatureMatrix& pos, const FeatureMatrix& neg,
                                 bool require_nonnegative) {
    if (pos.empty() || neg.empty()) throw ValidationError("training requires >= 1 sample per class");
    const std::size_t dim = pos.front().size();
    for (const auto* set : {&pos, &neg})
        for (const auto& f : *set) {
            if (f.size() != dim) throw DimensionError("training features must share one length");
            if (require_nonnegative)
                for (double v : f)
                    if (v < 0) throw ValidationError("HIK features must be non-negative");
        }
}

}  // namespace detail

/// Soft-margin linear SVM via dual coordinate descent. The bias is handled
/// as an augmented constant-1 feature. Terminates once a full sweep sees no
/// projected-gradient violation above kkt_tol, or at max_solver_iters
/// coordinate updates.
inline LinearModel train_linear(const FeatureMatrix& pos, const FeatureMatrix& neg,
                                const TrainConfig& cfg, SolverInfo* info = nullptr) {
    cfg.validate();
    detail::check_training_input(pos, neg, false);
    const std::size_t dim = pos.front().size();
    const std::size_t n = pos.size() + neg.size();

    std::vector<const std::vector<double>*> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < pos.size(); ++i) x[i] = &pos[i], y[i] = 1.0;
    for (std::size_t i = 0; i < neg.size(); ++i) x[pos.size() + i] = &neg[i], y[pos.size() + i] = -1.0;

    std::vector<double> qdiag(n);
    for (std::size_t i = 0; i < n; ++i) {
        double q = 1.0;  // augmented bias feature
        for (double v : *x[i]) q += v * v;
        qdiag[i] = q;
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(dim + 1, 0.0);  // w[dim] is the bias
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 rng(cfg.seed);

    const double c = cfg.c;
    long updates = 0;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;

    auto margin = [&](std::size_t i) {
        double s = w[dim];
        const std::vector<double>& f = *x[i];
        for (std::size_t d = 0; d < dim; ++d) s += w[d] * f[d];
        return s;
    };

    while (!converged && updates < cfg.max_solver_iters) {
        // seeded Fisher-Yates shuffle per sweep
        for (std::size_t i = n - 1; i > 0; --i)
            std::swap(order[i], order[rng.bounded(i + 1)]);

        bool changed = false;
        double max_violation = 0.0;
        for (std::size_t k = 0; k < n && updates < cfg.max_solver_iters; ++k) {
            const std::size_t i = order[k];
            const double g = y[i] * margin(i) - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0)
                pg = std::min(g, 0.0);
            else if (alpha[i] >= c)
                pg = std::max(g, 0.0);
            max_violation = std::max(max_violation, std::abs(pg));
            if (std::abs(pg) < 1e-14) continue;
            const double old = alpha[i];
            alpha[i] = std::clamp(old - g / qdiag[i], 0.0, c);
            const double delta = (alpha[i] - old) * y[i];
            if (delta == 0.0) continue;
            const std::vector<double>& f = *x[i];
            for (std::size_t d = 0; d < dim; ++d) w[d] += delta * f[d];
            w[dim] += delta;
            changed = true;
            ++updates;
        }
        residual = max_violation;
        if (!changed && max_violation <= cfg.kkt_tol) converged = true;
    }

    LinearModel model;
    model.weights.assign(w.begin(), w.begin() + dim);
    model.bias = w[dim];
    if (info) {
        info->alphas = alpha;
        info->kkt_residual = residual;
        info->iterations = updates;
        info->converged = converged;
    }
    return model;
}

/// Soft-margin kernel SVM with the histogram intersection kernel, solved by
/// maximal-violating-pair SMO on the full kernel matrix. Features must be
/// non-negative. Support vectors are the samples with alpha > 0.
inline HikModel train_hik(const FeatureMatrix& pos, const FeatureMatrix& neg,
                          const TrainConfig& cfg, SolverInfo* info = nullptr) {
    cfg.validate();
    detail::check_training_input(pos, neg, true);
    const std::size_t n = pos.size() + neg.size();

    std::vector<const std::vector<double>*> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < pos.size(); ++i) x[i] = &pos[i], y[i] = 1.0;
    for (std::size_t i = 0; i < neg.size(); ++i) x[pos.size() + i] = &neg[i], y[pos.size() + i] = -1.0;

    // full kernel matrix; training sets stay small enough for this
    std::vector<double> kmat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double k = hik_kernel(*x[i], *x[j]);
            kmat[i * n + j] = k;
            kmat[j * n + i] = k;
        }
    }
    auto kk = [&](std::size_t i, std::size_t j) { return kmat[i * n + j]; };

    const double c = cfg.c;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of the dual objective

    long iters = 0;
    double gap = std::numeric_limits<double>::infinity();
    double m_val = 0.0, big_m_val = 0.0;
    while (iters < cfg.max_solver_iters) {
        // maximal violating pair
        std::size_t best_i = n, best_j = n;
        m_val = -std::numeric_limits<double>::infinity();
        big_m_val = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            const bool in_up = (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0);
            const bool in_low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c);
            if (in_up && v > m_val) m_val = v, best_i = t;
            if (in_low && v < big_m_val) big_m_val = v, best_j = t;
        }
        gap = m_val - big_m_val;
        if (best_i == n || best_j == n || gap <= cfg.kkt_tol) break;

        const std::size_t i = best_i, j = best_j;
        // feasible direction: alpha_i += y_i * t, alpha_j -= y_j * t
        double t_hi = std::numeric_limits<double>::infinity();
        double t_lo = -std::numeric_limits<double>::infinity();
        auto bound = [&](double yy, double a, double& lo, double& hi) {
            // step of coordinate = yy * t, box [0, c]
            if (yy > 0) {
                lo = std::max(lo, -a);
                hi = std::min(hi, c - a);
            } else {
                lo = std::max(lo, a - c);
                hi = std::min(hi, a);
            }
        };
        bound(y[i], alpha[i], t_lo, t_hi);
        bound(-y[j], alpha[j], t_lo, t_hi);
        const double eta = kk(i, i) + kk(j, j) - 2.0 * kk(i, j);
        double step = (eta > 1e-12) ? gap / eta : t_hi;
        step = std::clamp(step, t_lo, t_hi);
        if (step == 0.0) break;  // no feasible progress

        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;
        for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * step * (kk(t, i) - kk(t, j));
        ++iters;
    }
    const double bias = (m_val + big_m_val) / 2.0;

    HikModel model;
    model.bias = std::isfinite(bias) ? bias : 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 1e-12 * c) {
            model.support_vectors.push_back(*x[t]);
            model.alphas.push_back(y[t] * alpha[t]);
        }
    }
    if (info) {
        info->alphas = alpha;
        info->kkt_residual = std::max(0.0, gap) / 2.0;
        info->iterations = iters;
        info->converged = gap <= cfg.kkt_tol;
    }
    return model;
}

/// Tabulates the HIK decision function of a model whose support vectors are
/// integer-valued; see HikTable. Computed per dimension from the
/// value-sorted support vector list with prefix sums.
inline HikTable hik_fast_table(const HikModel& model) {
    HikTable table;
    if (model.support_vectors.empty()) return table;
    const std::size_t dim = model.support_vectors.front().size();
    table.rows.resize(dim);
    std::vector<std::pair<long, double>> entries;  // (value, alpha)
    for (std::size_t d = 0; d < dim; ++d) {
        entries.clear();
        long vmax = 0;
        for (std::size_t j = 0; j < model.support_vectors.size(); ++j) {
            const double v = model.support_vectors[j][d];
            if (v < 0 || v != std::floor(v) || v > 65535)
                throw ValidationError("hik_fast_table: support vectors must hold integers in [0, 65535]");
            entries.emplace_back(static_cast<long>(v), model.alphas[j]);
            vmax = std::max(vmax, static_cast<long>(v));
        }
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        auto& row = table.rows[d];
        row.assign(static_cast<std::size_t>(vmax) + 1, 0.0);
        // T[v] = sum_{sv <= v} a*sv + v * sum_{sv > v} a
        double below = 0.0;  // sum of a*sv for sv <= v
        double above = 0.0;  // sum of a for sv > v
        for (const auto& [val, a] : entries) above += a;
        std::size_t cursor = 0;
        for (long v = 0; v <= vmax; ++v) {
            while (cursor < entries.size() && entries[cursor].first <= v) {
                below += entries[cursor].second * entries[cursor].first;
                above -= entries[cursor].second;
                ++cursor;
            }
            row[static_cast<std::size_t>(v)] = below + static_cast<double>(v) * above;
        }
    }
    return table;
}

}  // namespace hwd
