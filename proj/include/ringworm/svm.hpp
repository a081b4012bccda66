#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringworm/error.hpp"
#include "ringworm/features.hpp"

namespace ringworm {

enum class KernelKind { rbf, polynomial, linear };

struct Kernel {
    KernelKind kind = KernelKind::rbf;
    double gamma = 0.5; // rbf
    int degree = 3;     // polynomial

    void validate() const {
        if (kind == KernelKind::rbf && !(gamma > 0.0))
            throw std::invalid_argument("Kernel: gamma must be > 0");
        if (kind == KernelKind::polynomial && degree < 1)
            throw std::invalid_argument("Kernel: degree must be >= 1");
    }
};

inline double kernel_eval(const Kernel& k, const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
    switch (k.kind) {
        case KernelKind::rbf: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                d2 += d * d;
            }
            return std::exp(-k.gamma * d2);
        }
        case KernelKind::polynomial: {
            double dot = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
            return std::pow(dot + 1.0, k.degree);
        }
        case KernelKind::linear: {
            double dot = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
            return dot;
        }
    }
    return 0.0;
}

struct SvmTrainConfig {
    Kernel kernel;
    double C = 1.0;
    double tol = 1e-3;
    long max_pair_updates = 1'000'000;
};

// Raw solver output; alpha covers every training point, including the
// non-support ones, which the KKT and dual-objective checks need.
struct SmoResult {
    std::vector<double> alpha;
    double b = 0.0;
    double dual_objective = 0.0; // max-form: sum(alpha) - 1/2 alpha' Q alpha
    long pair_updates = 0;
};

// Sequential Minimal Optimization on the dual of the soft-margin problem.
// Working pair = maximal KKT violating pair (Keerthi selection); terminates
// when the violation gap drops to tol. y must be +/-1.
inline SmoResult smo_solve(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           const SvmTrainConfig& cfg) {
    cfg.kernel.validate();
    if (!(cfg.C > 0.0)) throw std::invalid_argument("smo_solve: C must be > 0");
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) throw std::invalid_argument("smo_solve: bad input sizes");
    bool has_pos = false, has_neg = false;
    for (int yi : y) {
        if (yi == 1) has_pos = true;
        else if (yi == -1) has_neg = true;
        else throw std::invalid_argument("smo_solve: labels must be +/-1");
    }
    if (!has_pos || !has_neg) throw TrainError("smo_solve: both classes required");

    std::vector<double> K(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            K[i * n + j] = K[j * n + i] = kernel_eval(cfg.kernel, x[i], x[j]);

    const double C = cfg.C;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> f(n, 0.0); // f_i = sum_j alpha_j y_j K_ij (no bias)

    // i may move up in I_up = {y=+1, a<C} u {y=-1, a>0};
    // j may move down in I_low = {y=+1, a>0} u {y=-1, a<C}.
    auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
    auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

    SmoResult res;
    double m_up = 0.0, m_low = 0.0;
    while (true) {
        std::ptrdiff_t i = -1, j = -1;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = y[t] - f[t];
            if (in_up(t) && v > m_up) { m_up = v; i = static_cast<std::ptrdiff_t>(t); }
            if (in_low(t) && v < m_low) { m_low = v; j = static_cast<std::ptrdiff_t>(t); }
        }
        if (i < 0 || j < 0 || m_up - m_low <= cfg.tol) break;
        if (res.pair_updates >= cfg.max_pair_updates)
            throw TrainError("smo_solve: no convergence within " +
                             std::to_string(cfg.max_pair_updates) + " pair updates");

        const std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
        const int s = y[ii] * y[jj];
        double L, H;
        if (s < 0) {
            L = std::max(0.0, alpha[jj] - alpha[ii]);
            H = std::min(C, C + alpha[jj] - alpha[ii]);
        } else {
            L = std::max(0.0, alpha[ii] + alpha[jj] - C);
            H = std::min(C, alpha[ii] + alpha[jj]);
        }

        const double quad = K[ii * n + ii] + K[jj * n + jj] - 2.0 * K[ii * n + jj];
        double aj_new;
        if (quad > 1e-12) {
            const double e_i = f[ii] - y[ii];
            const double e_j = f[jj] - y[jj];
            aj_new = std::clamp(alpha[jj] + y[jj] * (e_i - e_j) / quad, L, H);
        } else {
            // flat or degenerate direction: test both endpoints of the box
            const double g_i = y[ii] * f[ii] - 1.0;
            const double g_j = y[jj] * f[jj] - 1.0;
            auto min_obj_change = [&](double aj) {
                const double d = aj - alpha[jj];
                return d * (g_j - s * g_i) + 0.5 * quad * d * d;
            };
            aj_new = min_obj_change(L) < min_obj_change(H) ? L : H;
        }
        const double delta = aj_new - alpha[jj];
        if (std::abs(delta) < 1e-14) break; // numerical stall; the KKT gap is already tiny
        alpha[jj] = aj_new;
        alpha[ii] -= s * delta;
        const double step_i = -s * delta * y[ii];
        const double step_j = delta * y[jj];
        for (std::size_t t = 0; t < n; ++t)
            f[t] += step_i * K[ii * n + t] + step_j * K[jj * n + t];
        ++res.pair_updates;
    }

    res.alpha = alpha;
    if (std::isfinite(m_up) && std::isfinite(m_low)) {
        res.b = 0.5 * (m_up + m_low);
    } else {
        // one selection set went empty; fall back to the global midpoint
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t t = 0; t < n; ++t) {
            lo = std::min(lo, y[t] - f[t]);
            hi = std::max(hi, y[t] - f[t]);
        }
        res.b = 0.5 * (lo + hi);
    }
    res.dual_objective = 0.0;
    for (std::size_t t = 0; t < n; ++t)
        res.dual_objective += alpha[t] - 0.5 * alpha[t] * y[t] * f[t];
    return res;
}

struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coeffs; // alpha_i * y_i
    double b = 0.0;
    Kernel kernel;
    double C = 1.0;

    std::size_t dim() const { return support_vectors.empty() ? 0 : support_vectors[0].size(); }
};

// Labels {0,1} map to {-1,+1}; only vectors with alpha > 0 are retained.
inline SvmModel svm_train(const std::vector<FeatureVector>& samples, const SvmTrainConfig& cfg) {
    if (samples.empty()) throw TrainError("svm_train: empty training set");
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.label != kNegative && s.label != kPositive)
            throw TrainError("svm_train: sample without a binary label");
        x.push_back(s.values);
        y.push_back(s.label == kPositive ? 1 : -1);
    }
    const SmoResult res = smo_solve(x, y, cfg);

    SvmModel model;
    model.kernel = cfg.kernel;
    model.C = cfg.C;
    model.b = res.b;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (res.alpha[i] > 0.0) {
            model.support_vectors.push_back(x[i]);
            model.coeffs.push_back(res.alpha[i] * y[i]);
        }
    return model;
}

inline double svm_decision(const SvmModel& model, const std::vector<double>& v) {
    if (!model.support_vectors.empty() && v.size() != model.dim())
        throw std::invalid_argument("svm_decision: dimension mismatch");
    double d = model.b;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        d += model.coeffs[i] * kernel_eval(model.kernel, model.support_vectors[i], v);
    return d;
}

// decision > 0 is positive; exactly 0 falls to the negative class.
inline int svm_predict(const SvmModel& model, const FeatureVector& v) {
    return svm_decision(model, v.values) > 0.0 ? kPositive : kNegative;
}

} // namespace ringworm
