#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ringworm/error.hpp"
#include "ringworm/features.hpp"

namespace ringworm {

inline double gaussian_pdf(double x, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_pdf: sigma must be > 0");
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

// Gaussian naive Bayes over per-class, per-feature normal densities.
// Index 0 holds the negative class, index 1 the positive class.
struct GnbModel {
    std::array<double, 2> priors{};
    std::array<std::vector<double>, 2> means;
    std::array<std::vector<double>, 2> sigmas;

    std::size_t dim() const { return means[0].size(); }
};

struct GnbPrediction {
    int label = kNegative;
    double posterior = 0.0;
};

// Sigma floor so constant features keep densities finite.
constexpr double kGnbSigmaFloor = 1e-6;

// Priors are class frequencies; mean and sigma are the maximum-likelihood
// (divide by n) estimates per class per feature.
inline GnbModel gnb_train(const std::vector<FeatureVector>& samples) {
    if (samples.empty()) throw TrainError("gnb_train: empty training set");
    const std::size_t dim = samples.front().values.size();
    std::array<long, 2> counts{0, 0};
    GnbModel model;
    for (int c = 0; c < 2; ++c) {
        model.means[c].assign(dim, 0.0);
        model.sigmas[c].assign(dim, 0.0);
    }
    for (const auto& s : samples) {
        if (s.label != kNegative && s.label != kPositive)
            throw TrainError("gnb_train: sample without a binary label");
        if (s.values.size() != dim)
            throw std::invalid_argument("gnb_train: inconsistent feature dimensions");
        ++counts[s.label];
        for (std::size_t i = 0; i < dim; ++i) model.means[s.label][i] += s.values[i];
    }
    if (counts[0] == 0 || counts[1] == 0)
        throw TrainError("gnb_train: a class has zero samples");
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < dim; ++i) model.means[c][i] /= static_cast<double>(counts[c]);
    for (const auto& s : samples)
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = s.values[i] - model.means[s.label][i];
            model.sigmas[s.label][i] += d * d;
        }
    for (int c = 0; c < 2; ++c) {
        model.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(samples.size());
        for (std::size_t i = 0; i < dim; ++i)
            model.sigmas[c][i] = std::max(std::sqrt(model.sigmas[c][i] / static_cast<double>(counts[c])),
                                          kGnbSigmaFloor);
    }
    return model;
}

// log p(C) + sum_i log f(v_i; mu, sigma). The product form of the classifier
// underflows at 160 features, the log form is decision-identical.
inline double gnb_log_score(const GnbModel& model, const std::vector<double>& values, int cls) {
    if (values.size() != model.dim())
        throw std::invalid_argument("gnb_log_score: dimension mismatch");
    double score = std::log(model.priors[cls]);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double sigma = model.sigmas[cls][i];
        const double z = (values[i] - model.means[cls][i]) / sigma;
        score += -0.5 * z * z - std::log(std::sqrt(2.0 * std::numbers::pi) * sigma);
    }
    return score;
}

// Ties go to the negative class.
inline GnbPrediction gnb_predict(const GnbModel& model, const FeatureVector& v) {
    const double s_neg = gnb_log_score(model, v.values, kNegative);
    const double s_pos = gnb_log_score(model, v.values, kPositive);
    GnbPrediction p;
    p.label = s_pos > s_neg ? kPositive : kNegative;
    // normalized posterior of the predicted class via log-sum-exp
    const double m = std::max(s_neg, s_pos);
    const double z = std::exp(s_neg - m) + std::exp(s_pos - m);
    p.posterior = std::exp((p.label == kPositive ? s_pos : s_neg) - m) / z;
    return p;
}

} // namespace ringworm
