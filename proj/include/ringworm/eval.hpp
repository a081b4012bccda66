#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ringworm/dataset.hpp"
#include "ringworm/ensemble.hpp"
#include "ringworm/gnb.hpp"
#include "ringworm/mlp.hpp"
#include "ringworm/rng.hpp"
#include "ringworm/svm.hpp"

namespace ringworm {

// Stratified split: each class contributes round(fraction * class_count)
// samples to the training side, the rest to the test side.
inline std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double fraction,
                                                    std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("train_test_split: fraction must be in (0,1)");
    if (data.samples.empty()) throw std::invalid_argument("train_test_split: empty dataset");
    data.class_counts(); // validates labels

    RngEngine rng(seed);
    Dataset train, test;
    for (int cls : {kNegative, kPositive}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.samples.size(); ++i)
            if (data.samples[i].label == cls) idx.push_back(i);
        if (idx.empty()) continue;
        shuffle_in_place(idx, rng);
        const auto n_train = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(idx.size())));
        if (n_train == 0 || n_train == idx.size())
            throw std::invalid_argument("train_test_split: class " + std::to_string(cls) +
                                        " emptied on one side of the split");
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_train ? train : test).samples.push_back(data.samples[idx[i]]);
    }
    return {std::move(train), std::move(test)};
}

struct FoldSplit {
    int k = 0;
    std::vector<int> assignments; // per-sample fold index in [0,k)
};

// Per-class round robin after a seeded shuffle; the fold cursor continues
// across classes so overall fold sizes also differ by at most one.
inline FoldSplit stratified_kfold(const Dataset& data, int k, std::uint64_t seed,
                                  bool stratify = true) {
    const auto n = data.samples.size();
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("stratified_kfold: k exceeds sample count");

    RngEngine rng(seed);
    FoldSplit split;
    split.k = k;
    split.assignments.assign(n, 0);
    int cursor = 0;
    if (stratify) {
        data.class_counts(); // validates labels
        for (int cls : {kNegative, kPositive}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (data.samples[i].label == cls) idx.push_back(i);
            shuffle_in_place(idx, rng);
            for (std::size_t i : idx) split.assignments[i] = cursor++ % k;
        }
    } else {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        shuffle_in_place(idx, rng);
        for (std::size_t i : idx) split.assignments[i] = cursor++ % k;
    }
    return split;
}

inline double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth) {
    if (predictions.empty() || predictions.size() != truth.size())
        throw std::invalid_argument("accuracy: empty or mismatched label sequences");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) correct += predictions[i] == truth[i];
    return 100.0 * static_cast<double>(correct) / static_cast<double>(predictions.size());
}

enum class ClassifierKind { gnb, mlp, svm };

inline const char* classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::gnb: return "gnb";
        case ClassifierKind::mlp: return "mlp";
        case ClassifierKind::svm: return "svm";
    }
    return "?";
}

inline const char* classifier_display_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::gnb: return "Bayesian";
        case ClassifierKind::mlp: return "MLP";
        case ClassifierKind::svm: return "SVM";
    }
    return "?";
}

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::gnb;
    MlpTrainConfig mlp;
    SvmTrainConfig svm;
};

// Trained classifier state behind one predict surface; `seed` overrides the
// MLP config seed so harnesses control reproducibility per run.
struct TrainedClassifier {
    ClassifierKind kind = ClassifierKind::gnb;
    GnbModel gnb;
    MlpModel mlp;
    SvmModel svm;

    int predict(const FeatureVector& scaled) const {
        switch (kind) {
            case ClassifierKind::gnb: return gnb_predict(gnb, scaled).label;
            case ClassifierKind::mlp: return mlp_predict(mlp, scaled);
            case ClassifierKind::svm: return svm_predict(svm, scaled);
        }
        return kNegative;
    }
};

inline TrainedClassifier train_classifier(const std::vector<FeatureVector>& scaled_train,
                                          const ClassifierSpec& spec, std::uint64_t seed) {
    TrainedClassifier tc;
    tc.kind = spec.kind;
    switch (spec.kind) {
        case ClassifierKind::gnb:
            tc.gnb = gnb_train(scaled_train);
            break;
        case ClassifierKind::mlp: {
            MlpTrainConfig cfg = spec.mlp;
            cfg.seed = seed;
            tc.mlp = mlp_train(scaled_train, cfg);
            break;
        }
        case ClassifierKind::svm:
            tc.svm = svm_train(scaled_train, spec.svm);
            break;
    }
    return tc;
}

struct FoldResult {
    std::vector<std::size_t> test_indices; // into the source dataset
    std::vector<int> predicted;
    double accuracy_pct = 0.0;
    std::uint64_t train_seed = 0;
};

struct CvReport {
    int k = 0;
    std::vector<FoldResult> folds;
    double mean_pct = 0.0;
    double std_pct = 0.0; // population form (divide by k)

    std::vector<double> fold_accuracies() const {
        std::vector<double> a;
        a.reserve(folds.size());
        for (const auto& f : folds) a.push_back(f.accuracy_pct);
        return a;
    }
};

// k-fold cross validation. The scaler is fitted on each fold's training
// portion only; the held-out fold never leaks into it.
inline CvReport run_cv(const Dataset& data, int k, const ClassifierSpec& spec, std::uint64_t seed,
                       bool stratify = true) {
    const FoldSplit split = stratified_kfold(data, k, seed, stratify);
    CvReport report;
    report.k = k;
    for (int fold = 0; fold < k; ++fold) {
        FoldResult fr;
        fr.train_seed = seed + 1 + static_cast<std::uint64_t>(fold);
        std::vector<FeatureVector> train;
        std::vector<int> truth;
        for (std::size_t i = 0; i < data.samples.size(); ++i) {
            if (split.assignments[i] == fold) {
                fr.test_indices.push_back(i);
            } else {
                train.push_back(data.samples[i]);
            }
        }
        const MinMaxScaler scaler = scaler_fit(train);
        const TrainedClassifier tc = train_classifier(scaler_apply_all(scaler, train), spec, fr.train_seed);
        for (std::size_t i : fr.test_indices) {
            fr.predicted.push_back(tc.predict(scaler_apply(scaler, data.samples[i])));
            truth.push_back(data.samples[i].label);
        }
        fr.accuracy_pct = accuracy(fr.predicted, truth);
        report.folds.push_back(std::move(fr));
    }
    double sum = 0.0;
    for (const auto& f : report.folds) sum += f.accuracy_pct;
    report.mean_pct = sum / k;
    double var = 0.0;
    for (const auto& f : report.folds) {
        const double d = f.accuracy_pct - report.mean_pct;
        var += d * d;
    }
    report.std_pct = std::sqrt(var / k);
    return report;
}

struct ConfusionCounts {
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct HoldoutSpec {
    MlpTrainConfig mlp;
    SvmTrainConfig svm;
};

struct HoldoutReport {
    std::array<double, 3> accuracy_pct{}; // gnb, mlp, svm
    double vote_accuracy_pct = 0.0;
    // index = bitmask of which classifiers answered correctly
    // (bit 0 = gnb, bit 1 = mlp, bit 2 = svm)
    std::array<long, 8> agreement{};
    std::array<ConfusionCounts, 3> confusion{};
    std::vector<std::array<int, 3>> votes; // per test sample: gnb, mlp, svm
    std::vector<int> vote_labels;
    std::vector<int> truth;

    std::size_t test_size() const { return truth.size(); }
};

// Trains all three classifiers on the training set behind one shared scaler,
// evaluates them and their majority vote on the test set.
inline HoldoutReport run_holdout(const Dataset& train, const Dataset& test,
                                 const HoldoutSpec& spec, std::uint64_t seed) {
    if (test.samples.empty()) throw std::invalid_argument("run_holdout: empty test set");
    const MinMaxScaler scaler = scaler_fit(train.samples);
    const auto scaled_train = scaler_apply_all(scaler, train.samples);

    const std::array<ClassifierKind, 3> kinds{ClassifierKind::gnb, ClassifierKind::mlp,
                                              ClassifierKind::svm};
    std::array<TrainedClassifier, 3> models;
    for (std::size_t c = 0; c < kinds.size(); ++c) {
        ClassifierSpec cs;
        cs.kind = kinds[c];
        cs.mlp = spec.mlp;
        cs.svm = spec.svm;
        models[c] = train_classifier(scaled_train, cs, seed);
    }

    HoldoutReport report;
    std::array<std::vector<int>, 3> preds;
    for (const auto& sample : test.samples) {
        const FeatureVector scaled = scaler_apply(scaler, sample);
        std::array<int, 3> vote{};
        for (std::size_t c = 0; c < models.size(); ++c) {
            vote[c] = models[c].predict(scaled);
            preds[c].push_back(vote[c]);
        }
        report.votes.push_back(vote);
        report.vote_labels.push_back(majority_vote({vote[0], vote[1], vote[2]}));
        report.truth.push_back(sample.label);
    }

    for (std::size_t c = 0; c < models.size(); ++c)
        report.accuracy_pct[c] = accuracy(preds[c], report.truth);
    report.vote_accuracy_pct = accuracy(report.vote_labels, report.truth);

    for (std::size_t i = 0; i < report.truth.size(); ++i) {
        int mask = 0;
        for (std::size_t c = 0; c < models.size(); ++c) {
            const bool correct = preds[c][i] == report.truth[i];
            mask |= correct << c;
            auto& conf = report.confusion[c];
            if (preds[c][i] == kPositive)
                (report.truth[i] == kPositive ? conf.tp : conf.fp)++;
            else
                (report.truth[i] == kNegative ? conf.tn : conf.fn)++;
        }
        ++report.agreement[mask];
    }
    return report;
}

namespace detail {

inline std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", v);
    return buf;
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

} // namespace detail

// Fold-per-row table with one column per classifier, Mean and Standard
// deviation rows at the bottom.
inline std::string format_cv_table(const std::vector<std::pair<std::string, CvReport>>& reports) {
    if (reports.empty()) throw std::invalid_argument("format_cv_table: no reports");
    const std::size_t col = 14;
    std::string out = detail::pad("Fold", 22);
    for (const auto& [name, rep] : reports) out += detail::pad(name, col);
    out += "\n";
    const int k = reports.front().second.k;
    for (int f = 0; f < k; ++f) {
        out += detail::pad("Fold " + std::to_string(f + 1), 22);
        for (const auto& [name, rep] : reports)
            out += detail::pad(detail::pct(rep.folds[f].accuracy_pct), col);
        out += "\n";
    }
    out += detail::pad("Mean", 22);
    for (const auto& [name, rep] : reports) out += detail::pad(detail::pct(rep.mean_pct), col);
    out += "\n";
    out += detail::pad("Standard deviation", 22);
    for (const auto& [name, rep] : reports) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", rep.std_pct);
        out += detail::pad(buf, col);
    }
    out += "\n";
    return out;
}

// Success-rate row across the three classifiers and their majority vote,
// plus the agreement breakdown.
inline std::string format_holdout_table(const HoldoutReport& report) {
    const std::size_t col = 14;
    std::string out = detail::pad("", 14);
    for (ClassifierKind kind : {ClassifierKind::gnb, ClassifierKind::mlp, ClassifierKind::svm})
        out += detail::pad(classifier_display_name(kind), col);
    out += detail::pad("Majority vote", col);
    out += "\n";
    out += detail::pad("Success rate", 14);
    for (double a : report.accuracy_pct) out += detail::pad(detail::pct(a), col);
    out += detail::pad(detail::pct(report.vote_accuracy_pct), col);
    out += "\n\nCorrectly classified, by classifier subset (of " +
           std::to_string(report.test_size()) + " test samples):\n";
    static const char* kSubsetNames[8] = {"none",    "gnb",     "mlp",     "gnb+mlp",
                                          "svm",     "gnb+svm", "mlp+svm", "gnb+mlp+svm"};
    for (int mask = 0; mask < 8; ++mask)
        out += "  " + detail::pad(kSubsetNames[mask], 14) + std::to_string(report.agreement[mask]) + "\n";
    return out;
}

} // namespace ringworm
