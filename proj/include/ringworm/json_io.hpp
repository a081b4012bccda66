#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ringworm/error.hpp"
#include "ringworm/eval.hpp"

namespace ringworm {

// A trained classifier bundled with the scaler fitted on its training data,
// ready to classify raw (unscaled) feature vectors.
struct TrainedModel {
    ClassifierKind kind = ClassifierKind::gnb;
    MinMaxScaler scaler;
    GnbModel gnb;
    MlpModel mlp;
    SvmModel svm;
    MlpTrainConfig mlp_config;
    SvmTrainConfig svm_config;

    std::size_t dim() const { return scaler.mins.size(); }

    int predict(const FeatureVector& raw) const {
        const FeatureVector scaled = scaler_apply(scaler, raw);
        switch (kind) {
            case ClassifierKind::gnb: return gnb_predict(gnb, scaled).label;
            case ClassifierKind::mlp: return mlp_predict(mlp, scaled);
            case ClassifierKind::svm: return svm_predict(svm, scaled);
        }
        return kNegative;
    }
};

namespace detail {

inline nlohmann::json scaler_to_json(const MinMaxScaler& s) {
    return {{"target", s.target == ScaleTarget::unit ? "unit" : "symmetric"},
            {"min", s.mins},
            {"max", s.maxs}};
}

inline MinMaxScaler scaler_from_json(const nlohmann::json& j) {
    MinMaxScaler s;
    s.target = j.at("target").get<std::string>() == "unit" ? ScaleTarget::unit : ScaleTarget::symmetric;
    s.mins = j.at("min").get<std::vector<double>>();
    s.maxs = j.at("max").get<std::vector<double>>();
    return s;
}

inline const char* kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::rbf: return "rbf";
        case KernelKind::polynomial: return "poly";
        case KernelKind::linear: return "linear";
    }
    return "?";
}

inline KernelKind kernel_from_name(const std::string& name) {
    if (name == "rbf") return KernelKind::rbf;
    if (name == "poly") return KernelKind::polynomial;
    if (name == "linear") return KernelKind::linear;
    throw DataError("model: unknown kernel '" + name + "'");
}

} // namespace detail

inline nlohmann::json model_to_json(const TrainedModel& m) {
    nlohmann::json j;
    j["format"] = "ringworm-model";
    j["kind"] = classifier_name(m.kind);
    j["dim"] = m.dim();
    j["scaler"] = detail::scaler_to_json(m.scaler);
    switch (m.kind) {
        case ClassifierKind::gnb:
            j["gnb"] = {{"priors", m.gnb.priors},
                        {"means", m.gnb.means},
                        {"sigmas", m.gnb.sigmas}};
            break;
        case ClassifierKind::mlp:
            j["mlp"] = {{"n_in", m.mlp.n_in},
                        {"n_hidden", m.mlp.n_hidden},
                        {"n_out", m.mlp.n_out},
                        {"w_hidden", m.mlp.w_hidden},
                        {"b_hidden", m.mlp.b_hidden},
                        {"w_out", m.mlp.w_out},
                        {"b_out", m.mlp.b_out},
                        {"config",
                         {{"eta", m.mlp_config.eta},
                          {"alpha", m.mlp_config.alpha},
                          {"hidden", m.mlp_config.hidden},
                          {"max_epochs", m.mlp_config.max_epochs},
                          {"target_mse", m.mlp_config.target_mse},
                          {"seed", m.mlp_config.seed}}}};
            break;
        case ClassifierKind::svm:
            j["svm"] = {{"b", m.svm.b},
                        {"C", m.svm.C},
                        {"kernel",
                         {{"kind", detail::kernel_name(m.svm.kernel.kind)},
                          {"gamma", m.svm.kernel.gamma},
                          {"degree", m.svm.kernel.degree}}},
                        {"support_vectors", m.svm.support_vectors},
                        {"coeffs", m.svm.coeffs},
                        {"config", {{"tol", m.svm_config.tol}}}};
            break;
    }
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "ringworm-model")
        throw DataError("model: missing 'ringworm-model' format tag");
    TrainedModel m;
    m.scaler = detail::scaler_from_json(j.at("scaler"));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gnb") {
        m.kind = ClassifierKind::gnb;
        const auto& g = j.at("gnb");
        m.gnb.priors = g.at("priors").get<std::array<double, 2>>();
        m.gnb.means = g.at("means").get<std::array<std::vector<double>, 2>>();
        m.gnb.sigmas = g.at("sigmas").get<std::array<std::vector<double>, 2>>();
    } else if (kind == "mlp") {
        m.kind = ClassifierKind::mlp;
        const auto& n = j.at("mlp");
        m.mlp.n_in = n.at("n_in").get<int>();
        m.mlp.n_hidden = n.at("n_hidden").get<int>();
        m.mlp.n_out = n.at("n_out").get<int>();
        m.mlp.w_hidden = n.at("w_hidden").get<std::vector<double>>();
        m.mlp.b_hidden = n.at("b_hidden").get<std::vector<double>>();
        m.mlp.w_out = n.at("w_out").get<std::vector<double>>();
        m.mlp.b_out = n.at("b_out").get<std::vector<double>>();
        const auto& c = n.at("config");
        m.mlp_config.eta = c.at("eta").get<double>();
        m.mlp_config.alpha = c.at("alpha").get<double>();
        m.mlp_config.hidden = c.at("hidden").get<int>();
        m.mlp_config.max_epochs = c.at("max_epochs").get<int>();
        m.mlp_config.target_mse = c.at("target_mse").get<double>();
        m.mlp_config.seed = c.at("seed").get<std::uint64_t>();
    } else if (kind == "svm") {
        m.kind = ClassifierKind::svm;
        const auto& s = j.at("svm");
        m.svm.b = s.at("b").get<double>();
        m.svm.C = s.at("C").get<double>();
        m.svm.kernel.kind = detail::kernel_from_name(s.at("kernel").at("kind").get<std::string>());
        m.svm.kernel.gamma = s.at("kernel").at("gamma").get<double>();
        m.svm.kernel.degree = s.at("kernel").at("degree").get<int>();
        m.svm.support_vectors = s.at("support_vectors").get<std::vector<std::vector<double>>>();
        m.svm.coeffs = s.at("coeffs").get<std::vector<double>>();
        m.svm_config.kernel = m.svm.kernel;
        m.svm_config.C = m.svm.C;
        m.svm_config.tol = s.at("config").at("tol").get<double>();
    } else {
        throw DataError("model: unknown kind '" + kind + "'");
    }
    return m;
}

inline void save_model(const std::string& path, const TrainedModel& m) {
    std::ofstream out(path);
    if (!out) throw DataError("model: cannot open '" + path + "' for writing");
    out << model_to_json(m).dump(2) << "\n";
    if (!out) throw DataError("model: write failed for '" + path + "'");
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("model: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model: '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model: '" + path + "' has unexpected structure: " + e.what());
    }
}

inline nlohmann::json cv_report_json(const std::vector<std::pair<std::string, CvReport>>& reports,
                                     std::uint64_t seed) {
    nlohmann::json j;
    j["report"] = "cross-validation";
    j["seed"] = seed;
    if (!reports.empty()) j["k"] = reports.front().second.k;
    for (const auto& [name, rep] : reports) {
        nlohmann::json r;
        r["folds"] = rep.fold_accuracies();
        r["mean"] = rep.mean_pct;
        r["std"] = rep.std_pct;
        nlohmann::json seeds = nlohmann::json::array();
        for (const auto& f : rep.folds) seeds.push_back(f.train_seed);
        r["fold_seeds"] = seeds;
        j["classifiers"][name] = r;
    }
    return j;
}

inline nlohmann::json holdout_report_json(const HoldoutReport& rep, std::uint64_t seed) {
    nlohmann::json j;
    j["report"] = "holdout";
    j["seed"] = seed;
    j["test_size"] = rep.test_size();
    j["accuracy"] = {{"gnb", rep.accuracy_pct[0]},
                     {"mlp", rep.accuracy_pct[1]},
                     {"svm", rep.accuracy_pct[2]},
                     {"majority_vote", rep.vote_accuracy_pct}};
    static const char* kSubsetNames[8] = {"none",    "gnb",     "mlp",     "gnb+mlp",
                                          "svm",     "gnb+svm", "mlp+svm", "gnb+mlp+svm"};
    for (int mask = 0; mask < 8; ++mask) j["agreement"][kSubsetNames[mask]] = rep.agreement[mask];
    const char* names[3] = {"gnb", "mlp", "svm"};
    for (int c = 0; c < 3; ++c)
        j["confusion"][names[c]] = {{"tp", rep.confusion[c].tp},
                                    {"fp", rep.confusion[c].fp},
                                    {"tn", rep.confusion[c].tn},
                                    {"fn", rep.confusion[c].fn}};
    return j;
}

} // namespace ringworm
