// Command-line front end for the LBP skin-texture classification pipeline:
// synthetic corpus generation, feature extraction, training, prediction,
// cross validation and holdout evaluation.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringworm/dataset.hpp"
#include "ringworm/ensemble.hpp"
#include "ringworm/eval.hpp"
#include "ringworm/features.hpp"
#include "ringworm/json_io.hpp"
#include "ringworm/lbp.hpp"
#include "ringworm/pgm.hpp"
#include "ringworm/synth.hpp"

namespace fs = std::filesystem;
using namespace ringworm;

namespace {

// Exit codes are a scripting contract:
//   0 success, 1 usage error, 2 data/parse error, 3 numeric/training failure.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct LbpFlags {
    int P = 8;
    double R = 1.0;
    std::string sampling = "grid-snap";
    std::string grid = "4x4";

    LbpParams params() const {
        LbpParams p;
        p.P = P;
        p.R = R;
        p.variant = LbpVariant::riu2;
        if (sampling == "grid-snap") p.sampling = LbpSampling::grid_snap;
        else if (sampling == "bilinear") p.sampling = LbpSampling::bilinear;
        else throw UsageError("--sampling must be grid-snap or bilinear");
        p.validate();
        return p;
    }

    RegionGrid region_grid() const {
        const auto x = grid.find('x');
        if (x == std::string::npos || x == 0 || x + 1 >= grid.size())
            throw UsageError("--grid must look like ROWSxCOLS, e.g. 4x4");
        RegionGrid g;
        try {
            g.rows = std::stoi(grid.substr(0, x));
            g.cols = std::stoi(grid.substr(x + 1));
        } catch (...) {
            throw UsageError("--grid must look like ROWSxCOLS, e.g. 4x4");
        }
        if (g.rows < 1 || g.cols < 1) throw UsageError("--grid dimensions must be >= 1");
        return g;
    }
};

struct TrainFlags {
    std::string kernel = "rbf";
    double gamma = 0.5;
    double C = 1.0;
    int degree = 3;
    int hidden = 20;
    double eta = 0.8;
    double alpha = 0.7;
    int epochs = 2000;

    MlpTrainConfig mlp_config(std::uint64_t seed) const {
        MlpTrainConfig cfg;
        cfg.eta = eta;
        cfg.alpha = alpha;
        cfg.hidden = hidden;
        cfg.max_epochs = epochs;
        cfg.seed = seed;
        return cfg;
    }

    SvmTrainConfig svm_config() const {
        SvmTrainConfig cfg;
        if (kernel == "rbf") cfg.kernel.kind = KernelKind::rbf;
        else if (kernel == "poly") cfg.kernel.kind = KernelKind::polynomial;
        else if (kernel == "linear") cfg.kernel.kind = KernelKind::linear;
        else throw UsageError("--kernel must be rbf, poly or linear");
        cfg.kernel.gamma = gamma;
        cfg.kernel.degree = degree;
        cfg.C = C;
        return cfg;
    }
};

void add_lbp_flags(CLI::App* cmd, LbpFlags& f) {
    cmd->add_option("--P", f.P, "circle sample count (angular resolution)")->capture_default_str();
    cmd->add_option("--R", f.R, "circle radius in pixels (spatial resolution)")->capture_default_str();
    cmd->add_option("--sampling", f.sampling, "neighbor sampling: grid-snap or bilinear")
        ->capture_default_str();
    cmd->add_option("--grid", f.grid, "region grid as ROWSxCOLS")->capture_default_str();
}

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
    cmd->add_option("--kernel", f.kernel, "SVM kernel: rbf, poly or linear")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "RBF gamma")->capture_default_str();
    cmd->add_option("--C", f.C, "SVM soft-margin penalty")->capture_default_str();
    cmd->add_option("--degree", f.degree, "polynomial kernel degree")->capture_default_str();
    cmd->add_option("--hidden", f.hidden, "MLP hidden layer size")->capture_default_str();
    cmd->add_option("--eta", f.eta, "MLP learning rate")->capture_default_str();
    cmd->add_option("--alpha", f.alpha, "MLP momentum term")->capture_default_str();
    cmd->add_option("--epochs", f.epochs, "MLP training epoch cap")->capture_default_str();
}

std::string image_name(const char* prefix, int index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03d.pgm", prefix, index);
    return buf;
}

int run_synth(const SynthConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("synth: cannot create directory '" + out_dir + "': " + ec.message());

    std::ofstream manifest(fs::path(out_dir) / "manifest.csv");
    if (!manifest) throw DataError("synth: cannot write manifest in '" + out_dir + "'");
    for (int i = 0; i < cfg.per_class; ++i) {
        const std::string name = image_name("ring", i);
        save_pgm((fs::path(out_dir) / name).string(), synth_image(cfg, kPositive, i));
        manifest << name << ",1\n";
    }
    for (int i = 0; i < cfg.per_class; ++i) {
        const std::string name = image_name("normal", i);
        save_pgm((fs::path(out_dir) / name).string(), synth_image(cfg, kNegative, i));
        manifest << name << ",0\n";
    }
    manifest.close();
    if (!manifest) throw DataError("synth: manifest write failed in '" + out_dir + "'");
    std::cout << "wrote " << 2 * cfg.per_class << " images and manifest.csv to " << out_dir << "\n";
    return 0;
}

int run_extract(const std::string& manifest_path, const LbpFlags& flags, const std::string& out,
                bool header) {
    const auto entries = read_manifest(manifest_path);
    if (entries.empty()) throw DataError("extract: empty manifest '" + manifest_path + "'");
    const LbpParams params = flags.params();
    const RegionGrid grid = flags.region_grid();
    const fs::path base = fs::path(manifest_path).parent_path();

    std::vector<FeatureVector> rows;
    std::size_t failures = 0;
    for (const auto& e : entries) {
        fs::path p(e.path);
        if (p.is_relative()) p = base / p;
        try {
            FeatureVector fv = extract_features(load_pgm(p.string()), params, grid);
            fv.label = e.label;
            rows.push_back(std::move(fv));
        } catch (const std::exception& ex) {
            std::cerr << "error: " << p.string() << ": " << ex.what() << "\n";
            ++failures;
        }
    }
    if (failures > 0)
        throw DataError("extract: " + std::to_string(failures) + " of " +
                        std::to_string(entries.size()) + " images failed");
    write_features_csv(out, rows, header);
    std::cout << "wrote " << rows.size() << " rows x " << (rows.front().values.size() + 1)
              << " columns to " << out << "\n";
    return 0;
}

int run_split(const std::string& features, double fraction, std::uint64_t seed,
              const std::string& train_out, const std::string& test_out) {
    const Dataset data = read_features_csv(features);
    const auto [train, test] = train_test_split(data, fraction, seed);
    write_features_csv(train_out, train.samples);
    write_features_csv(test_out, test.samples);
    std::cout << "split " << data.size() << " rows into " << train.size() << " train + "
              << test.size() << " test\n";
    return 0;
}

int run_train(const std::string& features, const std::string& model_kind, const TrainFlags& flags,
              std::uint64_t seed, const std::string& out) {
    const Dataset data = read_features_csv(features);
    TrainedModel m;
    m.scaler = scaler_fit(data.samples);
    const auto scaled = scaler_apply_all(m.scaler, data.samples);
    if (model_kind == "gnb") {
        m.kind = ClassifierKind::gnb;
        m.gnb = gnb_train(scaled);
    } else if (model_kind == "mlp") {
        m.kind = ClassifierKind::mlp;
        m.mlp_config = flags.mlp_config(seed);
        m.mlp = mlp_train(scaled, m.mlp_config);
    } else if (model_kind == "svm") {
        m.kind = ClassifierKind::svm;
        m.svm_config = flags.svm_config();
        m.svm = svm_train(scaled, m.svm_config);
    } else {
        throw UsageError("--model must be gnb, mlp or svm");
    }
    save_model(out, m);
    std::cout << "trained " << model_kind << " on " << data.size() << " rows, saved to " << out << "\n";
    return 0;
}

bool looks_like_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("predict: cannot open '" + path + "'");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    return magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2');
}

int run_predict(const std::vector<std::string>& model_paths, const std::string& input,
                const LbpFlags& flags) {
    if (model_paths.size() != 1 && model_paths.size() != 3)
        throw UsageError("majority voting needs exactly 3 models (or give 1 for a single vote)");
    std::vector<TrainedModel> models;
    for (const auto& p : model_paths) models.push_back(load_model(p));

    FeatureVector fv;
    if (looks_like_pgm(input)) {
        fv = extract_features(load_pgm(input), flags.params(), flags.region_grid());
    } else {
        const Dataset rows = read_features_csv(input);
        if (rows.size() != 1)
            throw DataError("predict: '" + input + "' must contain exactly one feature row, has " +
                            std::to_string(rows.size()));
        fv = rows.samples.front();
    }
    for (const auto& m : models)
        if (m.dim() != fv.values.size())
            throw DataError("predict: input has " + std::to_string(fv.values.size()) +
                            " features, model expects " + std::to_string(m.dim()));

    if (models.size() == 1) {
        std::cout << "label=" << models.front().predict(fv) << "\n";
    } else {
        std::vector<int> votes;
        for (const auto& m : models) votes.push_back(m.predict(fv));
        std::cout << "votes=" << votes[0] << "," << votes[1] << "," << votes[2]
                  << " label=" << majority_vote(votes) << "\n";
    }
    return 0;
}

int run_cv_cmd(const std::string& features, int k, const std::string& model_kind,
               const TrainFlags& flags, std::uint64_t seed, bool no_stratify,
               const std::string& out) {
    const Dataset data = read_features_csv(features);
    std::vector<ClassifierKind> kinds;
    if (model_kind == "all")
        kinds = {ClassifierKind::gnb, ClassifierKind::mlp, ClassifierKind::svm};
    else if (model_kind == "gnb") kinds = {ClassifierKind::gnb};
    else if (model_kind == "mlp") kinds = {ClassifierKind::mlp};
    else if (model_kind == "svm") kinds = {ClassifierKind::svm};
    else throw UsageError("--model must be gnb, mlp, svm or all");

    std::vector<std::pair<std::string, CvReport>> table_rows;
    std::vector<std::pair<std::string, CvReport>> json_rows;
    for (ClassifierKind kind : kinds) {
        ClassifierSpec spec;
        spec.kind = kind;
        spec.mlp = flags.mlp_config(seed);
        spec.svm = flags.svm_config();
        CvReport rep = run_cv(data, k, spec, seed, !no_stratify);
        table_rows.emplace_back(classifier_display_name(kind), rep);
        json_rows.emplace_back(classifier_name(kind), std::move(rep));
    }
    std::cout << format_cv_table(table_rows);
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw DataError("cv: cannot open '" + out + "' for writing");
        os << cv_report_json(json_rows, seed).dump(2) << "\n";
    }
    return 0;
}

int run_eval_cmd(const std::string& train_path, const std::string& test_path,
                 const TrainFlags& flags, std::uint64_t seed, const std::string& out) {
    const Dataset train = read_features_csv(train_path);
    const Dataset test = read_features_csv(test_path);
    HoldoutSpec spec;
    spec.mlp = flags.mlp_config(seed);
    spec.svm = flags.svm_config();
    const HoldoutReport rep = run_holdout(train, test, spec, seed);
    std::cout << format_holdout_table(rep);
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw DataError("eval: cannot open '" + out + "' for writing");
        os << holdout_report_json(rep, seed).dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LBP-based ringworm skin texture classification pipeline"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic two-class PGM corpus");
    SynthConfig synth_cfg;
    std::string synth_out;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--count", synth_cfg.per_class, "images per class")->capture_default_str();
    synth->add_option("--size", synth_cfg.size, "image side length")->capture_default_str();
    synth->add_option("--min-rings", synth_cfg.min_rings, "min rings per positive image")->capture_default_str();
    synth->add_option("--max-rings", synth_cfg.max_rings, "max rings per positive image")->capture_default_str();
    synth->add_option("--min-radius", synth_cfg.min_radius, "min ring outer radius")->capture_default_str();
    synth->add_option("--max-radius", synth_cfg.max_radius, "max ring outer radius")->capture_default_str();
    synth->add_option("--contrast", synth_cfg.contrast, "ring band contrast")->capture_default_str();
    synth->add_option("--noise", synth_cfg.noise, "speckle noise sigma")->capture_default_str();
    synth->add_option("--seed", synth_cfg.seed, "corpus seed")->capture_default_str();

    // extract
    auto* extract = app.add_subcommand("extract", "extract feature vectors from a manifest of PGMs");
    std::string extract_manifest, extract_out;
    LbpFlags extract_lbp;
    bool extract_header = false;
    extract->add_option("--manifest", extract_manifest, "CSV manifest of 'path,label' rows")->required();
    extract->add_option("--out", extract_out, "output feature CSV")->required();
    add_lbp_flags(extract, extract_lbp);
    extract->add_flag("--header", extract_header, "write a header row");

    // split
    auto* split = app.add_subcommand("split", "stratified train/test split of a feature CSV");
    std::string split_features, split_train_out, split_test_out;
    double split_fraction = 0.5;
    std::uint64_t split_seed = 0;
    split->add_option("--features", split_features, "feature CSV")->required();
    split->add_option("--fraction", split_fraction, "training fraction")->capture_default_str();
    split->add_option("--seed", split_seed, "shuffle seed")->capture_default_str();
    split->add_option("--train-out", split_train_out, "training CSV path")->required();
    split->add_option("--test-out", split_test_out, "test CSV path")->required();

    // train
    auto* train = app.add_subcommand("train", "train one classifier on a feature CSV");
    std::string train_features, train_model = "gnb", train_out;
    TrainFlags train_flags;
    std::uint64_t train_seed = 1;
    train->add_option("--features", train_features, "feature CSV")->required();
    train->add_option("--model", train_model, "classifier: gnb, mlp or svm")->capture_default_str();
    train->add_option("--out", train_out, "model JSON path")->required();
    train->add_option("--seed", train_seed, "training seed")->capture_default_str();
    add_train_flags(train, train_flags);

    // predict
    auto* predict = app.add_subcommand("predict", "classify a PGM image or a single feature row");
    std::vector<std::string> predict_models;
    std::string predict_input;
    LbpFlags predict_lbp;
    predict->add_option("--model", predict_models, "model JSON (one, or three for majority voting)")
        ->required();
    predict->add_option("input", predict_input, "PGM image or one-row feature CSV")->required();
    add_lbp_flags(predict, predict_lbp);

    // cv
    auto* cv = app.add_subcommand("cv", "k-fold cross validation on a feature CSV");
    std::string cv_features, cv_model = "all", cv_out;
    int cv_folds = 10;
    std::uint64_t cv_seed = 0;
    bool cv_no_stratify = false;
    TrainFlags cv_flags;
    cv->add_option("--features", cv_features, "feature CSV")->required();
    cv->add_option("--folds", cv_folds, "fold count")->capture_default_str();
    cv->add_option("--model", cv_model, "classifier: gnb, mlp, svm or all")->capture_default_str();
    cv->add_option("--seed", cv_seed, "fold shuffle / training seed")->capture_default_str();
    cv->add_option("--out", cv_out, "also write a JSON report here");
    cv->add_flag("--no-stratify", cv_no_stratify, "plain shuffling instead of stratified folds");
    add_train_flags(cv, cv_flags);

    // eval
    auto* eval = app.add_subcommand("eval", "train all three classifiers and report test accuracy");
    std::string eval_train, eval_test, eval_out;
    std::uint64_t eval_seed = 0;
    TrainFlags eval_flags;
    eval->add_option("--train", eval_train, "training feature CSV")->required();
    eval->add_option("--test", eval_test, "test feature CSV")->required();
    eval->add_option("--seed", eval_seed, "training seed")->capture_default_str();
    eval->add_option("--out", eval_out, "also write a JSON report here");
    add_train_flags(eval, eval_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (synth->parsed()) return run_synth(synth_cfg, synth_out);
        if (extract->parsed()) return run_extract(extract_manifest, extract_lbp, extract_out, extract_header);
        if (split->parsed()) return run_split(split_features, split_fraction, split_seed,
                                              split_train_out, split_test_out);
        if (train->parsed()) return run_train(train_features, train_model, train_flags, train_seed, train_out);
        if (predict->parsed()) return run_predict(predict_models, predict_input, predict_lbp);
        if (cv->parsed()) return run_cv_cmd(cv_features, cv_folds, cv_model, cv_flags, cv_seed,
                                            cv_no_stratify, cv_out);
        if (eval->parsed()) return run_eval_cmd(eval_train, eval_test, eval_flags, eval_seed, eval_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const TrainError& e) {
        std::cerr << "training error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
