#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("RINGWORM_CLI");
    REQUIRE(env != nullptr);
    return env;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("ringworm-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const TempDir& dir, const std::string& args) {
    const std::string out = dir / "_stdout.txt";
    const std::string err = dir / "_stderr.txt";
    const std::string cmd = cli_path() + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::size_t field_count(const std::string& line) {
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

// small corpus + feature csv shared by several cases
std::string make_corpus(const TempDir& dir, int count = 3) {
    const std::string corpus = dir / "corpus";
    const auto synth = run_cli(dir, "synth --out " + corpus + " --count " + std::to_string(count) +
                                        " --size 48 --min-radius 8 --max-radius 16 --seed 7");
    REQUIRE(synth.exit_code == 0);
    return corpus;
}

std::string make_features(const TempDir& dir, const std::string& corpus) {
    const std::string csv = dir / "features.csv";
    const auto extract =
        run_cli(dir, "extract --manifest " + corpus + "/manifest.csv --out " + csv);
    REQUIRE(extract.exit_code == 0);
    return csv;
}

} // namespace

TEST_CASE("synth and extract produce a deterministic corpus", "[cli]") {
    TempDir dir("synthextract");
    const std::string corpus = make_corpus(dir);
    CHECK(fs::exists(fs::path(corpus) / "manifest.csv"));
    std::size_t pgm_count = 0;
    for (const auto& e : fs::directory_iterator(corpus))
        pgm_count += e.path().extension() == ".pgm";
    CHECK(pgm_count == 6);

    const std::string csv = make_features(dir, corpus);
    const auto rows = lines_of(slurp(csv));
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) CHECK(field_count(row) == 161);

    const auto again = run_cli(dir, "extract --manifest " + corpus + "/manifest.csv --out " +
                                        (dir / "features2.csv"));
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(dir / "features2.csv") == slurp(csv));

    // --header flag prepends a single header row
    const auto with_header = run_cli(dir, "extract --manifest " + corpus + "/manifest.csv --out " +
                                              (dir / "features3.csv") + " --header");
    REQUIRE(with_header.exit_code == 0);
    const auto hrows = lines_of(slurp(dir / "features3.csv"));
    REQUIRE(hrows.size() == 7);
    CHECK(hrows[0].substr(0, 3) == "f0,");
}

TEST_CASE("extract reports bad inputs", "[cli]") {
    TempDir dir("extractfail");
    std::ofstream(dir / "empty.csv").close();
    const auto empty = run_cli(dir, "extract --manifest " + (dir / "empty.csv") + " --out " +
                                        (dir / "x.csv"));
    CHECK(empty.exit_code == 2);
    CHECK(empty.err.find("empty manifest") != std::string::npos);

    std::ofstream(dir / "missing.csv") << "no_such_image.pgm,1\n";
    const auto missing = run_cli(dir, "extract --manifest " + (dir / "missing.csv") + " --out " +
                                          (dir / "y.csv"));
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("no_such_image.pgm") != std::string::npos);
    CHECK(!fs::exists(dir / "y.csv"));
}

TEST_CASE("train and predict round trip", "[cli]") {
    TempDir dir("trainpredict");
    const std::string corpus = make_corpus(dir);
    const std::string csv = make_features(dir, corpus);

    const std::string model = dir / "gnb.json";
    const auto train = run_cli(dir, "train --features " + csv + " --model gnb --out " + model);
    REQUIRE(train.exit_code == 0);
    REQUIRE(fs::exists(model));

    const std::string image = corpus + "/ring_000.pgm";
    const auto one = run_cli(dir, "predict --model " + model + " " + image);
    REQUIRE(one.exit_code == 0);
    CHECK((one.out == "label=1\n" || one.out == "label=0\n"));
    const auto repeat = run_cli(dir, "predict --model " + model + " " + image);
    CHECK(repeat.out == one.out);

    const auto two = run_cli(dir, "predict --model " + model + " --model " + model + " " + image);
    CHECK(two.exit_code == 1);
    CHECK(two.err.find("exactly 3") != std::string::npos);

    const auto three = run_cli(dir, "predict --model " + model + " --model " + model + " --model " +
                                        model + " " + image);
    REQUIRE(three.exit_code == 0);
    CHECK(three.out.find("votes=") == 0);
    CHECK(three.out.find(" label=") != std::string::npos);

    const auto lost = run_cli(dir, "predict --model " + (dir / "nope.json") + " " + image);
    CHECK(lost.exit_code == 2);
    CHECK(lost.err.find("nope.json") != std::string::npos);

    // a one-row feature CSV is an accepted input too
    std::ofstream(dir / "row.csv") << lines_of(slurp(csv)).front() << "\n";
    const auto from_row = run_cli(dir, "predict --model " + model + " " + (dir / "row.csv"));
    REQUIRE(from_row.exit_code == 0);
    CHECK(from_row.out == one.out); // same image, same verdict

    const auto multi_row = run_cli(dir, "predict --model " + model + " " + csv);
    CHECK(multi_row.exit_code == 2);
}

TEST_CASE("split, cv and eval reports", "[cli]") {
    TempDir dir("harness");
    const std::string corpus = make_corpus(dir);
    const std::string csv = make_features(dir, corpus);

    const auto split = run_cli(dir, "split --features " + csv + " --fraction 0.5 --seed 3 --train-out " +
                                        (dir / "train.csv") + " --test-out " + (dir / "test.csv"));
    REQUIRE(split.exit_code == 0);
    CHECK(lines_of(slurp(dir / "train.csv")).size() == 4); // round(1.5)=2 per class
    CHECK(lines_of(slurp(dir / "test.csv")).size() == 2);

    const auto cv = run_cli(dir, "cv --features " + csv + " --folds 2 --model gnb --seed 1 --out " +
                                     (dir / "cv.json"));
    REQUIRE(cv.exit_code == 0);
    CHECK(cv.out.find("Fold 2") != std::string::npos);
    CHECK(cv.out.find("Mean") != std::string::npos);
    const auto cv_json = nlohmann::json::parse(slurp(dir / "cv.json"));
    CHECK(cv_json["k"] == 2);
    CHECK(cv_json["classifiers"]["gnb"]["folds"].size() == 2);

    const auto bad_k = run_cli(dir, "cv --features " + csv + " --folds 1 --model gnb");
    CHECK(bad_k.exit_code == 1);

    // the kernel flags reach the SVM trainer
    const auto poly = run_cli(dir, "train --features " + csv +
                                       " --model svm --kernel poly --degree 2 --out " +
                                       (dir / "svm_poly.json"));
    REQUIRE(poly.exit_code == 0);
    const auto pj = nlohmann::json::parse(slurp(dir / "svm_poly.json"));
    CHECK(pj["kind"] == "svm");
    CHECK(pj["svm"]["kernel"]["kind"] == "poly");
    CHECK(pj["svm"]["kernel"]["degree"] == 2);

    const auto eval = run_cli(dir, "eval --train " + (dir / "train.csv") + " --test " +
                                       (dir / "test.csv") + " --seed 2 --epochs 200 --out " +
                                       (dir / "eval.json"));
    REQUIRE(eval.exit_code == 0);
    CHECK(eval.out.find("Success rate") != std::string::npos);
    const auto ev = nlohmann::json::parse(slurp(dir / "eval.json"));
    CHECK(ev["accuracy"].contains("gnb"));
    CHECK(ev["accuracy"].contains("mlp"));
    CHECK(ev["accuracy"].contains("svm"));
    CHECK(ev["accuracy"].contains("majority_vote"));
    CHECK(ev["test_size"] == 2);
}
