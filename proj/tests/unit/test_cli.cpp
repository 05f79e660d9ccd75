#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ghabuse/cli/app.hpp"
#include "ghabuse/cli/run_config.hpp"
#include "ghabuse/error.hpp"

using namespace ghabuse;
using namespace ghabuse::cli;

namespace {

const std::filesystem::path kCorpus = std::filesystem::path(GHABUSE_DATA_DIR) / "fixture_corpus";
const std::filesystem::path kIngest = std::filesystem::path(GHABUSE_TEST_DATA) / "ingest";

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> artifacts() {
    return {"--references", (kCorpus / "popular_references.jsonl").string(), "--background",
            (kCorpus / "background_readmes.jsonl").string(), "--spam-model", (kCorpus / "spam_model.json").string()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config text: JSON and key = value forms agree") {
    const auto a = parse_config_text(R"({"thresholds": {"x1": 4, "theta_k": 0.2}, "format": "csv", "seed": 9})");
    const auto b = parse_config_text("# comment\nformat = csv\nseed = 9\n\n[thresholds]\nx1 = 4\ntheta_k = 0.2\n");
    CHECK(a == b);
    const auto c = run_config_from_json(a, "");
    CHECK(c.thresholds.x1 == 4);
    CHECK(c.thresholds.theta_k == 0.2);
    CHECK(c.format == eval::ReportFormat::csv);
    CHECK(c.seed == 9);
    CHECK(run_config_from_json(parse_config_text("references = refs.jsonl"), "/base").references ==
          std::filesystem::path("/base/refs.jsonl"));
}

TEST_CASE("config rejects unknown and malformed entries") {
    CHECK_THROWS_AS(run_config_from_json(parse_config_text("colour = red"), ""), SchemaError);
    CHECK_THROWS_AS(run_config_from_json(parse_config_text("[thresholds]\nx9 = 1"), ""), SchemaError);
    CHECK_THROWS_AS(run_config_from_json(parse_config_text("[client]\nproxy = x"), ""), SchemaError);
    CHECK_THROWS_AS(parse_config_text("x1 4"), SchemaError);
    CHECK_THROWS_AS(parse_config_text("a = 1\na = 2"), SchemaError);
    CHECK_THROWS_AS(parse_config_text("{\"a\": "), SchemaError);
    CHECK_THROWS_AS(run_config_from_json(parse_config_text("[thresholds]\ntheta_k = 3"), ""), InvalidInput);
    CHECK_THROWS_AS(run_config_from_json(parse_config_text("format = yaml"), ""), InvalidInput);
}

TEST_CASE("detector lists") {
    CHECK(parse_detector_list("fake_stats, fake_stars,fake_stats") ==
          std::vector<Detector>{Detector::fake_stars, Detector::fake_stats});
    CHECK_THROWS_AS(parse_detector_list("fake_stars,nope"), InvalidInput);
    CHECK_THROWS_AS(parse_detector_list(" , "), InvalidInput);
}

TEST_CASE("scan exit codes and stable output") {
    auto clean = invoke([] {
        std::vector<std::string> a{"scan", (kCorpus / "snapshots/automatic_updates-003.json").string()};
        for (auto& x : artifacts()) a.push_back(x);
        return a;
    }());
    CHECK(clean.code == kExitClean);
    CHECK(clean.out.find("\"flagged\":true") == std::string::npos);
    CHECK(clean.err.empty());

    std::vector<std::string> fake{"scan", (kCorpus / "snapshots/fake_stars-002.json").string()};
    for (int i = 1; i <= 12; ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshots/fake_stars-002.ctx%02d.json", i);
        fake.push_back((kCorpus / name).string());
    }
    fake.insert(fake.end(), {"--detectors", "fake_stars"});
    const auto first = invoke(fake);
    CHECK(first.code == kExitFlagged);
    CHECK(count_lines(first.out) == 1);
    CHECK(first.out.find("\"clause\":\"flagged_fraction\",\"observed\":1.0") != std::string::npos);
    CHECK(invoke(fake).out == first.out);
}

TEST_CASE("scan formats and --out") {
    const auto snap = (kCorpus / "snapshots/fake_stats-001.json").string();
    const auto csv = invoke({"scan", snap, "--format", "csv"});
    CHECK(csv.out.rfind("detector,subject,flagged,indeterminate,evidence\r\n", 0) == 0);
    const auto md = invoke({"scan", snap, "--format", "markdown"});
    CHECK(md.out.rfind("| detector | subject |", 0) == 0);
    const auto path = std::filesystem::temp_directory_path() / "ghabuse-test-cli-out.jsonl";
    std::filesystem::remove(path);
    const auto to_file = invoke({"scan", snap, "--out", path.string()});
    CHECK(to_file.out.empty());
    CHECK(slurp(path) == invoke({"scan", snap}).out);
}

TEST_CASE("implicitly selected detectors without artifacts are skipped with a note") {
    const auto snap = (kCorpus / "snapshots/automatic_updates-003.json").string();
    const auto r = invoke({"scan", snap});
    CHECK(r.code == kExitClean);
    CHECK(r.err.find("typo_squatting skipped") != std::string::npos);
    const auto explicit_sel = invoke({"scan", snap, "--detectors", "issue_spam"});
    CHECK(explicit_sel.code == kExitError);
    CHECK(count_lines(explicit_sel.err) == 1);
}

TEST_CASE("errors are one line on stderr with exit 1") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"scan", "/nonexistent/snap.json"},
             {"scan", (kCorpus / "manifest.jsonl").string()},
             {"scan", "x.json", "--detectors", "nope"},
             {"scan", "x.json", "--format", "xml"},
             {"scan", "x.json", "--config", "/nonexistent.toml"},
             {"frobnicate"},
             {},
             {"fetch", "org", "a/b", "--replay", (kIngest / "repo_basic.json").string()},
         }) {
        const auto r = invoke(args);
        CAPTURE(r.err);
        CHECK(r.code == kExitError);
        CHECK(r.out.empty());
        CHECK(count_lines(r.err) == 1);
        CHECK(r.err.rfind("ghabuse: error: ", 0) == 0);
    }
}

TEST_CASE("eval on the shipped corpus reports eight rows") {
    const auto r = invoke({"eval", (kCorpus / "manifest.jsonl").string()});
    CHECK(r.code == kExitClean);
    CHECK(count_lines(r.out) == 8);
    const auto csv = invoke({"eval", (kCorpus / "manifest.jsonl").string(), "--format", "csv", "--detectors",
                             "fake_stars,issue_spam"});
    CHECK(count_lines(csv.out) == 3);
}

TEST_CASE("fetch replays a transcript into the golden snapshot") {
    const auto r = invoke({"fetch", "repo", "acme/widget", "--replay", (kIngest / "repo_basic.json").string(), "--now",
                           "2024-03-09T16:00:00Z"});
    CHECK(r.code == kExitClean);
    CHECK(r.out == slurp(kIngest / "repo_basic.golden.json"));
    const auto missing = invoke({"fetch", "repo", "acme/missing", "--replay", (kIngest / "repo_missing.json").string()});
    CHECK(missing.code == kExitError);
}

TEST_CASE("gen-fixtures and train-spam are seeded") {
    const auto dir = std::filesystem::temp_directory_path() / "ghabuse-test-cli-gen";
    std::filesystem::remove_all(dir);
    const auto g = invoke({"gen-fixtures", dir.string(), "--positives", "2", "--negatives", "2", "--seed", "4"});
    CHECK(g.code == kExitClean);
    CHECK(g.out.rfind("{\"instances\":32,\"positives\":16,\"negatives\":16,", 0) == 0);
    const auto model = (dir / "m.json").string();
    const auto t1 = invoke({"train-spam", (dir / "spam_train.jsonl").string(), "--model-out", model, "--epochs", "20",
                            "--seed", "3"});
    CHECK(t1.code == kExitClean);
    const auto first = slurp(model);
    invoke({"train-spam", (dir / "spam_train.jsonl").string(), "--model-out", model, "--epochs", "20", "--seed", "3"});
    CHECK(slurp(model) == first);
    CHECK(invoke({"gen-fixtures", dir.string(), "--positives", "2"}).code == kExitError);
}
