#include <filesystem>
#include <fstream>

#include "di/common.hpp"
#include "di/hash.hpp"
#include "di/pipeline.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = DI_TEST_DATA_DIR;

json base_config(const std::string& out_dir) {
  json cfg;
  cfg["seed"] = 11;
  cfg["out_dir"] = out_dir;
  cfg["corpus"] = {{"train", kData + "/toy_labeled.jsonl"},
                   {"labeled", kData + "/toy_labeled.jsonl"},
                   {"min_count", 1}};
  cfg["intents"] = {{"use_naive_bayes", true}, {"nb_smoothing", 1.0}, {"k_lda", 0},
                    {"top_words", 10},         {"delta", 0.6}};
  cfg["embedding"] = {{"dim", 12}, {"epochs", 8}, {"window", 4}, {"negatives", 4}};
  cfg["transfer"] = {{"enabled", true}, {"prior_strength", 2.0}, {"smoothing", 1.0}};
  cfg["fit"] = {{"tau", 0.5}, {"alpha", 1.0}, {"alpha_prime", 0.2},
                {"sweeps", 40}, {"burn_in", 20}};
  cfg["parse"] = {{"input", kData + "/toy_eval.jsonl"}, {"decode_sweeps", 30}};
  cfg["eval"] = {{"gold", kData + "/toy_eval.jsonl"}, {"mode", "direct"}};
  return cfg;
}

std::string write_config(const json& cfg, const std::string& name) {
  const std::string path = (fs::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << cfg.dump(2);
  return path;
}

}  // namespace

TEST_CASE("pipeline: toy config runs end to end and matches the committed snapshot") {
  const std::string out_dir = (fs::temp_directory_path() / "di_pipe_run").string();
  fs::remove_all(out_dir);
  const std::string cfg_path = write_config(base_config(out_dir), "di_pipe_cfg.json");

  const json report = di::run_pipeline(cfg_path);
  REQUIRE(report.contains("eval"));
  CHECK(report["intent_count"].get<int>() == 6);
  CHECK(fs::exists(fs::path(out_dir) / "intents.json"));
  CHECK(fs::exists(fs::path(out_dir) / "emb.bin"));
  CHECK(fs::exists(fs::path(out_dir) / "model.bin"));
  CHECK(fs::exists(fs::path(out_dir) / "parsed.jsonl"));
  CHECK(fs::exists(fs::path(out_dir) / "report.json"));
  CHECK(fs::exists(fs::path(out_dir) / "manifest.json"));

  std::ifstream in(kData + "/toy_report_expected.json");
  REQUIRE(in.good());
  json expected;
  in >> expected;
  CHECK(report["eval"]["accuracy"].get<double>() ==
        doctest::Approx(expected["accuracy"].get<double>()).epsilon(1e-12));
  CHECK(report["eval"]["confusion"] == expected["confusion"]);

  // the same config again gives an identical report, from cache
  const json again = di::run_pipeline(cfg_path);
  CHECK(again["eval"] == report["eval"]);
  CHECK(again["stages"] == report["stages"]);
  fs::remove_all(out_dir);
}

TEST_CASE("pipeline: invalid tau fails before doing any work") {
  const std::string out_dir = (fs::temp_directory_path() / "di_pipe_badtau").string();
  fs::remove_all(out_dir);
  json cfg = base_config(out_dir);
  cfg["fit"]["tau"] = 1.5;
  const std::string cfg_path = write_config(cfg, "di_pipe_badtau.json");
  CHECK_THROWS_AS(di::run_pipeline(cfg_path), di::ValidationError);
  CHECK_FALSE(fs::exists(out_dir));
}

TEST_CASE("pipeline: missing input files are reported up front") {
  const std::string out_dir = (fs::temp_directory_path() / "di_pipe_missing").string();
  json cfg = base_config(out_dir);
  cfg["corpus"]["train"] = kData + "/no_such_file.jsonl";
  const std::string cfg_path = write_config(cfg, "di_pipe_missing.json");
  CHECK_THROWS_WITH_AS(di::run_pipeline(cfg_path), doctest::Contains("no_such_file"),
                       di::ValidationError);
  CHECK_FALSE(fs::exists(out_dir));
}
