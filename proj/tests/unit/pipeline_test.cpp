#include <cstdlib>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "fixture.hpp"
#include "simaudit/config.hpp"
#include "simaudit/pipeline.hpp"
#include "simaudit/report_io.hpp"
#include "simaudit/version.hpp"
#include "support.hpp"

using namespace simaudit;
using testing_support::TempDir;
using nlohmann::json;

namespace {

// Small fixture keeps each test well under a second.
fixture::Options small() {
  fixture::Options o;
  o.terms = 60;
  o.topics = 8;
  o.piles_a = 10;
  o.piles_b = 7;
  o.performances = 20;
  o.dim = 24;
  o.baseline_trials = 200;
  return o;
}

ExperimentConfig small_config(const TempDir& dir) {
  fixture::write(dir.path(), small());
  auto cfg = load_config(dir / "config.ini");
  cfg.k_max = 20;
  cfg.mds_max_iter = 100;
  cfg.kmeans.restarts = 2;
  return cfg;
}

int run(const std::string& args) {
  const int status = std::system((std::string(AUDIT_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Pipeline, EveryOutputCarriesProvenance) {
  TempDir dir;
  const auto cfg = small_config(dir);
  const auto hash = config_hash(cfg);
  const auto files = run_report_all(cfg);
  EXPECT_GE(files.size(), 15u);
  for (const auto& f : files) {
    const auto text = read_file(cfg.output_dir / f);
    EXPECT_NE(text.find(hash), std::string::npos) << f;
    EXPECT_NE(text.find(kVersion), std::string::npos) << f;
    EXPECT_NE(text.find("tie_seed"), std::string::npos) << f;
    EXPECT_EQ(text.find(dir.path().string()), std::string::npos) << f << " leaks an absolute path";
  }
}

TEST(Pipeline, RunsAreByteIdentical) {
  TempDir dir;
  auto cfg = small_config(dir);
  cfg.output_dir = dir / "one";
  const auto files = run_report_all(cfg);
  cfg.output_dir = dir / "two";
  run_report_all(cfg);
  for (const auto& f : files) EXPECT_EQ(read_file(dir / "one" / f), read_file(dir / "two" / f)) << f;
}

TEST(Pipeline, NoModelsIsAConfigError) {
  TempDir dir;
  auto cfg = small_config(dir);
  cfg.models.clear();
  EXPECT_ERRC(load_experiment(cfg), Errc::ConfigError);
}

TEST(Pipeline, MissingInputNamesThePath) {
  TempDir dir;
  auto cfg = small_config(dir);
  cfg.perf_table = dir / "nope.csv";
  try {
    load_experiment(cfg);
    ADD_FAILURE() << "expected ConfigError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
    EXPECT_NE(std::string(e.what()).find("nope.csv"), std::string::npos);
  }
}

TEST(Pipeline, MainRanksFiveModels) {
  TempDir dir;
  const auto cfg = small_config(dir);
  const auto data = load_experiment(cfg);
  run_main_experiment(cfg, data);
  const auto summary = json::parse(read_file(cfg.output_dir / "main/summary.json"));
  EXPECT_EQ(summary["models"].size(), 5u);
  EXPECT_EQ(summary["ranking_by_mean_apk"].size(), 5u);
  // The nearly random model ranks last.
  EXPECT_EQ(summary["ranking_by_mean_apk"].back(), "epsilon");
  const auto csv = split_lines(read_file(cfg.output_dir / "main/apk_curves.csv"));
  std::size_t header = 0;
  while (csv[header].rfind("#", 0) == 0) ++header;
  EXPECT_EQ(csv[header], "k,alpha,beta,gamma,delta,epsilon,A vs B,baseline_mean,baseline_hi,baseline_lo");
}

TEST(Pipeline, HubnessRowsPerModelAndK) {
  TempDir dir;
  auto cfg = small_config(dir);
  cfg.hub_models = {"alpha", "beta", "gamma", "delta"};
  run_hubness_experiment(cfg, load_experiment(cfg));
  const auto report = json::parse(read_file(cfg.output_dir / "hubness/report.json"));
  ASSERT_EQ(report["rows"].size(), 15u);  // 3 ks x 4 models + 3 random-baseline rows
  EXPECT_EQ(report["rows"][12]["model"], "RB");
  EXPECT_EQ(report["rows"][0]["skewness"].size(), 2u);
}

TEST(Pipeline, IdenticalContextFilesGiveFlatRatio) {
  TempDir dir;
  auto cfg = small_config(dir);
  cfg.context_models = {cfg.models[0]};
  run_context_experiment(cfg, load_experiment(cfg));
  const auto lines = split_lines(read_file(cfg.output_dir / "context/relative_change.csv"));
  std::size_t rows = 0;
  for (const auto& l : lines) {
    if (l.empty() || l[0] == '#' || l[0] == 'k') continue;
    EXPECT_EQ(l.substr(l.find(',') + 1), "1") << l;
    ++rows;
  }
  EXPECT_EQ(rows, cfg.k_max);
}

TEST(Pipeline, ClusteringHasTwoDirectionsPerGroup) {
  TempDir dir;
  const auto cfg = small_config(dir);
  run_clustering_experiment(cfg, load_experiment(cfg));
  const auto doc = json::parse(read_file(cfg.output_dir / "cluster/overlap.json"));
  ASSERT_EQ(doc["rows"].size(), 7u);  // five models, GT, RB
  EXPECT_EQ(doc["rows"][5]["model"], "GT");
  for (const auto& row : doc["rows"])
    for (const char* g : {"overlap_v_A", "overlap_v_B"}) {
      EXPECT_TRUE(row[g].contains("piles_in_kmeans"));
      EXPECT_TRUE(row[g].contains("kmeans_in_piles"));
    }
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  fixture::write(dir.path(), small());
  EXPECT_EQ(run("--version"), 0);
  EXPECT_EQ(run("report all --config " + (dir / "missing.ini").string()), 2);
  EXPECT_EQ(run("eval --gt"), 2);
  write_file_atomic(dir / "dup.jsonl", "{\"label\":\"a\",\"vector\":[1,0]}\n{\"label\":\"a\",\"vector\":[0,1]}\n");
  EXPECT_EQ(run("hubness --emb " + (dir / "dup.jsonl").string() + " --out " + (dir / "h.json").string()), 3);
  write_file_atomic(dir / "zero.jsonl", "{\"label\":\"a\",\"vector\":[0,0]}\n");
  EXPECT_EQ(run("hubness --emb " + (dir / "zero.jsonl").string() + " --out " + (dir / "h.json").string()), 4);
}

TEST(Cli, SubcommandsProduceFiles) {
  TempDir dir;
  fixture::write(dir.path(), small());
  const auto p = [&](const std::string& rel) { return (dir / rel).string(); };
  ASSERT_EQ(run("gt build --piles " + p("piles_a.json") + " --piles " + p("piles_b.json") + " --perf-table " +
                p("perf_terms.csv") + " --out " + p("gt.csv")),
            0);
  EXPECT_EQ(run("eval --gt " + p("gt.csv") + " --emb " + p("models/alpha.jsonl") + " --kmax 10 --trials 50 --out " +
                p("eval.csv")),
            0);
  EXPECT_EQ(split_lines(read_file(dir / "eval.csv"))[4], "k,value,baseline_mean,baseline_hi,baseline_lo");
  EXPECT_EQ(run("hubness --emb " + p("models/alpha.jsonl") + " --out " + p("hub.json")), 0);
  EXPECT_EQ(run("cluster --emb " + p("models/alpha.jsonl") + " --k 8 --restarts 2 --piles " + p("piles_a.json") +
                " --piles " + p("piles_b.json") + " --out " + p("cl.json")),
            0);
  EXPECT_EQ(run("mds --matrix " + p("gt.csv") + " --piles " + p("piles_a.json") + " --piles " + p("piles_b.json") +
                " --hulls --svg " + p("mds.svg") + " --csv " + p("mds.csv")),
            0);
  EXPECT_EQ(run("cross-modal --audio " + p("audio.jsonl") + " --text " + p("models/alpha.jsonl") + " --perf-table " +
                p("perf_terms.csv") + " --trials 50 --out " + p("cm.csv")),
            0);
  EXPECT_EQ(run("context --gt " + p("gt.csv") + " --plain " + p("models/alpha.jsonl") + " --context " +
                p("context/alpha.jsonl") + " --out " + p("ctx.csv")),
            0);
  for (const char* f : {"gt.csv", "eval.csv", "hub.json", "cl.json", "mds.svg", "mds.csv", "cm.csv", "ctx.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
}
