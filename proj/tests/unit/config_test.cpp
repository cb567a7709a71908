#include <cstdlib>

#include "simaudit/config.hpp"
#include "simaudit/report_io.hpp"
#include "support.hpp"

using namespace simaudit;
using testing_support::TempDir;

namespace {

void touch(const std::filesystem::path& p) { write_file_atomic(p, "x\n"); }

}  // namespace

TEST(Config, ParsesSectionsAndResolvesPaths) {
  TempDir dir;
  touch(dir / "data/pa.json");
  touch(dir / "data/pb.json");
  touch(dir / "data/t.csv");
  touch(dir / "data/m.jsonl");
  write_file_atomic(dir / "c.ini",
                    "[data]\ndir = data\npiles = pa.json, pb.json\nperf_table = t.csv\ngt_weights = 2,1,1\n"
                    "[models]\nm = m.jsonl\n"
                    "[eval]\nk_max = 20\ntie_seed = 3\ntrust_window = 4,9\n"
                    "[hubness]\nks = 2, 5\nmethod = local-scaling\n"
                    "[cluster]\nk = 6\nseed = 9\n"
                    "[output]\ndir = results\n");
  const auto cfg = load_config(dir / "c.ini");
  ASSERT_EQ(cfg.piles.size(), 2u);
  EXPECT_EQ(cfg.piles[1], (dir.path() / "data/pb.json").lexically_normal());
  EXPECT_EQ(cfg.gt_weights, (std::vector<double>{2, 1, 1}));
  ASSERT_EQ(cfg.models.size(), 1u);
  EXPECT_EQ(cfg.models[0].name, "m");
  EXPECT_EQ(cfg.k_max, 20u);
  EXPECT_EQ(cfg.tie_seed, 3u);
  EXPECT_EQ(cfg.trust_lo, 4u);
  EXPECT_EQ(cfg.trust_hi, 9u);
  EXPECT_EQ(cfg.hub_ks, (std::vector<std::size_t>{2, 5}));
  EXPECT_EQ(cfg.hub_method, ReductionMethod::LocalScaling);
  EXPECT_EQ(cfg.kmeans.k, 6u);
  EXPECT_EQ(cfg.kmeans.seed, 9u);
  EXPECT_EQ(cfg.output_dir, dir.path() / "results");
  EXPECT_NO_THROW(check_inputs(cfg));
}

TEST(Config, DataDirFromEnvironment) {
  TempDir dir;
  touch(dir / "elsewhere/pa.json");
  write_file_atomic(dir / "c.ini", "[data]\npiles = pa.json\n");
  ::setenv(kDataDirEnv, (dir.path() / "elsewhere").c_str(), 1);
  const auto cfg = load_config(dir / "c.ini");
  ::unsetenv(kDataDirEnv);
  EXPECT_EQ(cfg.piles[0], dir.path() / "elsewhere/pa.json");
}

TEST(Config, Errors) {
  TempDir dir;
  EXPECT_ERRC(load_config(dir / "missing.ini"), Errc::ConfigError);
  write_file_atomic(dir / "bad.ini", "[eval]\nk_max = many\n");
  EXPECT_ERRC(load_config(dir / "bad.ini"), Errc::ConfigError);
  write_file_atomic(dir / "m.ini", "[hubness]\nmethod = magic\n");
  EXPECT_ERRC(load_config(dir / "m.ini"), Errc::ConfigError);
  write_file_atomic(dir / "w.ini", "[eval]\ntrust_window = 9,4\n");
  EXPECT_ERRC(load_config(dir / "w.ini"), Errc::ConfigError);

  touch(dir / "pa.json");
  touch(dir / "pb.json");
  touch(dir / "t.csv");
  write_file_atomic(dir / "nomodels.ini", "[data]\npiles = pa.json, pb.json\nperf_table = t.csv\n");
  EXPECT_ERRC(check_inputs(load_config(dir / "nomodels.ini")), Errc::ConfigError);
  write_file_atomic(dir / "gone.ini", "[data]\npiles = pa.json, pb.json\nperf_table = t.csv\n[models]\nm = gone.jsonl\n");
  try {
    check_inputs(load_config(dir / "gone.ini"));
    ADD_FAILURE() << "expected ConfigError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
    EXPECT_NE(std::string(e.what()).find("gone.jsonl"), std::string::npos);
  }
}

TEST(Config, HashTracksContentNotOutputDir) {
  TempDir dir;
  touch(dir / "pa.json");
  write_file_atomic(dir / "c.ini", "[data]\npiles = pa.json\n");
  auto cfg = load_config(dir / "c.ini");
  const auto h = config_hash(cfg);
  EXPECT_EQ(h.size(), 16u);
  cfg.output_dir = "/somewhere/else";
  EXPECT_EQ(config_hash(cfg), h);
  cfg.tie_seed += 1;
  EXPECT_NE(config_hash(cfg), h);
  cfg.tie_seed -= 1;
  write_file_atomic(dir / "pa.json", "changed\n");
  EXPECT_NE(config_hash(cfg), h);
}

TEST(Config, ListParsing) {
  EXPECT_EQ(parse_size_list(" 4, 8 ,16"), (std::vector<std::size_t>{4, 8, 16}));
  EXPECT_ERRC(parse_size_list("4,x"), Errc::ConfigError);
  EXPECT_ERRC(parse_size_list("-1"), Errc::ConfigError);
  EXPECT_EQ(parse_double_list("1, 0.5"), (std::vector<double>{1, 0.5}));
}

TEST(ErrorCategories, DriveExitCodes) {
  EXPECT_EQ(category_of(Errc::ConfigError), ErrorCategory::Config);
  EXPECT_EQ(category_of(Errc::DuplicateLabel), ErrorCategory::Data);
  EXPECT_EQ(category_of(Errc::ZeroVector), ErrorCategory::Numerical);
  EXPECT_EQ(to_string(Errc::OverlappingPiles), "OverlappingPiles");
}
