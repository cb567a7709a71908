#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "simaudit/clusterkit.hpp"
#include "simaudit/config.hpp"
#include "simaudit/error.hpp"
#include "simaudit/groundtruth.hpp"
#include "simaudit/hubness.hpp"
#include "simaudit/mds.hpp"
#include "simaudit/pipeline.hpp"
#include "simaudit/plot.hpp"
#include "simaudit/report_io.hpp"
#include "simaudit/retrieval.hpp"
#include "simaudit/version.hpp"

namespace fs = std::filesystem;
using namespace simaudit;
using nlohmann::json;

namespace {

// Relative inputs that do not exist under the working directory are looked
// up under $SIMAUDIT_DATA_DIR.
fs::path input(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || fs::exists(path)) return path;
  if (const char* env = std::getenv(kDataDirEnv); env && *env) {
    const fs::path alt = fs::path(env) / path;
    if (fs::exists(alt)) return alt;
  }
  if (!fs::exists(path)) fail(Errc::ConfigError, "input not found: " + p);
  return path;
}

std::string short_digest(const fs::path& p) { return sha256_hex(read_file(p)).substr(0, 16); }

// Provenance lines for single-command outputs: version, inputs by content
// digest, seeds.
struct Stamp {
  std::string command;
  std::vector<std::pair<std::string, fs::path>> inputs;
  std::vector<std::pair<std::string, std::string>> seeds;

  std::vector<std::string> lines() const {
    std::vector<std::string> out{std::string("simaudit ") + kVersion, "command: " + command};
    std::string in = "inputs:";
    for (const auto& [name, path] : inputs) in += " " + name + "=" + short_digest(path);
    out.push_back(in);
    std::string s = "seeds:";
    for (const auto& [k, v] : seeds) s += " " + k + "=" + v;
    out.push_back(s);
    return out;
  }

  json meta() const {
    json m = {{"tool", "simaudit"}, {"version", kVersion}, {"command", command}};
    for (const auto& [name, path] : inputs) m["inputs"][name] = short_digest(path);
    for (const auto& [k, v] : seeds) m["seeds"][k] = v;
    return m;
  }
};

PileSorting piles_from(const std::string& p) { return load_piles(input(p)); }

void write_json(const fs::path& out, const json& doc) { write_file_atomic(out, doc.dump(2) + "\n"); }

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numerical: return 4;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit embedding spaces against expert similarity judgements"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::function<void()> action;

  // gt build
  auto* gt = app.add_subcommand("gt", "Ground-truth similarity");
  gt->require_subcommand(1);
  auto* gt_build = gt->add_subcommand("build", "Combine pile sortings and performance co-occurrence");
  std::vector<std::string> gt_piles;
  std::string gt_table, gt_out, gt_weights = "1,1,1", gt_vocab;
  gt_build->add_option("--piles", gt_piles, "Pile sorting file (give twice)")->required();
  gt_build->add_option("--perf-table", gt_table, "performance_id,term CSV");
  gt_build->add_option("--weights", gt_weights, "Source weights: piles..., performances");
  gt_build->add_option("--vocab", gt_vocab, "Embedding file whose labels define the vocabulary");
  gt_build->add_option("--out", gt_out, "Output matrix CSV")->required();
  gt_build->callback([&] {
    action = [&] {
      std::vector<PileSorting> groups;
      Stamp stamp{"gt build", {}, {}};
      for (std::size_t i = 0; i < gt_piles.size(); ++i) {
        groups.push_back(piles_from(gt_piles[i]));
        stamp.inputs.emplace_back("piles" + std::to_string(i + 1), input(gt_piles[i]));
      }
      std::optional<PerfTermTable> table;
      if (!gt_table.empty()) {
        table = load_perf_table(input(gt_table));
        stamp.inputs.emplace_back("perf_table", input(gt_table));
      }
      Vocab vocab = ground_truth_vocab(groups, table ? &*table : nullptr);
      if (!gt_vocab.empty()) vocab = load_embeddings(input(gt_vocab)).vocab();
      const auto weights = parse_double_list(gt_weights);
      if (weights.size() != groups.size() + (table ? 1 : 0))
        fail(Errc::ConfigError, "--weights needs one entry per source");
      GroundTruthSpec spec;
      for (std::size_t i = 0; i < groups.size(); ++i)
        spec.sources.push_back({pile_similarity_matrix(groups[i], vocab), weights[i]});
      if (table) spec.sources.push_back({performance_cooccurrence_matrix(*table, vocab), weights.back()});
      save_matrix(combine(spec), gt_out, stamp.lines());
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "aP@k of an embedding against a similarity matrix");
  std::string ev_gt, ev_emb, ev_out;
  std::size_t ev_kmax = 49, ev_trials = 1000;
  std::uint64_t ev_seed = 7, ev_bseed = 2024;
  bool ev_svg = false;
  eval->add_option("--gt", ev_gt, "Ground-truth matrix CSV")->required();
  eval->add_option("--emb", ev_emb, "Embedding file (JSONL or CSV)")->required();
  eval->add_option("--kmax", ev_kmax, "Largest neighborhood size");
  eval->add_option("--tie-seed", ev_seed, "Tie-breaking seed");
  eval->add_option("--trials", ev_trials, "Random-baseline trials");
  eval->add_option("--baseline-seed", ev_bseed, "Random-baseline seed");
  eval->add_option("--out", ev_out, "Output CSV")->required();
  eval->add_flag("--svg", ev_svg, "Also write an SVG next to the CSV");
  eval->callback([&] {
    action = [&] {
      const SimMatrix g = load_matrix(input(ev_gt), SimKind::GroundTruth);
      const std::string name = fs::path(ev_emb).stem().string();
      const EmbeddingSet set = load_aligned(input(ev_emb), g.vocab(), name);
      const std::size_t kmax = std::min(ev_kmax, g.size() - 1);
      ApkCurve c = ap_curve(g, similarity_matrix(set), kmax, ev_seed);
      const BaselineBand band = random_baseline(g.size(), kmax, ev_trials, ev_bseed);
      Stamp stamp{"eval",
                  {{"gt", input(ev_gt)}, {"emb", input(ev_emb)}},
                  {{"tie_seed", std::to_string(ev_seed)}, {"baseline_seed", std::to_string(ev_bseed)}}};
      CurvePlotOptions opts;
      opts.comments = stamp.lines();
      opts.names = {"value"};
      opts.title = "aP@k of " + name;
      fs::path out(ev_out);
      if (ev_svg) {
        emit_curve_svg({c}, &band, opts, fs::path(out).replace_extension(".svg"));
        if (out.extension() != ".csv") write_file_atomic(out, curve_csv({c}, &band, opts));
      } else {
        write_file_atomic(out, curve_csv({c}, &band, opts));
      }
    };
  });

  // hubness
  auto* hub = app.add_subcommand("hubness", "Skewness and Robin-Hood index before and after hubness reduction");
  std::string hub_emb, hub_out, hub_ks = "4,8,16", hub_method = "mp-gauss";
  std::uint64_t hub_seed = 7;
  hub->add_option("--emb", hub_emb, "Embedding file")->required();
  hub->add_option("--ks", hub_ks, "Neighborhood sizes");
  hub->add_option("--method", hub_method, "mp-gauss or local-scaling");
  hub->add_option("--tie-seed", hub_seed, "Tie-breaking seed");
  hub->add_option("--out", hub_out, "Output JSON")->required();
  hub->callback([&] {
    action = [&] {
      ReductionMethod method;
      try {
        method = reduction_method_from_string(hub_method);
      } catch (const Error& e) {
        fail(Errc::ConfigError, e.what());
      }
      const EmbeddingSet raw = load_embeddings(input(hub_emb));
      const std::string name = fs::path(hub_emb).stem().string();
      const EmbeddingSet set(raw.vocab(), raw.vectors(), name);
      json rows = json::array();
      for (const auto& r : hubness_report(set, parse_size_list(hub_ks), hub_seed, method))
        rows.push_back({{"model", r.model_tag},
                        {"nbhd", r.k},
                        {"skewness", {r.skewness_before, r.skewness_after}},
                        {"robinhood", {r.robinhood_before, r.robinhood_after}}});
      Stamp stamp{"hubness", {{"emb", input(hub_emb)}}, {{"tie_seed", std::to_string(hub_seed)}}};
      write_json(hub_out, {{"meta", stamp.meta()}, {"method", to_string(method)}, {"rows", rows}});
    };
  });

  // cluster
  auto* cl = app.add_subcommand("cluster", "k-means of an embedding scored against pile sortings");
  std::string cl_emb, cl_out;
  std::vector<std::string> cl_piles;
  KMeansOptions km{22, 7, 10, 300, 1e-6, true};
  cl->add_option("--emb", cl_emb, "Embedding file")->required();
  cl->add_option("--k", km.k, "Number of clusters");
  cl->add_option("--seed", km.seed, "k-means seed");
  cl->add_option("--restarts", km.restarts, "Restarts");
  cl->add_option("--max-iter", km.max_iter, "Lloyd iterations per restart");
  cl->add_option("--piles", cl_piles, "Pile sorting file (repeatable)")->required();
  cl->add_option("--out", cl_out, "Output JSON")->required();
  cl->callback([&] {
    action = [&] {
      std::vector<PileSorting> groups;
      Stamp stamp{"cluster", {{"emb", input(cl_emb)}}, {{"kmeans_seed", std::to_string(km.seed)}}};
      for (std::size_t i = 0; i < cl_piles.size(); ++i) {
        groups.push_back(piles_from(cl_piles[i]));
        stamp.inputs.emplace_back("piles" + std::to_string(i + 1), input(cl_piles[i]));
      }
      const EmbeddingSet raw = load_embeddings(input(cl_emb));
      const EmbeddingSet set(raw.vocab(), raw.vectors(), fs::path(cl_emb).stem().string());
      const ClusteringReport report = clustering_report({set}, groups, km);
      json doc = {{"meta", stamp.meta()},
                  {"kmeans", {{"k", km.k}, {"seed", km.seed}, {"restarts", km.restarts}}},
                  {"groups", report.pile_groups}};
      if (groups.size() == 2) doc["reference"] = {{"p1_in_p2", report.p1_in_p2}, {"p2_in_p1", report.p2_in_p1}};
      for (const auto& row : report.rows) {
        json r = {{"model", row.space}};
        for (std::size_t g = 0; g < row.vs_piles.size(); ++g)
          r["overlap_v_" + report.pile_groups[g]] = {{"piles_in_kmeans", row.vs_piles[g].first},
                                                     {"kmeans_in_piles", row.vs_piles[g].second}};
        doc["rows"].push_back(r);
      }
      write_json(cl_out, doc);
    };
  });

  // mds
  auto* mds = app.add_subcommand("mds", "Lay out a similarity matrix in low dimension");
  std::string mds_matrix, mds_svg, mds_csv, mds_init = "classical";
  std::vector<std::string> mds_piles;
  std::size_t mds_dims = 2;
  std::uint64_t mds_seed = 0;
  bool mds_hulls = false;
  mds->add_option("--matrix", mds_matrix, "Similarity matrix CSV")->required();
  mds->add_option("--dims", mds_dims, "Output dimensions");
  mds->add_option("--piles", mds_piles, "Pile sortings used for coloring");
  mds->add_option("--svg", mds_svg, "Scatter plot (2-D only)");
  mds->add_option("--csv", mds_csv, "Coordinates CSV");
  mds->add_option("--init", mds_init, "classical or random");
  mds->add_option("--seed", mds_seed, "Seed for random initialization");
  mds->add_flag("--hulls", mds_hulls, "Draw convex hulls of the last pile sorting");
  mds->callback([&] {
    action = [&] {
      const SimMatrix sim = load_matrix(input(mds_matrix), SimKind::GroundTruth);
      SmacofOptions so;
      if (mds_init == "random") so.init = MdsInit::Random;
      else if (mds_init != "classical") fail(Errc::ConfigError, "--init must be classical or random");
      so.seed = mds_seed;
      const MdsSolution sol = smacof(to_dissimilarity(sim), mds_dims, so);
      Stamp stamp{"mds", {{"matrix", input(mds_matrix)}}, {{"mds_seed", std::to_string(mds_seed)}}};
      if (!mds_csv.empty()) {
        std::string text;
        for (const auto& l : stamp.lines()) text += "# " + l + "\n";
        text += "label";
        for (std::size_t c = 0; c < sol.dims; ++c) text += ",x" + std::to_string(c);
        text += "\n";
        for (std::size_t i = 0; i < sol.vocab.size(); ++i) {
          text += csv_field(sol.vocab[i]);
          for (std::size_t c = 0; c < sol.dims; ++c)
            text += "," + format_sig(sol.coordinates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)), 9);
          text += "\n";
        }
        write_file_atomic(mds_csv, text);
      }
      if (!mds_svg.empty()) {
        std::vector<Clustering> colorings;
        for (std::size_t i = 0; i < mds_piles.size(); ++i) {
          colorings.push_back(Clustering::from_piles(piles_from(mds_piles[i]), sol.vocab));
          stamp.inputs.emplace_back("piles" + std::to_string(i + 1), input(mds_piles[i]));
        }
        ScatterOptions opts;
        opts.hulls = mds_hulls;
        opts.comments = stamp.lines();
        emit_scatter_svg(sol, colorings, opts, mds_svg);
      }
      std::cout << "stress " << format_sig(sol.stress, 9) << " after " << sol.iterations << " iterations\n";
    };
  });

  // cross-modal
  auto* cm = app.add_subcommand("cross-modal", "Audio embeddings against mean term-text embeddings per performance");
  std::string cm_audio, cm_text, cm_table, cm_out, cm_weighting = "unique";
  std::size_t cm_kmax = 49, cm_trials = 1000;
  std::uint64_t cm_seed = 7, cm_bseed = 2024;
  cm->add_option("--audio", cm_audio, "Audio embedding file")->required();
  cm->add_option("--text", cm_text, "Term embedding file")->required();
  cm->add_option("--perf-table", cm_table, "performance_id,term CSV")->required();
  cm->add_option("--weighting", cm_weighting, "unique or frequency");
  cm->add_option("--kmax", cm_kmax, "Largest neighborhood size");
  cm->add_option("--tie-seed", cm_seed, "Tie-breaking seed");
  cm->add_option("--trials", cm_trials, "Random-baseline trials");
  cm->add_option("--baseline-seed", cm_bseed, "Random-baseline seed");
  cm->add_option("--out", cm_out, "Output CSV")->required();
  cm->callback([&] {
    action = [&] {
      TermWeighting w = TermWeighting::Unique;
      if (cm_weighting == "frequency") w = TermWeighting::Frequency;
      else if (cm_weighting != "unique") fail(Errc::ConfigError, "--weighting must be unique or frequency");
      const EmbeddingSet audio = load_embeddings(input(cm_audio));
      const EmbeddingSet text = performance_text_embedding(load_embeddings(input(cm_text)),
                                                           load_perf_table(input(cm_table)), w);
      const auto aligned = align({audio, text});
      const std::size_t n = aligned[0].size();
      if (n < 2) fail(Errc::NoCommonVocab, "fewer than two shared performances");
      const std::size_t kmax = std::min(cm_kmax, n - 1);
      ApkCurve c = cross_modal_curve(aligned[0], aligned[1], kmax, cm_seed);
      const BaselineBand band = random_baseline(n, kmax, cm_trials, cm_bseed);
      Stamp stamp{"cross-modal",
                  {{"audio", input(cm_audio)}, {"text", input(cm_text)}, {"perf_table", input(cm_table)}},
                  {{"tie_seed", std::to_string(cm_seed)}, {"baseline_seed", std::to_string(cm_bseed)}}};
      CurvePlotOptions opts;
      opts.comments = stamp.lines();
      opts.names = {"value"};
      write_file_atomic(cm_out, curve_csv({c}, &band, opts));
    };
  });

  // context
  auto* ctx = app.add_subcommand("context", "Relative change in aP@k from context prompts");
  std::string cx_gt, cx_plain, cx_context, cx_out;
  std::size_t cx_kmax = 49;
  std::uint64_t cx_seed = 7;
  ctx->add_option("--gt", cx_gt, "Ground-truth matrix CSV")->required();
  ctx->add_option("--plain", cx_plain, "Embedding file without context")->required();
  ctx->add_option("--context", cx_context, "Embedding file with context")->required();
  ctx->add_option("--kmax", cx_kmax, "Largest neighborhood size");
  ctx->add_option("--tie-seed", cx_seed, "Tie-breaking seed");
  ctx->add_option("--out", cx_out, "Output CSV")->required();
  ctx->callback([&] {
    action = [&] {
      const SimMatrix g = load_matrix(input(cx_gt), SimKind::GroundTruth);
      const std::size_t kmax = std::min(cx_kmax, g.size() - 1);
      const auto plain = load_aligned(input(cx_plain), g.vocab(), "plain");
      const auto with = load_aligned(input(cx_context), g.vocab(), "context");
      const ApkCurve ratio = relative_change(ap_curve(g, similarity_matrix(with), kmax, cx_seed),
                                             ap_curve(g, similarity_matrix(plain), kmax, cx_seed));
      Stamp stamp{"context",
                  {{"gt", input(cx_gt)}, {"plain", input(cx_plain)}, {"context", input(cx_context)}},
                  {{"tie_seed", std::to_string(cx_seed)}}};
      CurvePlotOptions opts;
      opts.comments = stamp.lines();
      opts.names = {"ratio"};
      write_file_atomic(cx_out, curve_csv({ratio}, nullptr, opts));
    };
  });

  // report all
  auto* report = app.add_subcommand("report", "Run experiment recipes from a config file");
  report->require_subcommand(1);
  auto* all = report->add_subcommand("all", "Every recipe plus a manifest");
  std::string rp_config, rp_out;
  std::optional<std::uint64_t> rp_seed;
  std::optional<std::size_t> rp_kmax, rp_trials;
  all->add_option("--config", rp_config, "Config file")->required();
  all->add_option("--out-dir", rp_out, "Output directory (overrides the config)");
  all->add_option("--tie-seed", rp_seed, "Tie-breaking seed (overrides the config)");
  all->add_option("--kmax", rp_kmax, "Largest neighborhood size (overrides the config)");
  all->add_option("--trials", rp_trials, "Random-baseline trials (overrides the config)");
  all->callback([&] {
    action = [&] {
      ExperimentConfig cfg = load_config(rp_config);
      if (!rp_out.empty()) cfg.output_dir = rp_out;
      if (rp_seed) cfg.tie_seed = *rp_seed;
      if (rp_kmax) cfg.k_max = *rp_kmax;
      if (rp_trials) cfg.baseline_trials = *rp_trials;
      for (const auto& f : run_report_all(cfg)) std::cout << (cfg.output_dir / f).generic_string() << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    action();
  } catch (const Error& e) {
    std::cerr << "audit: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "audit: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
