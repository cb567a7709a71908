#include "simaudit/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "simaudit/clusterkit.hpp"
#include "simaudit/error.hpp"
#include "simaudit/groundtruth.hpp"
#include "simaudit/hubness.hpp"
#include "simaudit/mds.hpp"
#include "simaudit/plot.hpp"
#include "simaudit/report_io.hpp"
#include "simaudit/retrieval.hpp"
#include "simaudit/version.hpp"

namespace simaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json meta_json(const Provenance& prov) {
  json seeds = json::object();
  for (const auto& [k, v] : prov.seeds) seeds[k] = v;
  return {{"tool", "simaudit"}, {"version", kVersion}, {"config_hash", prov.config_hash}, {"seeds", seeds}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

bool selected(const std::vector<std::string>& filter, const std::string& name) {
  return filter.empty() || std::find(filter.begin(), filter.end(), name) != filter.end();
}

const EmbeddingSet* find_model(const std::vector<std::pair<std::string, EmbeddingSet>>& models,
                               const std::string& name) {
  for (const auto& [n, set] : models)
    if (n == name) return &set;
  return nullptr;
}

double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::size_t effective_kmax(const ExperimentConfig& cfg, std::size_t n) {
  if (n < 2) fail(Errc::BadK, "need at least two labels");
  return std::min(cfg.k_max, n - 1);
}

}  // namespace

std::vector<std::string> Provenance::lines() const {
  std::vector<std::string> out{std::string("simaudit ") + kVersion, "config_hash: " + config_hash};
  std::string s = "seeds:";
  for (const auto& [k, v] : seeds) s += " " + k + "=" + v;
  out.push_back(s);
  return out;
}

Provenance provenance_for(const ExperimentConfig& cfg) {
  return {config_hash(cfg),
          {{"tie_seed", std::to_string(cfg.tie_seed)},
           {"baseline_seed", std::to_string(cfg.baseline_seed)},
           {"random_seed", std::to_string(cfg.random_seed)},
           {"kmeans_seed", std::to_string(cfg.kmeans.seed)}}};
}

EmbeddingSet load_aligned(const fs::path& path, const Vocab& vocab, const std::string& tag) {
  const EmbeddingSet raw = load_embeddings(path);
  for (const auto& label : vocab.labels())
    if (!raw.vocab().contains(label))
      fail(Errc::UnknownLabel, path.string() + " has no vector for '" + label + "'");
  const EmbeddingSet aligned = raw.select(vocab);
  return EmbeddingSet(aligned.vocab(), aligned.vectors(), tag);
}

ExperimentData load_experiment(const ExperimentConfig& cfg) {
  check_inputs(cfg);
  if (cfg.gt_weights.size() != 3)
    fail(Errc::ConfigError, "gt_weights needs three entries (pile group 1, pile group 2, performances)");
  ExperimentData data;
  for (const auto& p : cfg.piles) data.piles.push_back(load_piles(p));
  data.table = load_perf_table(cfg.perf_table);
  const Vocab vocab = ground_truth_vocab(data.piles, &data.table);
  GroundTruthSpec spec;
  spec.sources.push_back({pile_similarity_matrix(data.piles[0], vocab), cfg.gt_weights[0]});
  spec.sources.push_back({pile_similarity_matrix(data.piles[1], vocab), cfg.gt_weights[1]});
  spec.sources.push_back({performance_cooccurrence_matrix(data.table, vocab), cfg.gt_weights[2]});
  data.ground_truth = combine(spec);
  for (const auto& m : cfg.models) data.models.emplace_back(m.name, load_aligned(m.path, vocab, m.name));
  for (const auto& m : cfg.context_models)
    data.context_models.emplace_back(m.name, load_aligned(m.path, vocab, m.name + "+context"));
  return data;
}

std::vector<fs::path> run_main_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  if (data.models.empty()) fail(Errc::ConfigError, "no embedding models configured");
  const Provenance prov = provenance_for(cfg);
  const auto& gt = data.ground_truth;
  const std::size_t kmax = effective_kmax(cfg, gt.size());
  std::vector<fs::path> files;

  save_matrix(gt, cfg.output_dir / "main" / "ground_truth.csv", prov.lines());
  files.emplace_back("main/ground_truth.csv");

  const BaselineBand band = random_baseline(gt.size(), kmax, cfg.baseline_trials, cfg.baseline_seed);
  std::vector<ApkCurve> curves;
  json models = json::array();
  for (const auto& [name, set] : data.models) {
    ApkCurve c = ap_curve(gt, similarity_matrix(set), kmax, cfg.tie_seed);
    c.label_u = "GT";
    c.label_v = name;
    const double above = fraction_above_band(c, band);
    json entry = {{"model", name},
                  {"mean_apk", mean_of(c.values)},
                  {"fraction_above_band", above},
                  {"above_baseline", above > 0.5}};
    if (kmax >= cfg.hub_curve_k) entry["apk_at_" + std::to_string(cfg.hub_curve_k)] = c.at(cfg.hub_curve_k);
    models.push_back(entry);
    curves.push_back(std::move(c));
  }

  // Expert agreement: pile group 1 against pile group 2, trusted only for k
  // around the typical pile size.
  json agreement = nullptr;
  if (cfg.trust_lo <= kmax) {
    const Vocab& vocab = gt.vocab();
    ApkCurve piles = ap_curve_window(pile_similarity_matrix(data.piles[0], vocab),
                                     pile_similarity_matrix(data.piles[1], vocab), cfg.trust_lo,
                                     std::min(cfg.trust_hi, kmax), cfg.tie_seed);
    piles.label_u = data.piles[0].group_id;
    piles.label_v = data.piles[0].group_id + " vs " + data.piles[1].group_id;
    agreement = {{"ks", piles.ks}, {"values", piles.values}};
    curves.push_back(std::move(piles));
  }

  CurvePlotOptions opts;
  opts.title = "aP@k against the ground truth";
  opts.comments = prov.lines();
  emit_curve_svg(curves, &band, opts, cfg.output_dir / "main" / "apk_curves.svg");
  files.emplace_back("main/apk_curves.csv");
  files.emplace_back("main/apk_curves.svg");

  std::vector<std::size_t> order(data.models.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return models[a]["mean_apk"].get<double>() > models[b]["mean_apk"].get<double>();
  });
  json ranking = json::array();
  for (auto i : order) ranking.push_back(data.models[i].first);

  json summary = {{"meta", meta_json(prov)},
                  {"n_terms", gt.size()},
                  {"k_max", kmax},
                  {"models", models},
                  {"ranking_by_mean_apk", ranking},
                  {"pile_agreement", agreement},
                  {"baseline", {{"trials", band.trials}, {"seed", band.seed}}}};
  write_file_atomic(cfg.output_dir / "main" / "summary.json", dump(summary));
  files.emplace_back("main/summary.json");
  return files;
}

std::vector<fs::path> run_hubness_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  const Provenance prov = provenance_for(cfg);
  const auto& gt = data.ground_truth;
  std::vector<fs::path> files;

  auto rows_json = [&](const std::vector<HubnessReport>& reports, json& rows) {
    for (const auto& r : reports)
      rows.push_back({{"model", r.model_tag},
                      {"nbhd", r.k},
                      {"skewness", {r.skewness_before, r.skewness_after}},
                      {"robinhood", {r.robinhood_before, r.robinhood_after}}});
  };

  json rows = json::array();
  std::vector<ApkCurve> ratios;
  const std::size_t kmax = effective_kmax(cfg, gt.size());
  for (const auto& [name, set] : data.models) {
    if (!selected(cfg.hub_models, name)) continue;
    rows_json(hubness_report(set, cfg.hub_ks, cfg.tie_seed, cfg.hub_method), rows);
    const SimMatrix cosine = similarity_matrix(set);
    const SimMatrix reduced = reduce_hubness(cosine, cfg.hub_method, cfg.hub_curve_k);
    ApkCurve after = ap_curve(gt, reduced, kmax, cfg.tie_seed);
    after.label_v = name;
    ApkCurve before = ap_curve(gt, cosine, kmax, cfg.tie_seed);
    ratios.push_back(relative_change(after, before));
  }
  const EmbeddingSet rb = gaussian_embeddings(gt.vocab(), cfg.random_dim, cfg.random_seed, "RB");
  rows_json(hubness_report(rb, cfg.hub_ks, cfg.tie_seed, cfg.hub_method), rows);

  json report = {{"meta", meta_json(prov)},
                 {"method", to_string(cfg.hub_method)},
                 {"skewness_convention", "population moments, no bias correction"},
                 {"sigma_convention", "population standard deviation over the n-1 off-diagonal distances"},
                 {"random_baseline", {{"dim", cfg.random_dim}, {"seed", cfg.random_seed}}},
                 {"rows", rows}};
  write_file_atomic(cfg.output_dir / "hubness" / "report.json", dump(report));
  files.emplace_back("hubness/report.json");

  CurvePlotOptions opts;
  opts.title = "relative change in aP@k after hubness reduction (nbhd " + std::to_string(cfg.hub_curve_k) + ")";
  opts.y_label = "ratio";
  opts.comments = prov.lines();
  if (emit_curve_svg(ratios, nullptr, opts, cfg.output_dir / "hubness" / "relative_change.svg"))
    files.emplace_back("hubness/relative_change.svg");
  files.emplace_back("hubness/relative_change.csv");
  return files;
}

std::vector<fs::path> run_context_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  const Provenance prov = provenance_for(cfg);
  const auto& gt = data.ground_truth;
  const std::size_t kmax = effective_kmax(cfg, gt.size());
  std::vector<ApkCurve> ratios;
  for (const auto& [name, ctx] : data.context_models) {
    const EmbeddingSet* plain = find_model(data.models, name);
    if (!plain) fail(Errc::ConfigError, "context model '" + name + "' has no plain counterpart in [models]");
    ApkCurve with = ap_curve(gt, similarity_matrix(ctx), kmax, cfg.tie_seed);
    with.label_v = name;
    ratios.push_back(relative_change(with, ap_curve(gt, similarity_matrix(*plain), kmax, cfg.tie_seed)));
  }
  CurvePlotOptions opts;
  opts.title = "relative change in aP@k with context prompts";
  opts.y_label = "ratio";
  opts.comments = prov.lines();
  std::vector<fs::path> files;
  if (emit_curve_svg(ratios, nullptr, opts, cfg.output_dir / "context" / "relative_change.svg"))
    files.emplace_back("context/relative_change.svg");
  files.emplace_back("context/relative_change.csv");
  return files;
}

std::vector<fs::path> run_cross_modal_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  if (cfg.audio.empty()) return {};
  const Provenance prov = provenance_for(cfg);
  const EmbeddingSet audio_raw = load_embeddings(cfg.audio);
  const EmbeddingSet audio(audio_raw.vocab(), audio_raw.vectors(), "audio");

  std::vector<std::pair<std::string, const EmbeddingSet*>> texts;
  if (const auto* t = find_model(data.models, cfg.audio_text_model)) texts.emplace_back(cfg.audio_text_model, t);
  else fail(Errc::ConfigError, "cross_modal.text_model '" + cfg.audio_text_model + "' is not in [models]");
  if (!cfg.audio_context_model.empty()) {
    const auto* t = find_model(data.context_models, cfg.audio_context_model);
    if (!t) fail(Errc::ConfigError, "cross_modal.context_model '" + cfg.audio_context_model + "' is not in [context]");
    texts.emplace_back(cfg.audio_context_model + "+context", t);
  }

  std::vector<ApkCurve> curves;
  std::size_t n = 0;
  std::size_t kmax = 0;
  for (const auto& [name, terms] : texts) {
    const EmbeddingSet perf = performance_text_embedding(*terms, data.table, cfg.term_weighting);
    const auto aligned = align({audio, perf});
    if (aligned[0].size() != audio.size() || aligned[1].size() != perf.size())
      fail(Errc::VocabMismatch, "audio embeddings and the performance table describe different performances");
    n = aligned[0].size();
    kmax = effective_kmax(cfg, n);
    ApkCurve c = cross_modal_curve(aligned[0], aligned[1], kmax, cfg.tie_seed);
    c.label_v = "audio vs " + name + " mean text";
    curves.push_back(std::move(c));
  }
  const BaselineBand band = random_baseline(n, kmax, cfg.baseline_trials, cfg.baseline_seed);
  CurvePlotOptions opts;
  opts.title = "aP@k of performance embeddings: audio vs mean term text";
  opts.comments = prov.lines();
  emit_curve_svg(curves, &band, opts, cfg.output_dir / "cross_modal" / "apk_curves.svg");

  json summary = {{"meta", meta_json(prov)}, {"n_performances", n}, {"curves", json::array()}};
  for (const auto& c : curves)
    summary["curves"].push_back({{"label", c.label_v},
                                 {"mean_apk", mean_of(c.values)},
                                 {"fraction_above_band", fraction_above_band(c, band)}});
  write_file_atomic(cfg.output_dir / "cross_modal" / "summary.json", dump(summary));
  return {"cross_modal/apk_curves.csv", "cross_modal/apk_curves.svg", "cross_modal/summary.json"};
}

std::vector<fs::path> run_clustering_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  const Provenance prov = provenance_for(cfg);
  const Vocab& vocab = data.ground_truth.vocab();
  std::vector<EmbeddingSet> spaces;
  for (const auto& [name, set] : data.models)
    if (selected(cfg.cluster_models, name)) spaces.push_back(set);
  spaces.push_back(similarity_profiles(data.ground_truth, "GT"));
  spaces.push_back(gaussian_embeddings(vocab, cfg.random_dim, cfg.random_seed, "RB"));

  const ClusteringReport report = clustering_report(spaces, data.piles, cfg.kmeans);
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = {{"model", row.space}};
    for (std::size_t g = 0; g < row.vs_piles.size(); ++g)
      r["overlap_v_" + report.pile_groups[g]] = {{"piles_in_kmeans", row.vs_piles[g].first},
                                                 {"kmeans_in_piles", row.vs_piles[g].second}};
    rows.push_back(r);
  }
  json doc = {{"meta", meta_json(prov)},
              {"kmeans",
               {{"k", cfg.kmeans.k},
                {"seed", cfg.kmeans.seed},
                {"restarts", cfg.kmeans.restarts},
                {"max_iter", cfg.kmeans.max_iter},
                {"tol", cfg.kmeans.tol},
                {"unit_normalize", cfg.kmeans.unit_normalize}}},
              {"reference",
               {{"p1_in_p2", report.p1_in_p2},
                {"p2_in_p1", report.p2_in_p1},
                {"groups", report.pile_groups}}},
              {"rows", rows}};
  write_file_atomic(cfg.output_dir / "cluster" / "overlap.json", dump(doc));
  return {"cluster/overlap.json"};
}

std::vector<fs::path> run_mds_experiment(const ExperimentConfig& cfg, const ExperimentData& data) {
  const Provenance prov = provenance_for(cfg);
  const auto& gt = data.ground_truth;
  const DistMatrix dist = to_dissimilarity(gt);
  std::vector<fs::path> files;

  SmacofOptions sopts;
  sopts.max_iter = cfg.mds_max_iter;
  sopts.tol = cfg.mds_tol;
  const MdsSolution layout = smacof(dist, cfg.mds_dims, sopts);

  std::ostringstream coords;
  for (const auto& l : prov.lines()) coords << "# " << l << '\n';
  coords << "label";
  for (std::size_t c = 0; c < layout.dims; ++c) coords << ",x" << c;
  coords << '\n';
  for (std::size_t i = 0; i < layout.vocab.size(); ++i) {
    coords << csv_field(layout.vocab[i]);
    for (std::size_t c = 0; c < layout.dims; ++c)
      coords << ',' << format_sig(layout.coordinates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)), 9);
    coords << '\n';
  }
  write_file_atomic(cfg.output_dir / "mds" / "coords.csv", coords.str());
  files.emplace_back("mds/coords.csv");

  if (layout.dims == 2) {
    std::vector<Clustering> colorings;
    for (const auto& p : data.piles) colorings.push_back(Clustering::from_piles(p, gt.vocab()));
    ScatterOptions so;
    so.comments = prov.lines();
    so.title = "MDS of the ground-truth similarities";
    emit_scatter_svg(layout, colorings, so, cfg.output_dir / "mds" / "ground_truth.svg");
    files.emplace_back("mds/ground_truth.svg");
    so.hulls = true;
    so.title = "convex hulls of " + data.piles.back().group_id;
    emit_scatter_svg(layout, {colorings.back()}, so, cfg.output_dir / "mds" / "hulls.svg");
    files.emplace_back("mds/hulls.svg");
  }

  // How much neighborhood structure survives a low-dimensional embedding.
  json check = nullptr;
  const std::size_t kmax = effective_kmax(cfg, gt.size());
  if (cfg.mds_check_dims >= 1 && cfg.mds_check_dims < gt.size() && cfg.trust_lo <= kmax) {
    const MdsSolution deep = smacof(dist, cfg.mds_check_dims, sopts);
    const SimMatrix embedded = proximity_from_distances(euclidean_distances(gt.vocab(), deep.coordinates));
    const std::size_t hi = std::min(cfg.trust_hi, kmax);
    const ApkCurve kept = ap_curve_window(gt, embedded, cfg.trust_lo, hi, cfg.tie_seed);
    const ApkCurve full = ap_curve_window(gt, gt, cfg.trust_lo, hi, cfg.tie_seed);
    const ApkCurve ratio = relative_change(kept, full);
    const double worst = *std::min_element(ratio.values.begin(), ratio.values.end());
    check = {{"dims", cfg.mds_check_dims},
             {"ks", kept.ks},
             {"apk_embedded", kept.values},
             {"apk_original", full.values},
             {"max_relative_loss", 1.0 - worst},
             {"stress", deep.stress}};
  }
  json summary = {{"meta", meta_json(prov)},
                  {"layout", {{"dims", layout.dims}, {"stress", layout.stress}, {"iterations", layout.iterations}}},
                  {"dimension_check", check}};
  write_file_atomic(cfg.output_dir / "mds" / "summary.json", dump(summary));
  files.emplace_back("mds/summary.json");
  return files;
}

std::vector<fs::path> run_report_all(const ExperimentConfig& cfg) {
  const ExperimentData data = load_experiment(cfg);
  std::vector<fs::path> files;
  auto add = [&](std::vector<fs::path> more) { files.insert(files.end(), more.begin(), more.end()); };
  add(run_main_experiment(cfg, data));
  add(run_hubness_experiment(cfg, data));
  if (!data.context_models.empty()) add(run_context_experiment(cfg, data));
  add(run_cross_modal_experiment(cfg, data));
  add(run_clustering_experiment(cfg, data));
  add(run_mds_experiment(cfg, data));

  const Provenance prov = provenance_for(cfg);
  json entries = json::array();
  for (const auto& f : files)
    entries.push_back({{"path", f.generic_string()}, {"sha256", sha256_hex(read_file(cfg.output_dir / f))}});
  json manifest = {{"meta", meta_json(prov)}, {"files", entries}};
  write_file_atomic(cfg.output_dir / "manifest.json", dump(manifest));
  files.emplace_back("manifest.json");
  return files;
}

}  // namespace simaudit
