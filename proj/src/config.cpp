#include "simaudit/config.hpp"

#include <cstdlib>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "simaudit/error.hpp"
#include "simaudit/report_io.hpp"

namespace simaudit {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

template <typename T>
T get_or(const pt::ptree& tree, const std::string& key, T fallback) {
  try {
    // get<T>(key, fallback) swallows conversion errors, so only fall back on a missing key.
    if (!tree.get_child_optional(key)) return fallback;
    return tree.get<T>(key);
  } catch (const pt::ptree_error& e) {
    fail(Errc::ConfigError, "bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(text)) {
    try {
      if (p.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(p);
      const auto v = std::stoull(p);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      fail(Errc::ConfigError, "expected a list of non-negative integers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split_list(text)) {
    try {
      out.push_back(parse_double(p));
    } catch (const Error&) {
      fail(Errc::ConfigError, "expected a list of numbers, got '" + text + "'");
    }
  }
  return out;
}

ExperimentConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) fail(Errc::ConfigError, "config file not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    fail(Errc::ConfigError, e.what());
  }

  ExperimentConfig cfg;
  const fs::path base = fs::absolute(path).parent_path();
  if (auto dir = tree.get_optional<std::string>("data.dir")) {
    cfg.data_dir = fs::path(*dir).is_absolute() ? fs::path(*dir) : base / *dir;
  } else if (const char* env = std::getenv(kDataDirEnv); env && *env) {
    cfg.data_dir = env;
  } else {
    cfg.data_dir = base;
  }
  auto input = [&](const std::string& p) {
    fs::path q(p);
    return (q.is_absolute() ? q : cfg.data_dir / q).lexically_normal();
  };

  for (const auto& p : split_list(get_or<std::string>(tree, "data.piles", ""))) cfg.piles.push_back(input(p));
  if (auto t = tree.get_optional<std::string>("data.perf_table")) cfg.perf_table = input(*t);
  if (auto w = tree.get_optional<std::string>("data.gt_weights")) cfg.gt_weights = parse_double_list(*w);

  if (auto models = tree.get_child_optional("models"))
    for (const auto& [name, node] : *models) cfg.models.push_back({name, input(node.data())});
  if (auto ctx = tree.get_child_optional("context"))
    for (const auto& [name, node] : *ctx) cfg.context_models.push_back({name, input(node.data())});

  if (auto a = tree.get_optional<std::string>("cross_modal.audio")) cfg.audio = input(*a);
  cfg.audio_text_model = get_or<std::string>(tree, "cross_modal.text_model", "");
  cfg.audio_context_model = get_or<std::string>(tree, "cross_modal.context_model", "");
  const auto weighting = get_or<std::string>(tree, "cross_modal.term_weighting", "unique");
  if (weighting == "unique") cfg.term_weighting = TermWeighting::Unique;
  else if (weighting == "frequency") cfg.term_weighting = TermWeighting::Frequency;
  else fail(Errc::ConfigError, "term_weighting must be unique or frequency");

  cfg.k_max = get_or(tree, "eval.k_max", cfg.k_max);
  cfg.tie_seed = get_or(tree, "eval.tie_seed", cfg.tie_seed);
  cfg.baseline_trials = get_or(tree, "eval.baseline_trials", cfg.baseline_trials);
  cfg.baseline_seed = get_or(tree, "eval.baseline_seed", cfg.baseline_seed);
  if (auto w = tree.get_optional<std::string>("eval.trust_window")) {
    const auto window = parse_size_list(*w);
    if (window.size() != 2 || window[0] < 1 || window[0] > window[1])
      fail(Errc::ConfigError, "trust_window must be 'lo,hi' with 1 <= lo <= hi");
    cfg.trust_lo = window[0];
    cfg.trust_hi = window[1];
  }

  if (auto ks = tree.get_optional<std::string>("hubness.ks")) cfg.hub_ks = parse_size_list(*ks);
  try {
    cfg.hub_method = reduction_method_from_string(get_or<std::string>(tree, "hubness.method", "mp-gauss"));
  } catch (const Error& e) {
    fail(Errc::ConfigError, e.what());
  }
  cfg.hub_curve_k = get_or(tree, "hubness.curve_k", cfg.hub_curve_k);
  cfg.hub_models = split_list(get_or<std::string>(tree, "hubness.models", ""));
  cfg.random_dim = get_or(tree, "hubness.random_dim", cfg.random_dim);
  cfg.random_seed = get_or(tree, "hubness.random_seed", cfg.random_seed);

  cfg.kmeans.k = get_or(tree, "cluster.k", cfg.kmeans.k);
  cfg.kmeans.seed = get_or(tree, "cluster.seed", cfg.kmeans.seed);
  cfg.kmeans.restarts = get_or(tree, "cluster.restarts", cfg.kmeans.restarts);
  cfg.kmeans.max_iter = get_or(tree, "cluster.max_iter", cfg.kmeans.max_iter);
  cfg.kmeans.tol = get_or(tree, "cluster.tol", cfg.kmeans.tol);
  cfg.cluster_models = split_list(get_or<std::string>(tree, "cluster.models", ""));

  cfg.mds_dims = get_or(tree, "mds.dims", cfg.mds_dims);
  cfg.mds_check_dims = get_or(tree, "mds.check_dims", cfg.mds_check_dims);
  cfg.mds_max_iter = get_or(tree, "mds.max_iter", cfg.mds_max_iter);
  cfg.mds_tol = get_or(tree, "mds.tol", cfg.mds_tol);

  if (auto out = tree.get_optional<std::string>("output.dir"))
    cfg.output_dir = fs::path(*out).is_absolute() ? fs::path(*out) : base / *out;
  else
    cfg.output_dir = base / "out";
  return cfg;
}

void check_inputs(const ExperimentConfig& cfg) {
  auto need = [](const fs::path& p, const std::string& what) {
    if (p.empty()) fail(Errc::ConfigError, what + " is not configured");
    if (!fs::exists(p)) fail(Errc::ConfigError, what + " not found: " + p.string());
  };
  if (cfg.piles.size() != 2) fail(Errc::ConfigError, "exactly two pile files are required");
  for (const auto& p : cfg.piles) need(p, "pile file");
  need(cfg.perf_table, "performance table");
  if (cfg.models.empty()) fail(Errc::ConfigError, "no embedding models configured");
  for (const auto& m : cfg.models) need(m.path, "embedding file for model '" + m.name + "'");
  for (const auto& m : cfg.context_models) need(m.path, "context embedding file for model '" + m.name + "'");
  if (!cfg.audio.empty()) need(cfg.audio, "audio embedding file");
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto digest = [](const fs::path& p) {
    return fs::exists(p) ? sha256_hex(read_file(p)) : std::string("missing");
  };
  auto list = [&](const auto& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ',';
      if constexpr (std::is_same_v<std::decay_t<decltype(xs[i])>, double>) s += format_double(xs[i]);
      else if constexpr (std::is_same_v<std::decay_t<decltype(xs[i])>, std::string>) s += xs[i];
      else s += std::to_string(xs[i]);
    }
    return s;
  };
  for (std::size_t i = 0; i < cfg.piles.size(); ++i) out << "piles." << i << '=' << digest(cfg.piles[i]) << '\n';
  out << "perf_table=" << digest(cfg.perf_table) << '\n';
  out << "gt_weights=" << list(cfg.gt_weights) << '\n';
  for (const auto& m : cfg.models) out << "models." << m.name << '=' << digest(m.path) << '\n';
  for (const auto& m : cfg.context_models) out << "context." << m.name << '=' << digest(m.path) << '\n';
  out << "audio=" << (cfg.audio.empty() ? std::string("none") : digest(cfg.audio)) << '\n';
  out << "audio_text_model=" << cfg.audio_text_model << '\n';
  out << "audio_context_model=" << cfg.audio_context_model << '\n';
  out << "term_weighting=" << (cfg.term_weighting == TermWeighting::Unique ? "unique" : "frequency") << '\n';
  out << "k_max=" << cfg.k_max << "\ntie_seed=" << cfg.tie_seed << "\nbaseline_trials="
      << cfg.baseline_trials << "\nbaseline_seed=" << cfg.baseline_seed << "\ntrust_window="
      << cfg.trust_lo << ',' << cfg.trust_hi << '\n';
  out << "hub_ks=" << list(cfg.hub_ks) << "\nhub_method=" << to_string(cfg.hub_method)
      << "\nhub_curve_k=" << cfg.hub_curve_k << "\nhub_models=" << list(cfg.hub_models)
      << "\nrandom_dim=" << cfg.random_dim << "\nrandom_seed=" << cfg.random_seed << '\n';
  out << "kmeans=" << cfg.kmeans.k << ',' << cfg.kmeans.seed << ',' << cfg.kmeans.restarts << ','
      << cfg.kmeans.max_iter << ',' << format_double(cfg.kmeans.tol) << "\ncluster_models="
      << list(cfg.cluster_models) << '\n';
  out << "mds=" << cfg.mds_dims << ',' << cfg.mds_check_dims << ',' << cfg.mds_max_iter << ','
      << format_double(cfg.mds_tol) << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(canonical_config(cfg)).substr(0, 16); }

}  // namespace simaudit
