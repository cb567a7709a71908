#include "fixture.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <boost/random/uniform_int_distribution.hpp>

#include "simaudit/corpus.hpp"
#include "simaudit/report_io.hpp"
#include "simaudit/rng.hpp"

namespace simaudit::fixture {

namespace fs = std::filesystem;

namespace {

std::size_t draw(Engine& gen, std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
}

std::string numbered(const std::string& prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

Eigen::MatrixXd gaussian(Engine& gen, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = standard_normal(gen);
  return m;
}

// Splits the largest groups (or merges the two smallest) until there are
// `target` groups, then moves a fraction of members to another group.
std::vector<std::vector<std::size_t>> reshape(std::vector<std::vector<std::size_t>> groups, std::size_t target,
                                              double noise, Engine& gen) {
  auto by_size = [&] {
    std::stable_sort(groups.begin(), groups.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
  };
  while (groups.size() < target) {
    by_size();
    auto& big = groups.front();
    std::vector<std::size_t> half(big.begin() + static_cast<std::ptrdiff_t>(big.size() / 2), big.end());
    big.resize(big.size() / 2);
    groups.push_back(std::move(half));
  }
  while (groups.size() > target) {
    by_size();
    auto last = std::move(groups.back());
    groups.pop_back();
    groups.back().insert(groups.back().end(), last.begin(), last.end());
  }
  std::size_t total = 0;
  for (const auto& g : groups) total += g.size();
  const auto moves = static_cast<std::size_t>(noise * static_cast<double>(total));
  for (std::size_t m = 0; m < moves; ++m) {
    const std::size_t from = draw(gen, groups.size());
    if (groups[from].size() < 2) continue;
    std::size_t to = draw(gen, groups.size() - 1);
    if (to >= from) ++to;
    const std::size_t pos = draw(gen, groups[from].size());
    groups[to].push_back(groups[from][pos]);
    groups[from].erase(groups[from].begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return groups;
}

PileSorting to_piles(const std::string& group, const std::vector<std::vector<std::size_t>>& groups,
                     const std::vector<std::string>& labels) {
  std::vector<Pile> piles;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Pile p{numbered(group, g + 1, 2), {}};
    auto members = groups[g];
    std::sort(members.begin(), members.end());
    for (auto i : members) p.members.push_back(labels[i]);
    piles.push_back(std::move(p));
  }
  return make_pile_sorting(group, std::move(piles));
}

}  // namespace

std::vector<ModelSpec> default_models() {
  return {{"alpha", 0.7}, {"beta", 1.0}, {"gamma", 1.3}, {"delta", 1.7}, {"epsilon", 6.0}};
}

void write(const fs::path& dir, const Options& opt) {
  Engine gen = seeded_engine(opt.seed, 0);

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < opt.terms; ++i) labels.push_back(numbered("term", i, 3));
  const Vocab vocab(labels);

  std::vector<std::size_t> perm(opt.terms);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<std::size_t> topic(opt.terms);
  std::vector<std::vector<std::size_t>> by_topic(opt.topics);
  for (std::size_t r = 0; r < opt.terms; ++r) {
    topic[perm[r]] = r % opt.topics;
    by_topic[r % opt.topics].push_back(perm[r]);
  }

  save_piles(to_piles("A", reshape(by_topic, opt.piles_a, opt.pile_noise, gen), labels), dir / "piles_a.json");
  save_piles(to_piles("B", reshape(by_topic, opt.piles_b, opt.pile_noise, gen), labels), dir / "piles_b.json");

  // Each performance mixes a main and a secondary topic; terms can repeat.
  std::vector<std::pair<std::string, std::string>> rows;
  std::vector<std::pair<std::size_t, std::size_t>> perf_topics;
  for (std::size_t p = 0; p < opt.performances; ++p) {
    const std::size_t main = draw(gen, opt.topics);
    std::size_t second = draw(gen, opt.topics - 1);
    if (second >= main) ++second;
    perf_topics.emplace_back(main, second);
    const std::size_t words = 6 + draw(gen, 5);
    for (std::size_t w = 0; w < words; ++w) {
      const auto& pool = by_topic[unit_uniform(gen) < 0.7 ? main : second];
      rows.emplace_back(numbered("p", p + 1, 2), labels[pool[draw(gen, pool.size())]]);
    }
  }
  save_perf_table(make_perf_table(rows), dir / "perf_terms.csv");

  const Eigen::MatrixXd centres = gaussian(gen, opt.topics, opt.dim);
  const Eigen::RowVectorXd context = gaussian(gen, 1, opt.dim).row(0) * 1.5;
  const auto models = default_models();
  for (std::size_t m = 0; m < models.size(); ++m) {
    Engine noise_gen = seeded_engine(opt.seed, 100 + m);
    Eigen::MatrixXd vectors = gaussian(noise_gen, opt.terms, opt.dim) * models[m].noise;
    for (std::size_t i = 0; i < opt.terms; ++i)
      vectors.row(static_cast<Eigen::Index>(i)) += centres.row(static_cast<Eigen::Index>(topic[i]));
    save_embeddings(EmbeddingSet(vocab, vectors, models[m].name), dir / "models" / (models[m].name + ".jsonl"),
                    VectorFormat::Jsonl);

    // A shared prompt pulls every term towards one direction and sharpens
    // the topic signal a little.
    Engine ctx_gen = seeded_engine(opt.seed, 200 + m);
    Eigen::MatrixXd with_context = vectors * 0.9 + gaussian(ctx_gen, opt.terms, opt.dim) * (0.1 * models[m].noise);
    with_context.rowwise() += context;
    save_embeddings(EmbeddingSet(vocab, with_context, models[m].name), dir / "context" / (models[m].name + ".jsonl"),
                    VectorFormat::Jsonl);
  }

  // Audio lives in its own space: a random projection of the performance's
  // topic mixture plus noise.
  const std::size_t audio_dim = 48;
  const Eigen::MatrixXd projection = gaussian(gen, opt.dim, audio_dim);
  std::vector<std::string> perf_ids;
  Eigen::MatrixXd audio(static_cast<Eigen::Index>(opt.performances), static_cast<Eigen::Index>(audio_dim));
  for (std::size_t p = 0; p < opt.performances; ++p) {
    perf_ids.push_back(numbered("p", p + 1, 2));
    const auto [main, second] = perf_topics[p];
    const Eigen::RowVectorXd mix = 0.7 * centres.row(static_cast<Eigen::Index>(main)) +
                                   0.3 * centres.row(static_cast<Eigen::Index>(second));
    audio.row(static_cast<Eigen::Index>(p)) = mix * projection + gaussian(gen, 1, audio_dim).row(0) * 4.0;
  }
  save_embeddings(EmbeddingSet(Vocab(perf_ids), audio, "audio"), dir / "audio.jsonl", VectorFormat::Jsonl);

  std::ostringstream ini;
  ini << "[data]\npiles = piles_a.json, piles_b.json\nperf_table = perf_terms.csv\ngt_weights = 1, 1, 1\n\n";
  ini << "[models]\n";
  for (const auto& m : models) ini << m.name << " = models/" << m.name << ".jsonl\n";
  ini << "\n[context]\n";
  for (const auto& m : models) ini << m.name << " = context/" << m.name << ".jsonl\n";
  ini << "\n[cross_modal]\naudio = audio.jsonl\ntext_model = " << models.front().name
      << "\ncontext_model = " << models.front().name << "\nterm_weighting = unique\n\n";
  ini << "[eval]\nk_max = 49\ntie_seed = 7\nbaseline_trials = " << opt.baseline_trials
      << "\nbaseline_seed = 2024\ntrust_window = 5, 10\n\n";
  ini << "[hubness]\nks = 4, 8, 16\nmethod = mp-gauss\ncurve_k = 8\nrandom_dim = 100\nrandom_seed = 11\n\n";
  ini << "[cluster]\nk = " << opt.topics << "\nseed = 7\nrestarts = 10\nmax_iter = 300\ntol = 1e-6\n\n";
  ini << "[mds]\ndims = 2\ncheck_dims = 8\nmax_iter = 500\ntol = 1e-6\n\n";
  ini << "[output]\ndir = out\n";
  write_file_atomic(dir / "config.ini", ini.str());
}

}  // namespace simaudit::fixture
