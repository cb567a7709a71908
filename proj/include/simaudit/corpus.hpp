#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace simaudit {

/// Canonical form of a label: NFC, Unicode whitespace trimmed, full case
/// folding. Two labels that differ only in case or surrounding whitespace
/// normalize to the same string.
std::string normalize_label(std::string_view raw);

/// Ordered set of unique normalized labels. The order fixes the row/column
/// index of every matrix built over the vocabulary.
class Vocab {
 public:
  Vocab() = default;

  /// Labels must already be normalized; throws DuplicateLabel on repeats.
  explicit Vocab(std::vector<std::string> labels);

  /// Normalizes each raw label first.
  static Vocab from_raw(const std::vector<std::string>& raw);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }

  std::optional<std::size_t> find(std::string_view normalized) const;
  /// Throws UnknownLabel.
  std::size_t index_of(std::string_view normalized) const;
  bool contains(std::string_view normalized) const { return find(normalized).has_value(); }

  friend bool operator==(const Vocab& a, const Vocab& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Labeled vectors over a vocabulary, one row per label.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  /// Validates: rows == |vocab|, d >= 1, finite entries, no all-zero row.
  EmbeddingSet(Vocab vocab, Eigen::MatrixXd vectors, std::string source_tag = {});

  const Vocab& vocab() const noexcept { return vocab_; }
  const Eigen::MatrixXd& vectors() const noexcept { return vectors_; }
  std::size_t size() const noexcept { return vocab_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }
  const std::string& source_tag() const noexcept { return source_tag_; }

  /// Restricts/reorders to `order`; every label must be present.
  EmbeddingSet select(const Vocab& order) const;

 private:
  Vocab vocab_;
  Eigen::MatrixXd vectors_;
  std::string source_tag_;
};

enum class VectorFormat { Jsonl, Csv };

/// Picks the format from the file extension (.csv, else JSONL).
VectorFormat format_for(const std::filesystem::path& path);

EmbeddingSet load_embeddings(const std::filesystem::path& path, VectorFormat format);
EmbeddingSet load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path, VectorFormat format);

/// Restricts every set to the labels common to all of them, in the first
/// set's order. Throws NoCommonVocab when the intersection is empty.
std::vector<EmbeddingSet> align(const std::vector<EmbeddingSet>& sets);

struct Pile {
  std::string name;
  std::vector<std::string> members;  // normalized, in file order
};

struct PileSorting {
  std::string group_id;
  std::vector<Pile> piles;

  /// Throws UnknownLabel for the first member missing from `vocab`.
  void validate_against(const Vocab& vocab) const;
};

/// Checks disjointness, non-empty piles and unique pile names.
PileSorting make_pile_sorting(std::string group_id, std::vector<Pile> piles);

PileSorting load_piles(const std::filesystem::path& path);
void save_piles(const PileSorting& piles, const std::filesystem::path& path);

struct PerfTermRow {
  std::string performance_id;
  std::string term;
  // Number of times the pair occurred in the source table.
  std::size_t count = 1;
};

/// Performance/term co-occurrence records. Pairs are unique; repeated input
/// rows are folded into `count`.
struct PerfTermTable {
  std::vector<PerfTermRow> rows;

  void validate_against(const Vocab& terms) const;
  /// Sorted, unique performance ids.
  std::vector<std::string> performance_ids() const;
  /// Sorted, unique terms.
  std::vector<std::string> terms() const;
};

PerfTermTable make_perf_table(const std::vector<std::pair<std::string, std::string>>& raw_rows);
PerfTermTable load_perf_table(const std::filesystem::path& path);
void save_perf_table(const PerfTermTable& table, const std::filesystem::path& path);

}  // namespace simaudit
