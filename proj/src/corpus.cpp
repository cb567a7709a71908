#include "simaudit/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "simaudit/error.hpp"
#include "simaudit/report_io.hpp"

namespace simaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

icu::UnicodeString nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) fail(Errc::NumericalFailure, "ICU NFC normalizer unavailable");
  icu::UnicodeString out = norm->normalize(s, status);
  if (U_FAILURE(status)) fail(Errc::BadValue, "label is not valid Unicode");
  return out;
}

icu::UnicodeString trim_white(const icu::UnicodeString& s) {
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end) {
    UChar32 c = s.char32At(begin);
    if (!u_isUWhiteSpace(c)) break;
    begin += U16_LENGTH(c);
  }
  while (end > begin) {
    int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  return icu::UnicodeString(s, begin, end - begin);
}

}  // namespace

std::string normalize_label(std::string_view raw) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  s = trim_white(nfc(s));
  s.foldCase(U_FOLD_CASE_DEFAULT);
  s = nfc(s);
  std::string out;
  s.toUTF8String(out);
  return out;
}

// ---- Vocab -----------------------------------------------------------------

Vocab::Vocab(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) fail(Errc::DuplicateLabel, "'" + labels_[i] + "'");
  }
}

Vocab Vocab::from_raw(const std::vector<std::string>& raw) {
  std::vector<std::string> labels;
  labels.reserve(raw.size());
  for (const auto& r : raw) labels.push_back(normalize_label(r));
  return Vocab(std::move(labels));
}

std::optional<std::size_t> Vocab::find(std::string_view normalized) const {
  auto it = index_.find(std::string(normalized));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocab::index_of(std::string_view normalized) const {
  auto idx = find(normalized);
  if (!idx) fail(Errc::UnknownLabel, "'" + std::string(normalized) + "'");
  return *idx;
}

// ---- EmbeddingSet ----------------------------------------------------------

EmbeddingSet::EmbeddingSet(Vocab vocab, Eigen::MatrixXd vectors, std::string source_tag)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)), source_tag_(std::move(source_tag)) {
  if (static_cast<std::size_t>(vectors_.rows()) != vocab_.size())
    fail(Errc::DimensionMismatch, "vector count does not match vocabulary size");
  if (vectors_.cols() < 1) fail(Errc::DimensionMismatch, "embedding dimension must be >= 1");
  for (Eigen::Index i = 0; i < vectors_.rows(); ++i) {
    if (!vectors_.row(i).allFinite())
      fail(Errc::BadValue, "non-finite entry for '" + vocab_[static_cast<std::size_t>(i)] + "'");
    if (vectors_.row(i).cwiseAbs().maxCoeff() == 0.0)
      fail(Errc::ZeroVector, "all-zero vector for '" + vocab_[static_cast<std::size_t>(i)] + "'");
  }
}

EmbeddingSet EmbeddingSet::select(const Vocab& order) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(order.size()), vectors_.cols());
  for (std::size_t i = 0; i < order.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        vectors_.row(static_cast<Eigen::Index>(vocab_.index_of(order[i])));
  return EmbeddingSet(order, std::move(out), source_tag_);
}

// ---- embedding files -------------------------------------------------------

VectorFormat format_for(const fs::path& path) {
  return path.extension() == ".csv" ? VectorFormat::Csv : VectorFormat::Jsonl;
}

namespace {

EmbeddingSet build_set(const std::vector<std::string>& raw_labels,
                       const std::vector<std::vector<double>>& rows, std::string tag) {
  if (rows.empty()) fail(Errc::ParseError, "no records");
  const std::size_t d = rows.front().size();
  if (d == 0) fail(Errc::DimensionMismatch, "empty vector");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d)
      fail(Errc::DimensionMismatch, "record " + std::to_string(i + 1) + " has dimension " +
                                        std::to_string(rows[i].size()) + ", expected " +
                                        std::to_string(d));
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return EmbeddingSet(Vocab::from_raw(raw_labels), std::move(m), std::move(tag));
}

}  // namespace

EmbeddingSet load_embeddings(const fs::path& path, VectorFormat format) {
  const std::string text = read_file(path);
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  const auto lines = split_lines(text);

  if (format == VectorFormat::Jsonl) {
    std::size_t lineno = 0;
    for (const auto& line : lines) {
      ++lineno;
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      const std::string where = path.string() + ":" + std::to_string(lineno);
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::parse_error& e) {
        fail(Errc::ParseError, where + ": " + e.what());
      }
      if (!rec.is_object() || !rec.contains("label") || !rec["label"].is_string() ||
          !rec.contains("vector") || !rec["vector"].is_array())
        fail(Errc::ParseError, where + ": expected {\"label\": string, \"vector\": [numbers]}");
      std::vector<double> v;
      v.reserve(rec["vector"].size());
      for (const auto& x : rec["vector"]) {
        if (!x.is_number()) fail(Errc::BadValue, where + ": non-numeric vector entry");
        const double value = x.get<double>();
        if (!std::isfinite(value)) fail(Errc::BadValue, where + ": non-finite vector entry");
        v.push_back(value);
      }
      labels.push_back(rec["label"].get<std::string>());
      rows.push_back(std::move(v));
    }
  } else {
    if (lines.empty()) fail(Errc::ParseError, path.string() + ": empty CSV");
    const auto header = split_csv_line(lines.front());
    if (header.size() < 2 || header.front() != "label")
      fail(Errc::ParseError, path.string() + ": header must be label,v0,...");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      auto fields = split_csv_line(lines[i]);
      std::vector<double> v;
      v.reserve(fields.size() - 1);
      for (std::size_t j = 1; j < fields.size(); ++j) v.push_back(parse_double(fields[j]));
      labels.push_back(fields.front());
      rows.push_back(std::move(v));
    }
  }
  return build_set(labels, rows, path.stem().string());
}

EmbeddingSet load_embeddings(const fs::path& path) { return load_embeddings(path, format_for(path)); }

void save_embeddings(const EmbeddingSet& set, const fs::path& path, VectorFormat format) {
  std::ostringstream out;
  const auto& m = set.vectors();
  if (format == VectorFormat::Jsonl) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      out << "{\"label\":" << json(set.vocab()[i]).dump() << ",\"vector\":[";
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << format_double(m(static_cast<Eigen::Index>(i), j));
      }
      out << "]}\n";
    }
  } else {
    out << "label";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ",v" << j;
    out << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
      out << csv_field(set.vocab()[i]);
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << ',' << format_double(m(static_cast<Eigen::Index>(i), j));
      out << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

std::vector<EmbeddingSet> align(const std::vector<EmbeddingSet>& sets) {
  if (sets.empty()) fail(Errc::InvalidArgument, "align needs at least one set");
  std::vector<std::string> common;
  for (const auto& label : sets.front().vocab().labels()) {
    bool everywhere = std::all_of(sets.begin() + 1, sets.end(),
                                  [&](const EmbeddingSet& s) { return s.vocab().contains(label); });
    if (everywhere) common.push_back(label);
  }
  if (common.empty()) fail(Errc::NoCommonVocab, "embedding sets share no labels");
  const Vocab shared(std::move(common));
  std::vector<EmbeddingSet> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(s.vocab() == shared ? s : s.select(shared));
  return out;
}

// ---- piles -----------------------------------------------------------------

void PileSorting::validate_against(const Vocab& vocab) const {
  for (const auto& pile : piles)
    for (const auto& m : pile.members)
      if (!vocab.contains(m))
        fail(Errc::UnknownLabel, "pile '" + pile.name + "' of group '" + group_id +
                                     "' contains unknown term '" + m + "'");
}

PileSorting make_pile_sorting(std::string group_id, std::vector<Pile> piles) {
  std::set<std::string> names;
  std::map<std::string, std::string> owner;
  for (auto& pile : piles) {
    if (pile.members.empty()) fail(Errc::BadValue, "pile '" + pile.name + "' is empty");
    if (!names.insert(pile.name).second)
      fail(Errc::DuplicateLabel, "pile name '" + pile.name + "' repeated in group '" + group_id + "'");
    std::vector<std::string> unique;
    for (auto& m : pile.members) {
      auto [it, inserted] = owner.emplace(m, pile.name);
      if (!inserted) {
        if (it->second != pile.name)
          fail(Errc::OverlappingPiles,
               "term '" + m + "' is in piles '" + it->second + "' and '" + pile.name + "'");
        continue;
      }
      unique.push_back(std::move(m));
    }
    pile.members = std::move(unique);
  }
  return PileSorting{std::move(group_id), std::move(piles)};
}

PileSorting load_piles(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(Errc::ParseError, path.string() + ": " + e.what());
  }
  try {
    std::vector<Pile> piles;
    for (const auto& p : doc.at("piles")) {
      Pile pile{p.at("name").get<std::string>(), {}};
      for (const auto& t : p.at("terms")) pile.members.push_back(normalize_label(t.get<std::string>()));
      piles.push_back(std::move(pile));
    }
    return make_pile_sorting(doc.at("group").get<std::string>(), std::move(piles));
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path.string() + ": " + e.what());
  }
}

void save_piles(const PileSorting& sorting, const fs::path& path) {
  json doc;
  doc["group"] = sorting.group_id;
  doc["piles"] = json::array();
  for (const auto& pile : sorting.piles)
    doc["piles"].push_back({{"name", pile.name}, {"terms", pile.members}});
  write_file_atomic(path, doc.dump(2) + "\n");
}

// ---- performance table ------------------------------------------------------

void PerfTermTable::validate_against(const Vocab& terms) const {
  for (const auto& row : rows)
    if (!terms.contains(row.term))
      fail(Errc::UnknownLabel, "performance '" + row.performance_id + "' uses unknown term '" +
                                   row.term + "'");
}

std::vector<std::string> PerfTermTable::performance_ids() const {
  std::set<std::string> ids;
  for (const auto& r : rows) ids.insert(r.performance_id);
  return {ids.begin(), ids.end()};
}

std::vector<std::string> PerfTermTable::terms() const {
  std::set<std::string> ts;
  for (const auto& r : rows) ts.insert(r.term);
  return {ts.begin(), ts.end()};
}

PerfTermTable make_perf_table(const std::vector<std::pair<std::string, std::string>>& raw_rows) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& [perf, term] : raw_rows) {
    auto key = std::make_pair(normalize_label(perf), normalize_label(term));
    if (key.first.empty() || key.second.empty())
      fail(Errc::BadValue, "empty performance id or term");
    ++counts[key];
  }
  PerfTermTable table;
  table.rows.reserve(counts.size());
  for (const auto& [key, n] : counts) table.rows.push_back({key.first, key.second, n});
  return table;
}

PerfTermTable load_perf_table(const fs::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) fail(Errc::ParseError, path.string() + ": empty table");
  const auto header = split_csv_line(lines.front());
  if (header.size() != 2 || header[0] != "performance_id" || header[1] != "term")
    fail(Errc::ParseError, path.string() + ": header must be performance_id,term");
  std::vector<std::pair<std::string, std::string>> raw;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split_csv_line(lines[i]);
    if (fields.size() != 2)
      fail(Errc::ParseError, path.string() + ":" + std::to_string(i + 1) + ": expected 2 fields");
    raw.emplace_back(std::move(fields[0]), std::move(fields[1]));
  }
  return make_perf_table(raw);
}

void save_perf_table(const PerfTermTable& table, const fs::path& path) {
  std::ostringstream out;
  out << "performance_id,term\n";
  for (const auto& row : table.rows)
    for (std::size_t c = 0; c < row.count; ++c)
      out << csv_field(row.performance_id) << ',' << csv_field(row.term) << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace simaudit
