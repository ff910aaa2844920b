#include "ultra/corpus.hpp"

#include "ultra/errors.hpp"
#include "ultra/triplets.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ultra {

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::set<std::string_view> seen;
  for (const auto& doc : documents_) {
    if (!seen.insert(doc.id).second) throw ValidationError("duplicate document id '" + doc.id + "'");
  }
}

namespace {

bool is_letter(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const std::size_t n = text.size();
  for (std::size_t p = 0; p < n; ++p) {
    const auto ch = static_cast<unsigned char>(text[p]);
    if (is_letter(ch)) {
      current += (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a')
                                          : static_cast<char>(ch);
    } else if (ch == '\'' && !current.empty() && p + 1 < n &&
               is_letter(static_cast<unsigned char>(text[p + 1]))) {
      current += '\'';
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TermDocMatrix build_term_doc(const Corpus& corpus, std::size_t top_k) {
  if (corpus.size() == 0) throw ArgumentError("corpus is empty");
  if (top_k == 0) throw ArgumentError("top_k must be at least 1");

  std::vector<std::unordered_map<std::string, double>> per_doc(corpus.size());
  std::map<std::string, std::uint64_t> totals;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto& token : tokenize(corpus.documents()[d].text)) {
      ++totals[token];
      per_doc[d][std::move(token)] += 1.0;
    }
  }

  std::vector<std::pair<std::string, std::uint64_t>> ranked(totals.begin(), totals.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  TermDocMatrix out;
  if (ranked.size() < top_k) {
    out.warnings.push_back("only " + std::to_string(ranked.size()) + " distinct tokens; using all");
  }
  const std::size_t k = std::min(top_k, ranked.size());
  if (k == 0) throw DegenerateInputError("corpus contains no tokens");
  for (std::size_t t = 0; t < k; ++t) out.vocabulary.push_back(ranked[t].first);

  Labels row_labels;
  std::vector<std::size_t> kept;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const bool any = std::any_of(out.vocabulary.begin(), out.vocabulary.end(),
                                 [&](const std::string& term) { return per_doc[d].contains(term); });
    const std::string& id = corpus.documents()[d].id;
    if (any) {
      kept.push_back(d);
      row_labels.push_back(id);
    } else {
      out.dropped_documents.push_back(id);
      out.warnings.push_back("document '" + id + "' has no vocabulary tokens; dropped");
    }
  }

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(static_cast<Index>(kept.size()),
                                                 static_cast<Index>(k));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto& doc = per_doc[kept[r]];
    for (std::size_t t = 0; t < k; ++t) {
      if (const auto it = doc.find(out.vocabulary[t]); it != doc.end()) {
        counts(static_cast<Index>(r), static_cast<Index>(t)) = it->second;
      }
    }
  }
  out.counts = FrequencyMatrix(std::move(counts), std::move(row_labels), out.vocabulary);
  return out;
}

FrequencyMatrix random_mirror(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 2 || cols < 2) throw ArgumentError("mirror dimensions must be at least 2 x 2");
  SplitMix64 rng(seed);
  Eigen::MatrixXd values(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) values(r, c) = rng.next_unit();
  }
  Labels row_labels;
  Labels col_labels;
  for (Index r = 0; r < rows; ++r) row_labels.push_back("R" + std::to_string(r + 1));
  for (Index c = 0; c < cols; ++c) col_labels.push_back("C" + std::to_string(c + 1));
  return FrequencyMatrix(std::move(values), std::move(row_labels), std::move(col_labels));
}

Corpus parse_corpus(std::istream& in) {
  constexpr std::string_view open = "===DOC ";
  constexpr std::string_view close = "===";
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view(line);
    if (view.starts_with(open) && view.size() > open.size() + close.size() &&
        view.ends_with(close)) {
      std::string_view id = view.substr(open.size(), view.size() - open.size() - close.size());
      while (!id.empty() && id.back() == ' ') id.remove_suffix(1);
      docs.push_back({std::string(id), {}});
      continue;
    }
    if (docs.empty()) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      throw IoError("corpus text appears before the first ===DOC <id>=== separator");
    }
    docs.back().text += line;
    docs.back().text += '\n';
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw IoError("cannot read " + file.string());
      std::ostringstream text;
      text << in.rdbuf();
      docs.push_back({file.filename().string(), text.str()});
    }
    if (docs.empty()) throw IoError("no .txt files in " + path.string());
    return Corpus(std::move(docs));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus " + path.string());
  return parse_corpus(in);
}

}  // namespace ultra
