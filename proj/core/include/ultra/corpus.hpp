#pragma once

#include "ultra/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ultra {

struct Document {
  std::string id;
  std::string text;
};

/// Ordered documents with unique ids.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  [[nodiscard]] const std::vector<Document>& documents() const noexcept { return documents_; }
  [[nodiscard]] std::size_t size() const noexcept { return documents_.size(); }

 private:
  std::vector<Document> documents_;
};

/// Lower-cased maximal runs of letters, keeping apostrophes that sit
/// between two letters. ASCII letters are case-folded; bytes of multi-byte
/// UTF-8 sequences count as letters and are kept verbatim.
std::vector<std::string> tokenize(std::string_view text);

struct TermDocMatrix {
  FrequencyMatrix counts;  ///< documents x vocabulary, raw token counts
  Labels vocabulary;       ///< by descending corpus frequency, ties alphabetical
  Labels dropped_documents;
  std::vector<std::string> warnings;
};

/// Document x term counts over the `top_k` most frequent tokens.
/// Documents containing none of them are dropped and listed.
TermDocMatrix build_term_doc(const Corpus& corpus, std::size_t top_k);

/// rows x cols matrix of uniform [0, 1) values from a SplitMix64 stream,
/// filled row-major.
FrequencyMatrix random_mirror(Index rows, Index cols, std::uint64_t seed);

/// Either a directory of .txt files (id = file name, sorted) or a single
/// file split on `===DOC <id>===` lines.
Corpus load_corpus(const std::filesystem::path& path);

/// Parses the `===DOC <id>===` separated format.
Corpus parse_corpus(std::istream& in);

}  // namespace ultra
