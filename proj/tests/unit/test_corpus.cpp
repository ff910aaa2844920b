#include "support/oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ultra;

namespace {

using Tokens = std::vector<std::string>;

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ultra-corpus-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("corpus");

TEST_CASE("tokenizer rules") {
  CHECK(tokenize("Tyler's car, ROAD!") == Tokens{"tyler's", "car", "road"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a b a") == Tokens{"a", "b", "a"});
  CHECK(tokenize("'quoted' dogs' x'y 42nd well-known") ==
        Tokens{"quoted", "dogs", "x'y", "nd", "well", "known"});
  CHECK(tokenize("Caf\xc3\xa9 NA\xc3\x8fVE") == Tokens{"caf\xc3\xa9", "na\xc3\x8fve"});
}

TEST_CASE("tokenizer is idempotent on its own output") {
  const std::string text = "It's a DREAM: I was flying, then falling... O'Brien's dog didn't bark!";
  const Tokens once = tokenize(text);
  std::string joined;
  for (const auto& t : once) joined += t + " ";
  CHECK(tokenize(joined) == once);
}

TEST_CASE("term-document counts with tie ordering") {
  const Corpus c({{"d1", "a a b"}, {"d2", "b c"}});
  const TermDocMatrix t = build_term_doc(c, 2);
  CHECK(t.vocabulary == Labels{"a", "b"});
  Eigen::MatrixXd want(2, 2);
  want << 2, 1, 0, 1;
  CHECK(t.counts.values() == want);
  CHECK(t.counts.row_labels() == Labels{"d1", "d2"});
  CHECK(t.warnings.empty());
}

TEST_CASE("term-document edge cases") {
  const Corpus c({{"d1", "a a b"}, {"d2", "b c"}});
  const TermDocMatrix all = build_term_doc(c, 10);
  CHECK(all.vocabulary == Labels{"a", "b", "c"});
  CHECK(all.warnings.size() == 1);

  const TermDocMatrix single = build_term_doc(Corpus(std::vector<Document>{{"only", "x y z x"}}), 2);
  CHECK(single.counts.rows() == 1);
  CHECK(single.counts.cols() == 2);

  const TermDocMatrix dropped = build_term_doc(Corpus({{"d1", "a a a"}, {"d2", "zzz"}}), 1);
  CHECK(dropped.dropped_documents == Labels{"d2"});
  CHECK(dropped.counts.rows() == 1);
  CHECK_FALSE(dropped.warnings.empty());

  CHECK_THROWS_AS(build_term_doc(Corpus{}, 5), ArgumentError);
  CHECK_THROWS_AS(Corpus({{"x", ""}, {"x", ""}}), ValidationError);
}

TEST_CASE("column sums equal corpus-wide token counts") {
  const Corpus c({{"a", "the cat sat on the mat"},
                  {"b", "The dog chased the cat; the cat ran."},
                  {"c", "Mat, mat, mat!"}});
  const TermDocMatrix t = build_term_doc(c, 5);
  std::map<std::string, double> counts;
  for (const auto& doc : c.documents()) {
    for (const auto& tok : tokenize(doc.text)) counts[tok] += 1.0;
  }
  for (Index j = 0; j < t.counts.cols(); ++j) {
    CHECK(t.counts.values().col(j).sum() == counts[t.vocabulary[static_cast<std::size_t>(j)]]);
  }
  CHECK(t.vocabulary.front() == "the");
  for (std::size_t j = 1; j < t.vocabulary.size(); ++j) {
    const double prev = counts[t.vocabulary[j - 1]];
    const double cur = counts[t.vocabulary[j]];
    CHECK((prev > cur || (prev == cur && t.vocabulary[j - 1] < t.vocabulary[j])));
  }
}

TEST_CASE("mirror matrix is seeded and platform independent") {
  const FrequencyMatrix m = random_mirror(139, 2000, 1);
  CHECK(m.rows() == 139);
  CHECK(m.cols() == 2000);
  CHECK(m.values()(0, 0) == 0.5665615751722809);
  CHECK(m.values()(0, 1) == 0.7457817572627011);
  CHECK(m.values()(0, 2) == 0.9710027535867962);
  CHECK(m.values().minCoeff() >= 0.0);
  CHECK(m.values().maxCoeff() < 1.0);
  CHECK(random_mirror(139, 2000, 1).values() == m.values());
  CHECK(random_mirror(139, 2000, 2).values() != m.values());
  CHECK(m.row_labels().front() == "R1");
  CHECK(m.col_labels().back() == "C2000");
  CHECK_THROWS_AS(random_mirror(1, 5, 1), ArgumentError);
}

TEST_CASE("separator-delimited corpus") {
  std::istringstream in("===DOC first===\nHello world\n===DOC second one===\r\nBye\n");
  const Corpus c = parse_corpus(in);
  REQUIRE(c.size() == 2);
  CHECK(c.documents()[0].id == "first");
  CHECK(c.documents()[1].id == "second one");
  CHECK(tokenize(c.documents()[0].text) == Tokens{"hello", "world"});

  std::istringstream stray("loose text\n===DOC a===\n");
  CHECK_THROWS_AS(parse_corpus(stray), IoError);
}

TEST_CASE("directory corpus") {
  const auto dir = scratch_dir("dir");
  std::ofstream(dir / "b.txt") << "Second report";
  std::ofstream(dir / "a.txt") << "First report";
  std::ofstream(dir / "notes.md") << "ignored";
  const Corpus c = load_corpus(dir);
  REQUIRE(c.size() == 2);
  CHECK(c.documents()[0].id == "a.txt");
  CHECK(c.documents()[1].id == "b.txt");

  std::ofstream(dir / "single.corpus") << "===DOC x===\ntext\n";
  CHECK(load_corpus(dir / "single.corpus").size() == 1);
  CHECK_THROWS_AS(load_corpus(dir / "missing"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
