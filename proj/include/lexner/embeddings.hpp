#pragma once

// Pretrained vectors, vocabularies, and phrase embedding initialization.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lexner/corpus.hpp"
#include "lexner/lexicon.hpp"

namespace lexner {

/// Keyed vectors of one dimension, stored column-wise in insertion order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }
  const std::vector<std::string>& keys() const { return keys_; }

  /// Returns false (and leaves the table unchanged) when the key exists.
  bool add(const std::string& key, const Eigen::Ref<const Eigen::VectorXd>& vec);
  bool contains(const std::string& key) const { return index_.count(key) > 0; }
  /// Exact key first, then its lowercase form; -1 when neither exists.
  std::int64_t lookup(const std::string& key) const;
  Eigen::VectorXd vector(std::size_t row) const;

  /// dim x size view; valid until the next add().
  Eigen::MatrixXd matrix() const;

 private:
  int dim_ = 0;
  std::vector<std::string> keys_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::int64_t> index_;
};

EmbeddingTable load_pretrained(std::istream& in, int expected_dim);
EmbeddingTable load_pretrained_file(const std::string& path, int expected_dim);

inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kSepToken = "<sep>";

/// Word index: 0 = <pad>, 1 = <unk>, then words in first-seen order.
class Vocab {
 public:
  Vocab();
  explicit Vocab(const std::vector<std::string>& words);  // words exclude the reserved entries

  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(int index) const { return words_.at(static_cast<std::size_t>(index)); }

  /// Returns the existing index if present.
  int add(const std::string& word);
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  /// Exact, then lowercase, then <unk>.
  int lookup(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

/// Character (UTF-8 code unit sequence) index: 0 = <pad>, 1 = <unk>,
/// 2 = word-boundary marker.
class CharVocab {
 public:
  CharVocab();
  explicit CharVocab(const std::vector<std::string>& chars);

  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kSep = 2;

  std::size_t size() const { return chars_.size(); }
  const std::vector<std::string>& chars() const { return chars_; }
  int add(const std::string& ch);
  int lookup(const std::string& ch) const;

  static CharVocab build(const std::vector<Sentence>& sentences);

 private:
  std::vector<std::string> chars_;
  std::unordered_map<std::string, int> index_;
};

/// Splits a UTF-8 string into one string per code point. Stray bytes become
/// single-byte entries.
std::vector<std::string> utf8_chars(std::string_view text);

/// Uniform draws from mt19937_64 using the top 53 bits directly, so values
/// do not depend on the standard library's distribution implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double symmetric(double bound) { return (2.0 * unit() - 1.0) * bound; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct WordEmbeddings {
  Vocab vocab;
  Eigen::MatrixXd table;  // dim x vocab.size()
};

/// Vocabulary over training words plus pretrained words seen in the other
/// splits. Pretrained rows are copied; everything else (including <unk>) is
/// drawn uniform in +-sqrt(3/dim). <pad> is zero.
WordEmbeddings build_vocab(const std::vector<Sentence>& train, const std::vector<Sentence>& other_splits,
                           const EmbeddingTable& pretrained, int dim, std::uint64_t seed);

/// Column 0 is NONE (uniform +-sqrt(3/phrase_dim)); column id+1 is the mean
/// of the phrase's word vectors truncated to phrase_dim.
Eigen::MatrixXd init_phrase_embeddings(const Lexicon& lexicon, const WordEmbeddings& words, int phrase_dim,
                                       std::uint64_t seed);

}  // namespace lexner
