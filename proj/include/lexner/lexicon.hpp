#pragma once

// Domain dictionary matching and the frequency-weighted BMES set encoding.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lexner/corpus.hpp"

namespace lexner {

using PhraseId = std::int32_t;

/// Placeholder entry for an empty BMES set.
inline constexpr PhraseId kNonePhrase = -1;

std::string to_lower_ascii(std::string_view s);

/// Phrase dictionary with a token-level prefix tree. Phrases are stored
/// lowercased; matching lowercases the sentence tokens.
class Lexicon {
 public:
  Lexicon() = default;
  /// Deduplicates after lowercasing; insertion order defines phrase ids.
  explicit Lexicon(const std::vector<std::vector<std::string>>& phrases);

  std::size_t size() const { return phrases_.size(); }
  const std::vector<std::string>& phrase_tokens(PhraseId id) const { return phrases_.at(static_cast<std::size_t>(id)); }
  std::string phrase_text(PhraseId id) const;
  std::size_t phrase_length(PhraseId id) const { return phrase_tokens(id).size(); }
  std::size_t max_phrase_length() const { return max_length_; }

  /// kNonePhrase when absent.
  PhraseId find(const std::vector<std::string>& tokens) const;

  struct Match {
    std::size_t start;
    std::size_t end;  // exclusive
    PhraseId phrase;
  };
  /// Every occurrence of every phrase in the (already lowercased) token list,
  /// ordered by start then end.
  std::vector<Match> find_all(const std::vector<std::string>& lowered) const;

 private:
  struct Node {
    std::unordered_map<std::string, std::int32_t> children;
    PhraseId terminal = kNonePhrase;
  };

  std::vector<std::vector<std::string>> phrases_;
  std::vector<Node> nodes_{1};
  std::size_t max_length_ = 0;
};

Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::string& path);

/// The four word sets of one token. A set holds kNonePhrase alone iff no
/// phrase matched in that role.
struct BmesWordSets {
  std::array<std::vector<PhraseId>, 4> sets;  // B, M, E, S

  const std::vector<PhraseId>& b() const { return sets[0]; }
  const std::vector<PhraseId>& m() const { return sets[1]; }
  const std::vector<PhraseId>& e() const { return sets[2]; }
  const std::vector<PhraseId>& s() const { return sets[3]; }

  bool operator==(const BmesWordSets&) const = default;
};

std::vector<BmesWordSets> match_bmes(const Sentence& sentence, const Lexicon& lexicon);
std::vector<BmesWordSets> match_bmes(const std::vector<std::string>& surfaces, const Lexicon& lexicon);

/// Occurrence counts over a statistics corpus. Occurrences properly
/// contained in an occurrence of another phrase in the same sentence are
/// not counted.
std::vector<std::int64_t> count_frequencies(const std::vector<Sentence>& corpus, const Lexicon& lexicon);

/// Smallest c >= 1 such that at least 10% of word types have count < c.
std::int64_t smoothing_constant(const std::map<std::string, std::int64_t>& word_counts);

struct LexiconStats {
  std::vector<std::int64_t> z;  // indexed by PhraseId
  std::int64_t c = 1;

  double weight(PhraseId id) const;  // z(w) + c, with z(NONE) = 0
};

/// Builds the statistics for a training/test pair: phrase counts come from
/// train + test, and c from the counts in that same corpus of the word types
/// that occur in training.
LexiconStats build_lexicon_stats(const Lexicon& lexicon, const std::vector<Sentence>& train,
                                 const std::vector<Sentence>& test);

/// One weighted entry of the set vector: block (0..3 for B/M/E/S), phrase,
/// and normalized weight (z+c)/Z.
struct SetVectorTerm {
  int block;
  PhraseId phrase;
  double weight;
};

/// Normalized weights of every entry of the four sets. Z sums over all
/// entries of all four sets (a phrase in two sets counts twice), so the
/// weights always total 1.
std::vector<SetVectorTerm> set_vector_terms(const BmesWordSets& sets, const LexiconStats& stats);

/// Phrase embedding lookup: row 0 is NONE, row id+1 is phrase id.
inline Eigen::Index phrase_row(PhraseId id) { return static_cast<Eigen::Index>(id) + 1; }

/// Concatenated B|M|E|S weighted set vector of 4 x phrase_dim, given the
/// phrase embedding matrix (phrase_dim x (phrases + 1), column per phrase).
Eigen::VectorXd set_vector(const BmesWordSets& sets, const LexiconStats& stats, const Eigen::MatrixXd& phrase_embeddings);

/// (B, M, E, S, O) indicator flags.
using ExSoftwordFlags = std::array<std::uint8_t, 5>;

ExSoftwordFlags exsoftword_flags(const BmesWordSets& sets);
std::vector<ExSoftwordFlags> exsoftword_flags(const Sentence& sentence, const Lexicon& lexicon);

struct LexiconReport {
  std::size_t phrase_count = 0;
  std::int64_t matched_occurrences = 0;  // every occurrence, covered or not
  std::int64_t counted_occurrences = 0;  // sum of z
  std::int64_t c = 1;
  std::vector<std::pair<std::string, std::int64_t>> top_phrases;
};

LexiconReport lexicon_report(const Lexicon& lexicon, const std::vector<Sentence>& train,
                             const std::vector<Sentence>& test, std::size_t top_k = 10);
void write_lexicon_report(std::ostream& out, const LexiconReport& report);

}  // namespace lexner
