#pragma once

#include <optional>
#include <vector>

#include "lexner/corpus.hpp"
#include "lexner/embeddings.hpp"
#include "lexner/lexicon.hpp"
#include "lexner/network.hpp"

namespace lexner {

/// Lexicon plus the frozen statistics used for set-vector weights.
struct LexiconArtifacts {
  Lexicon lexicon;
  LexiconStats stats;
};

/// The `cap` most frequent training words, ties by first occurrence. The LM
/// output classes are this vocabulary without <pad>, so there are size() - 1
/// of them and <unk> is class 0.
Vocab build_lm_vocab(const std::vector<Sentence>& train, int cap);
inline int lm_class_count(const Vocab& lm_words) { return static_cast<int>(lm_words.size()) - 1; }

/// Maps sentences to network inputs. Holds no mutable state.
class FeatureBuilder {
 public:
  FeatureBuilder(const Vocab& words, const Vocab& lm_words, const CharVocab& chars, LexiconMode mode,
                 const LexiconArtifacts* lexicon);

  SentenceFeatures build(const Sentence& sentence) const;
  std::vector<SentenceFeatures> build_all(const std::vector<Sentence>& sentences) const;

 private:
  const Vocab& words_;
  const Vocab& lm_words_;
  const CharVocab& chars_;
  LexiconMode mode_;
  const LexiconArtifacts* lexicon_;
};

/// LM output class of a word; out-of-cap words map to <unk> (class 0).
int lm_index(const Vocab& lm_words, const std::string& word);

std::vector<int> gold_indices(const Sentence& sentence, const TagScheme& scheme);

}  // namespace lexner
