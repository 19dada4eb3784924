#pragma once

// A trained tagger: configuration, vocabularies, frozen lexicon statistics,
// and parameters, plus the versioned checkpoint container that stores them.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lexner/corpus.hpp"
#include "lexner/embeddings.hpp"
#include "lexner/eval.hpp"
#include "lexner/features.hpp"
#include "lexner/network.hpp"

namespace lexner {

struct Model {
  ModelConfig config;
  TagScheme scheme;
  Vocab words;
  Vocab lm_words;
  CharVocab chars;
  std::optional<LexiconArtifacts> lexicon;
  ModelParams params;

  FeatureBuilder feature_builder() const;
  /// Viterbi tag indices for one sentence (eval mode).
  std::vector<int> predict_indices(const SentenceFeatures& features) const;
  std::vector<std::string> predict(const Sentence& sentence) const;
};

/// Decodes every sentence and scores it against the gold tags.
EvalReport evaluate_model(const Model& model, const Dataset& dataset);

struct Checkpoint {
  static constexpr std::uint32_t kFormatVersion = 1;

  Model model;
  bool has_dev = false;
  double best_dev_f1 = 0.0;
  int epoch = 0;  // number of completed epochs when this model was captured
};

// Layout (all integers and floats little-endian):
//   8 bytes   magic "LEXNERCK"
//   u32       format version
//   u64       header length L
//   L bytes   UTF-8 JSON header: config, vocabularies, lexicon phrases with
//             counts and c, training summary, and the tensor directory
//             [{name, rows, cols}] in storage order
//   f64[]     every tensor, column-major, in directory order
void save_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
void save_checkpoint_file(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint_file(const std::string& path);

}  // namespace lexner
