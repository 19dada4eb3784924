#pragma once

// Template-based tagged corpus with a matching gazetteer.
//
// Entity names are pseudo-words drawn from the same syllable inventory as
// the filler noise placed next to them, and most test entities never occur
// in training. Context words reveal the entity type but not where the entity
// starts or ends; only the gazetteer pins down the boundaries.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexner/corpus.hpp"

namespace lexner {

struct SyntheticConfig {
  std::size_t train_sentences = 500;
  std::size_t dev_sentences = 100;
  std::size_t test_sentences = 200;
  std::size_t phrases_per_label = 32;
  std::size_t held_out_per_label = 12;  // appear only in dev/test
  double seen_in_test = 0.25;           // share of test entities drawn from the training pool
  double noise_rate = 0.5;              // chance that a noise slot holds a word
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  Dataset train;
  Dataset dev;
  Dataset test;
  std::vector<std::string> gazetteer;  // one phrase per entry, space-separated tokens
};

SyntheticCorpus generate_synthetic(const SyntheticConfig& config);

/// One phrase per line, the format read by load_lexicon.
void write_gazetteer(std::ostream& out, const std::vector<std::string>& phrases);

}  // namespace lexner
