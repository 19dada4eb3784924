#include "lexner/features.hpp"

#include <algorithm>
#include <unordered_map>

#include "lexner/error.hpp"

namespace lexner {

Vocab build_lm_vocab(const std::vector<Sentence>& train, int cap) {
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& s : train)
    for (const auto& t : s.tokens)
      if (counts[t.surface]++ == 0) order.push_back(t.surface);
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) { return counts[a] > counts[b]; });
  if (order.size() > static_cast<std::size_t>(cap)) order.resize(static_cast<std::size_t>(cap));
  return Vocab(order);
}

int lm_index(const Vocab& lm_words, const std::string& word) {
  // Shift past <pad> so that <unk> is class 0.
  return lm_words.lookup(word) - 1;
}

FeatureBuilder::FeatureBuilder(const Vocab& words, const Vocab& lm_words, const CharVocab& chars, LexiconMode mode,
                               const LexiconArtifacts* lexicon)
    : words_(words), lm_words_(lm_words), chars_(chars), mode_(mode), lexicon_(lexicon) {
  if (mode_ != LexiconMode::None && lexicon_ == nullptr)
    throw ConfigError("lexicon_mode " + std::string(to_string(mode_)) + " requires a lexicon");
}

SentenceFeatures FeatureBuilder::build(const Sentence& sentence) const {
  if (sentence.tokens.empty()) throw DataError("empty sentence");
  SentenceFeatures f;
  f.char_stream.push_back(CharVocab::kSep);
  for (const auto& token : sentence.tokens) {
    f.word_ids.push_back(words_.lookup(token.surface));
    f.lm_ids.push_back(lm_index(lm_words_, token.surface));
    f.word_start.push_back(static_cast<int>(f.char_stream.size()) - 1);
    for (const auto& ch : utf8_chars(token.surface)) f.char_stream.push_back(chars_.lookup(ch));
    f.word_end.push_back(static_cast<int>(f.char_stream.size()));
    f.char_stream.push_back(CharVocab::kSep);
  }
  if (mode_ == LexiconMode::None) return f;

  auto sets = match_bmes(sentence, lexicon_->lexicon);
  if (mode_ == LexiconMode::ExSoftword) {
    for (const auto& s : sets) f.lexicon_flags.push_back(exsoftword_flags(s));
  } else {
    for (const auto& s : sets) f.lexicon_terms.push_back(set_vector_terms(s, lexicon_->stats));
  }
  return f;
}

std::vector<SentenceFeatures> FeatureBuilder::build_all(const std::vector<Sentence>& sentences) const {
  std::vector<SentenceFeatures> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(build(s));
  return out;
}

std::vector<int> gold_indices(const Sentence& sentence, const TagScheme& scheme) {
  std::vector<int> out;
  out.reserve(sentence.size());
  for (const auto& t : sentence.tokens) {
    if (!t.gold_tag) throw DataError("sentence has no gold tags");
    out.push_back(scheme.index_of(*t.gold_tag));
  }
  return out;
}

}  // namespace lexner
