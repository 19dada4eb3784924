#pragma once

// Character-aware BiLSTM encoder with language-model heads.
//
// A character BiLSTM reads the sentence as one stream in which every word is
// wrapped by boundary markers. The forward state at the marker after word i
// and the backward state at the marker before word i form word i's character
// feature. That feature passes a tagging highway stack and joins the word
// embedding and the lexicon feature as the word BiLSTM input; separate highway
// stacks feed the next-word (forward) and previous-word (backward) LM heads.
//
// All matrices are column-per-position.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lexner/lexicon.hpp"

namespace lexner {

enum class LexiconMode { None, ExSoftword, SoftLexicon };

std::string_view to_string(LexiconMode mode);
LexiconMode parse_lexicon_mode(std::string_view text);

struct ModelConfig {
  int word_dim = 100;
  int char_dim = 30;
  int hidden = 300;  // both the character and the word LSTM
  int highway_depth = 1;
  double dropout = 0.5;
  int phrase_dim = 50;
  LexiconMode lexicon_mode = LexiconMode::SoftLexicon;
  int lm_vocab_cap = 5000;
  int tag_count = 0;

  // Fixed by the vocabularies a model is trained with.
  int word_vocab_size = 0;
  int char_vocab_size = 0;
  int lm_vocab_size = 0;  // capped LM words + <unk>
  int phrase_count = 0;   // lexicon phrases, excluding NONE

  int lexicon_dim() const;
  int char_feature_dim() const { return 2 * hidden; }
  int token_input_dim() const { return word_dim + char_feature_dim() + lexicon_dim(); }

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

struct LstmParams {
  Eigen::MatrixXd wx;  // 4H x in, gate blocks i, f, g, o
  Eigen::MatrixXd wh;  // 4H x H
  Eigen::MatrixXd b;   // 4H x 1
};

struct HighwayParams {
  Eigen::MatrixXd wh;  // transform
  Eigen::MatrixXd bh;
  Eigen::MatrixXd wt;  // gate
  Eigen::MatrixXd bt;
};

struct ModelParams {
  Eigen::MatrixXd char_emb;  // char_dim x chars
  LstmParams char_fwd;
  LstmParams char_bwd;
  std::vector<HighwayParams> highway_tag;     // 2H -> 2H
  std::vector<HighwayParams> highway_lm_fwd;  // H -> H
  std::vector<HighwayParams> highway_lm_bwd;  // H -> H
  Eigen::MatrixXd lm_fwd_w;  // V_lm x H
  Eigen::MatrixXd lm_fwd_b;
  Eigen::MatrixXd lm_bwd_w;
  Eigen::MatrixXd lm_bwd_b;
  Eigen::MatrixXd word_emb;    // word_dim x words
  Eigen::MatrixXd phrase_emb;  // phrase_dim x (phrases + 1); empty unless softlexicon
  LstmParams word_fwd;
  LstmParams word_bwd;
  Eigen::MatrixXd emit_w;  // K x 2H
  Eigen::MatrixXd emit_b;
  Eigen::MatrixXd transitions;  // (K+2) x (K+2)

  /// Visits every tensor with a stable dotted name, in a fixed order.
  template <typename F>
  void for_each(F&& f);
  template <typename F>
  void for_each(F&& f) const;

  ModelParams zeros_like() const;
  void set_zero();
  std::size_t parameter_count() const;
  bool all_finite() const;
};

ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

/// Per-sentence model inputs, produced by FeatureBuilder.
struct SentenceFeatures {
  std::vector<int> word_ids;
  std::vector<int> lm_ids;
  std::vector<int> char_stream;  // includes boundary markers
  std::vector<int> word_start;   // stream index of the marker before each word
  std::vector<int> word_end;     // stream index of the marker after each word
  std::vector<std::vector<SetVectorTerm>> lexicon_terms;  // softlexicon
  std::vector<ExSoftwordFlags> lexicon_flags;             // exsoftword

  std::size_t size() const { return word_ids.size(); }
};

struct EncodedSentence {
  Eigen::MatrixXd inputs;         // token_input_dim x n, after dropout
  Eigen::MatrixXd emissions;      // K x n
  Eigen::MatrixXd lm_fwd_logits;  // V_lm x (n-1), column i predicts word i+1
  Eigen::MatrixXd lm_bwd_logits;  // V_lm x (n-1), column i predicts word i
};

struct ForwardOptions {
  bool train_mode = false;
  std::uint64_t dropout_seed = 0;
};

/// y = t * relu(Wh x + bh) + (1 - t) * x, t = sigmoid(Wt x + bt).
Eigen::VectorXd highway_forward(const Eigen::VectorXd& x, const HighwayParams& layer);

EncodedSentence encode_sentence(const SentenceFeatures& features, const ModelParams& params,
                                const ModelConfig& config, const ForwardOptions& options = {});

/// Mean cross-entropy per direction, summed over the two directions.
/// Forward targets are lm_ids[1..n), backward targets lm_ids[0..n-1).
double lm_loss(const Eigen::MatrixXd& fwd_logits, const Eigen::MatrixXd& bwd_logits, const std::vector<int>& lm_ids);

struct LossBreakdown {
  double crf = 0.0;
  double lm = 0.0;
  double total = 0.0;  // crf + lm_weight * lm
};

/// Joint objective of one sentence. When `grads` is non-null, adds
/// grad_scale * d(total)/d(params) into it.
LossBreakdown sentence_loss(const SentenceFeatures& features, const std::vector<int>& gold, const ModelParams& params,
                            const ModelConfig& config, const ForwardOptions& options, double lm_weight,
                            ModelParams* grads = nullptr, double grad_scale = 1.0);

// ---------------------------------------------------------------------------

template <typename F>
void ModelParams::for_each(F&& f) {
  auto lstm = [&f](const std::string& prefix, LstmParams& p) {
    f(prefix + ".wx", p.wx);
    f(prefix + ".wh", p.wh);
    f(prefix + ".b", p.b);
  };
  auto highway = [&f](const std::string& prefix, std::vector<HighwayParams>& layers) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      auto name = prefix + "." + std::to_string(i);
      f(name + ".wh", layers[i].wh);
      f(name + ".bh", layers[i].bh);
      f(name + ".wt", layers[i].wt);
      f(name + ".bt", layers[i].bt);
    }
  };
  f(std::string("char_emb"), char_emb);
  lstm("char_fwd", char_fwd);
  lstm("char_bwd", char_bwd);
  highway("highway_tag", highway_tag);
  highway("highway_lm_fwd", highway_lm_fwd);
  highway("highway_lm_bwd", highway_lm_bwd);
  f(std::string("lm_fwd.w"), lm_fwd_w);
  f(std::string("lm_fwd.b"), lm_fwd_b);
  f(std::string("lm_bwd.w"), lm_bwd_w);
  f(std::string("lm_bwd.b"), lm_bwd_b);
  f(std::string("word_emb"), word_emb);
  f(std::string("phrase_emb"), phrase_emb);
  lstm("word_fwd", word_fwd);
  lstm("word_bwd", word_bwd);
  f(std::string("emit.w"), emit_w);
  f(std::string("emit.b"), emit_b);
  f(std::string("crf.transitions"), transitions);
}

template <typename F>
void ModelParams::for_each(F&& f) const {
  const_cast<ModelParams*>(this)->for_each(
      [&f](const std::string& name, Eigen::MatrixXd& m) { f(name, static_cast<const Eigen::MatrixXd&>(m)); });
}

}  // namespace lexner
