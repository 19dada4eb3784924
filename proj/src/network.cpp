#include "lexner/network.hpp"

#include <cmath>

#include "lexner/crf.hpp"
#include "lexner/embeddings.hpp"
#include "lexner/error.hpp"

namespace lexner {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(LexiconMode mode) {
  switch (mode) {
    case LexiconMode::None: return "none";
    case LexiconMode::ExSoftword: return "exsoftword";
    case LexiconMode::SoftLexicon: return "softlexicon";
  }
  return "none";
}

LexiconMode parse_lexicon_mode(std::string_view text) {
  if (text == "none") return LexiconMode::None;
  if (text == "exsoftword") return LexiconMode::ExSoftword;
  if (text == "softlexicon") return LexiconMode::SoftLexicon;
  throw ConfigError("unknown lexicon_mode '" + std::string(text) + "' (none|exsoftword|softlexicon)");
}

int ModelConfig::lexicon_dim() const {
  switch (lexicon_mode) {
    case LexiconMode::None: return 0;
    case LexiconMode::ExSoftword: return 5;
    case LexiconMode::SoftLexicon: return 4 * phrase_dim;
  }
  return 0;
}

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(word_dim, "word_dim");
  positive(char_dim, "char_dim");
  positive(hidden, "hidden");
  positive(highway_depth, "highway_depth");
  positive(phrase_dim, "phrase_dim");
  positive(lm_vocab_cap, "lm_vocab_cap");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0, 1)");
  if (lexicon_mode == LexiconMode::SoftLexicon && phrase_dim > word_dim)
    throw ConfigError("phrase_dim must not exceed word_dim");
}

// ---------------------------------------------------------------------------
// Parameter containers

ModelParams ModelParams::zeros_like() const {
  ModelParams out = *this;
  out.set_zero();
  return out;
}

void ModelParams::set_zero() {
  for_each([](const std::string&, MatrixXd& m) { m.setZero(); });
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&n](const std::string&, const MatrixXd& m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each([&ok](const std::string&, const MatrixXd& m) { ok = ok && m.allFinite(); });
  return ok;
}

namespace {

void fill_uniform(MatrixXd& m, Index rows, Index cols, double bound, UniformSource& rng) {
  m.resize(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.symmetric(bound);
}

void fill_glorot(MatrixXd& m, Index rows, Index cols, UniformSource& rng) {
  fill_uniform(m, rows, cols, std::sqrt(6.0 / static_cast<double>(rows + cols)), rng);
}

LstmParams init_lstm(Index in, Index hidden, UniformSource& rng) {
  LstmParams p;
  fill_glorot(p.wx, 4 * hidden, in, rng);
  fill_glorot(p.wh, 4 * hidden, hidden, rng);
  p.b = MatrixXd::Zero(4 * hidden, 1);
  p.b.block(hidden, 0, hidden, 1).setOnes();
  return p;
}

std::vector<HighwayParams> init_highway(int depth, Index dim, UniformSource& rng) {
  std::vector<HighwayParams> layers(static_cast<std::size_t>(depth));
  for (auto& l : layers) {
    fill_glorot(l.wh, dim, dim, rng);
    l.bh = MatrixXd::Zero(dim, 1);
    fill_glorot(l.wt, dim, dim, rng);
    l.bt = MatrixXd::Zero(dim, 1);
  }
  return layers;
}

}  // namespace

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.tag_count <= 0 || config.word_vocab_size <= 0 || config.char_vocab_size <= 0 || config.lm_vocab_size <= 0)
    throw ConfigError("model vocabularies and tag count must be set before initialization");
  UniformSource rng(seed);
  const Index h = config.hidden;
  ModelParams p;
  fill_uniform(p.char_emb, config.char_dim, config.char_vocab_size, std::sqrt(3.0 / config.char_dim), rng);
  p.char_fwd = init_lstm(config.char_dim, h, rng);
  p.char_bwd = init_lstm(config.char_dim, h, rng);
  p.highway_tag = init_highway(config.highway_depth, 2 * h, rng);
  p.highway_lm_fwd = init_highway(config.highway_depth, h, rng);
  p.highway_lm_bwd = init_highway(config.highway_depth, h, rng);
  fill_glorot(p.lm_fwd_w, config.lm_vocab_size, h, rng);
  p.lm_fwd_b = MatrixXd::Zero(config.lm_vocab_size, 1);
  fill_glorot(p.lm_bwd_w, config.lm_vocab_size, h, rng);
  p.lm_bwd_b = MatrixXd::Zero(config.lm_vocab_size, 1);
  fill_uniform(p.word_emb, config.word_dim, config.word_vocab_size, std::sqrt(3.0 / config.word_dim), rng);
  p.word_emb.col(0).setZero();
  if (config.lexicon_mode == LexiconMode::SoftLexicon)
    fill_uniform(p.phrase_emb, config.phrase_dim, config.phrase_count + 1, std::sqrt(3.0 / config.phrase_dim), rng);
  p.word_fwd = init_lstm(config.token_input_dim(), h, rng);
  p.word_bwd = init_lstm(config.token_input_dim(), h, rng);
  fill_glorot(p.emit_w, config.tag_count, 2 * h, rng);
  p.emit_b = MatrixXd::Zero(config.tag_count, 1);
  p.transitions = crf::initial_transitions(config.tag_count);
  return p;
}

// ---------------------------------------------------------------------------
// Layers

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct LstmTrace {
  MatrixXd x;      // in x T
  MatrixXd gates;  // 4H x T, post-activation (i, f, g, o)
  MatrixXd c;      // H x T
  MatrixXd h;      // H x T
  bool reverse = false;
};

LstmTrace lstm_forward(const LstmParams& p, MatrixXd x, bool reverse) {
  const Index hdim = p.wh.cols();
  const Index steps = x.cols();
  LstmTrace tr;
  tr.reverse = reverse;
  tr.gates = p.wx * x;
  tr.gates.colwise() += p.b.col(0);
  tr.x = std::move(x);
  tr.c.resize(hdim, steps);
  tr.h.resize(hdim, steps);
  VectorXd h_prev = VectorXd::Zero(hdim);
  VectorXd c_prev = VectorXd::Zero(hdim);
  for (Index s = 0; s < steps; ++s) {
    const Index t = reverse ? steps - 1 - s : s;
    auto a = tr.gates.col(t);
    a.noalias() += p.wh * h_prev;
    for (Index k = 0; k < hdim; ++k) {
      a[k] = sigmoid(a[k]);
      a[hdim + k] = sigmoid(a[hdim + k]);
      a[2 * hdim + k] = std::tanh(a[2 * hdim + k]);
      a[3 * hdim + k] = sigmoid(a[3 * hdim + k]);
      const double c = a[hdim + k] * c_prev[k] + a[k] * a[2 * hdim + k];
      tr.c(k, t) = c;
      tr.h(k, t) = a[3 * hdim + k] * std::tanh(c);
    }
    h_prev = tr.h.col(t);
    c_prev = tr.c.col(t);
  }
  return tr;
}

// Returns d/dx; accumulates parameter gradients scaled by `scale`.
MatrixXd lstm_backward(const LstmParams& p, const LstmTrace& tr, const MatrixXd& dh_out, LstmParams& g, double scale) {
  const Index hdim = p.wh.cols();
  const Index steps = tr.x.cols();
  MatrixXd da(4 * hdim, steps);
  MatrixXd h_prev_all = MatrixXd::Zero(hdim, steps);
  VectorXd dh_next = VectorXd::Zero(hdim);
  VectorXd dc_next = VectorXd::Zero(hdim);
  for (Index s = steps - 1; s >= 0; --s) {
    const Index t = tr.reverse ? steps - 1 - s : s;
    const bool first = s == 0;
    const Index prev = tr.reverse ? t + 1 : t - 1;
    const auto gates = tr.gates.col(t);
    VectorXd dh = dh_out.col(t) + dh_next;
    for (Index k = 0; k < hdim; ++k) {
      const double ig = gates[k], fg = gates[hdim + k], gg = gates[2 * hdim + k], og = gates[3 * hdim + k];
      const double c = tr.c(k, t);
      const double tc = std::tanh(c);
      const double c_prev = first ? 0.0 : tr.c(k, prev);
      const double dc = dh[k] * og * (1.0 - tc * tc) + dc_next[k];
      da(k, t) = dc * gg * ig * (1.0 - ig);
      da(hdim + k, t) = dc * c_prev * fg * (1.0 - fg);
      da(2 * hdim + k, t) = dc * ig * (1.0 - gg * gg);
      da(3 * hdim + k, t) = dh[k] * tc * og * (1.0 - og);
      dc_next[k] = dc * fg;
    }
    if (!first) h_prev_all.col(t) = tr.h.col(prev);
    dh_next.noalias() = p.wh.transpose() * da.col(t);
  }
  g.wx.noalias() += scale * da * tr.x.transpose();
  g.wh.noalias() += scale * da * h_prev_all.transpose();
  g.b.col(0) += scale * da.rowwise().sum();
  return p.wx.transpose() * da;
}

struct HighwayTrace {
  MatrixXd x;
  MatrixXd pre;   // Wh x + bh
  MatrixXd gate;  // t
};

MatrixXd highway_layer(const HighwayParams& p, const MatrixXd& x, HighwayTrace* trace) {
  MatrixXd pre = p.wh * x;
  pre.colwise() += p.bh.col(0);
  MatrixXd gate = p.wt * x;
  gate.colwise() += p.bt.col(0);
  gate = gate.unaryExpr([](double v) { return sigmoid(v); });
  MatrixXd y = gate.cwiseProduct(pre.cwiseMax(0.0)) + (1.0 - gate.array()).matrix().cwiseProduct(x);
  if (trace) *trace = {x, std::move(pre), std::move(gate)};
  return y;
}

MatrixXd highway_layer_backward(const HighwayParams& p, const HighwayTrace& tr, const MatrixXd& dy, HighwayParams& g,
                                double scale) {
  const MatrixXd relu = tr.pre.cwiseMax(0.0);
  MatrixXd dgate = dy.cwiseProduct(relu - tr.x);
  dgate = dgate.cwiseProduct(tr.gate.cwiseProduct((1.0 - tr.gate.array()).matrix()));
  MatrixXd dpre = dy.cwiseProduct(tr.gate);
  dpre = dpre.cwiseProduct((tr.pre.array() > 0.0).cast<double>().matrix());
  g.wh.noalias() += scale * dpre * tr.x.transpose();
  g.bh.col(0) += scale * dpre.rowwise().sum();
  g.wt.noalias() += scale * dgate * tr.x.transpose();
  g.bt.col(0) += scale * dgate.rowwise().sum();
  MatrixXd dx = dy.cwiseProduct((1.0 - tr.gate.array()).matrix());
  dx.noalias() += p.wh.transpose() * dpre;
  dx.noalias() += p.wt.transpose() * dgate;
  return dx;
}

MatrixXd highway_stack(const std::vector<HighwayParams>& layers, MatrixXd x, std::vector<HighwayTrace>* traces) {
  if (traces) traces->resize(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) x = highway_layer(layers[i], x, traces ? &(*traces)[i] : nullptr);
  return x;
}

MatrixXd highway_stack_backward(const std::vector<HighwayParams>& layers, const std::vector<HighwayTrace>& traces,
                                MatrixXd dy, std::vector<HighwayParams>& g, double scale) {
  for (std::size_t i = layers.size(); i-- > 0;) dy = highway_layer_backward(layers[i], traces[i], dy, g[i], scale);
  return dy;
}

MatrixXd dropout_mask(Index rows, Index cols, double p, UniformSource& rng) {
  MatrixXd mask(rows, cols);
  const double keep_scale = 1.0 / (1.0 - p);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) mask(i, j) = rng.unit() < p ? 0.0 : keep_scale;
  return mask;
}

// Cross-entropy averaged over columns; optionally writes d/dlogits (already
// divided by the column count).
double mean_cross_entropy(const MatrixXd& logits, const std::vector<int>& targets, std::size_t offset, MatrixXd* dlogits) {
  const Index cols = logits.cols();
  if (cols == 0) return 0.0;
  double total = 0.0;
  if (dlogits) dlogits->resize(logits.rows(), cols);
  for (Index j = 0; j < cols; ++j) {
    const auto col = logits.col(j);
    const double m = col.maxCoeff();
    const double lse = m + std::log((col.array() - m).exp().sum());
    const int target = targets[offset + static_cast<std::size_t>(j)];
    total += lse - col[target];
    if (dlogits) {
      dlogits->col(j) = (col.array() - lse).exp() / static_cast<double>(cols);
      (*dlogits)(target, j) -= 1.0 / static_cast<double>(cols);
    }
  }
  return total / static_cast<double>(cols);
}

MatrixXd gather_columns(const MatrixXd& table, const std::vector<int>& ids) {
  MatrixXd out(table.rows(), static_cast<Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) out.col(static_cast<Index>(j)) = table.col(ids[j]);
  return out;
}

void scatter_add_columns(MatrixXd& table, const std::vector<int>& ids, const MatrixXd& d, double scale) {
  for (std::size_t j = 0; j < ids.size(); ++j) table.col(ids[j]) += scale * d.col(static_cast<Index>(j));
}

// Everything the backward pass needs from one forward evaluation.
struct ForwardTrace {
  LstmTrace char_f, char_b;
  MatrixXd char_feat;  // 2H x n, before highway
  std::vector<HighwayTrace> hw_tag, hw_lmf, hw_lmb;
  MatrixXd lmf_hidden, lmb_hidden;  // H x (n-1), after highway
  MatrixXd input_mask, output_mask;
  LstmTrace word_f, word_b;
  MatrixXd word_out;  // 2H x n, after dropout
  EncodedSentence encoded;
};

void check_features(const SentenceFeatures& f, const ModelConfig& config) {
  const std::size_t n = f.size();
  if (n == 0) throw DataError("cannot encode an empty sentence");
  if (f.lm_ids.size() != n || f.word_start.size() != n || f.word_end.size() != n)
    throw DataError("sentence feature lengths are inconsistent");
  switch (config.lexicon_mode) {
    case LexiconMode::None:
      if (!f.lexicon_terms.empty() || !f.lexicon_flags.empty())
        throw DataError("lexicon features supplied to a model without lexicon input");
      break;
    case LexiconMode::ExSoftword:
      if (f.lexicon_flags.size() != n) throw DataError("exsoftword flags missing or of wrong length");
      break;
    case LexiconMode::SoftLexicon:
      if (f.lexicon_terms.size() != n) throw DataError("softlexicon set vectors missing or of wrong length");
      break;
  }
}

ForwardTrace forward(const SentenceFeatures& f, const ModelParams& p, const ModelConfig& config,
                     const ForwardOptions& options) {
  check_features(f, config);
  const Index n = static_cast<Index>(f.size());
  const Index h = config.hidden;
  ForwardTrace tr;

  MatrixXd chars = gather_columns(p.char_emb, f.char_stream);
  tr.char_f = lstm_forward(p.char_fwd, chars, false);
  tr.char_b = lstm_forward(p.char_bwd, std::move(chars), true);
  tr.char_feat.resize(2 * h, n);
  for (Index i = 0; i < n; ++i) {
    tr.char_feat.col(i).head(h) = tr.char_f.h.col(f.word_end[static_cast<std::size_t>(i)]);
    tr.char_feat.col(i).tail(h) = tr.char_b.h.col(f.word_start[static_cast<std::size_t>(i)]);
  }
  MatrixXd char_tag = highway_stack(p.highway_tag, tr.char_feat, &tr.hw_tag);

  if (n > 1) {
    tr.lmf_hidden = highway_stack(p.highway_lm_fwd, tr.char_feat.topLeftCorner(h, n - 1), &tr.hw_lmf);
    tr.lmb_hidden = highway_stack(p.highway_lm_bwd, tr.char_feat.bottomRightCorner(h, n - 1), &tr.hw_lmb);
    tr.encoded.lm_fwd_logits = p.lm_fwd_w * tr.lmf_hidden;
    tr.encoded.lm_fwd_logits.colwise() += p.lm_fwd_b.col(0);
    tr.encoded.lm_bwd_logits = p.lm_bwd_w * tr.lmb_hidden;
    tr.encoded.lm_bwd_logits.colwise() += p.lm_bwd_b.col(0);
  } else {
    tr.encoded.lm_fwd_logits.resize(p.lm_fwd_w.rows(), 0);
    tr.encoded.lm_bwd_logits.resize(p.lm_bwd_w.rows(), 0);
  }

  const Index wd = config.word_dim;
  const Index cd = config.char_feature_dim();
  const Index ld = config.lexicon_dim();
  MatrixXd& x = tr.encoded.inputs;
  x.resize(config.token_input_dim(), n);
  x.topRows(wd) = gather_columns(p.word_emb, f.word_ids);
  x.middleRows(wd, cd) = char_tag;
  if (config.lexicon_mode == LexiconMode::SoftLexicon) {
    const Index pd = config.phrase_dim;
    x.bottomRows(ld).setZero();
    for (Index i = 0; i < n; ++i)
      for (const auto& term : f.lexicon_terms[static_cast<std::size_t>(i)])
        x.col(i).segment(wd + cd + term.block * pd, pd) += term.weight * p.phrase_emb.col(phrase_row(term.phrase));
  } else if (config.lexicon_mode == LexiconMode::ExSoftword) {
    for (Index i = 0; i < n; ++i)
      for (Index k = 0; k < 5; ++k) x(wd + cd + k, i) = f.lexicon_flags[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }

  const bool drop = options.train_mode && config.dropout > 0.0;
  UniformSource rng(options.dropout_seed);
  if (drop) {
    tr.input_mask = dropout_mask(x.rows(), n, config.dropout, rng);
    x = x.cwiseProduct(tr.input_mask);
  }

  tr.word_f = lstm_forward(p.word_fwd, x, false);
  tr.word_b = lstm_forward(p.word_bwd, x, true);
  tr.word_out.resize(2 * h, n);
  tr.word_out.topRows(h) = tr.word_f.h;
  tr.word_out.bottomRows(h) = tr.word_b.h;
  if (drop) {
    tr.output_mask = dropout_mask(2 * h, n, config.dropout, rng);
    tr.word_out = tr.word_out.cwiseProduct(tr.output_mask);
  }

  tr.encoded.emissions = p.emit_w * tr.word_out;
  tr.encoded.emissions.colwise() += p.emit_b.col(0);
  return tr;
}

}  // namespace

Eigen::VectorXd highway_forward(const Eigen::VectorXd& x, const HighwayParams& layer) {
  if (x.size() != layer.wh.cols()) throw DataError("highway input dimension mismatch");
  return highway_layer(layer, x, nullptr).col(0);
}

EncodedSentence encode_sentence(const SentenceFeatures& features, const ModelParams& params, const ModelConfig& config,
                                const ForwardOptions& options) {
  return std::move(forward(features, params, config, options).encoded);
}

double lm_loss(const MatrixXd& fwd_logits, const MatrixXd& bwd_logits, const std::vector<int>& lm_ids) {
  return mean_cross_entropy(fwd_logits, lm_ids, 1, nullptr) + mean_cross_entropy(bwd_logits, lm_ids, 0, nullptr);
}

LossBreakdown sentence_loss(const SentenceFeatures& f, const std::vector<int>& gold, const ModelParams& p,
                            const ModelConfig& config, const ForwardOptions& options, double lm_weight,
                            ModelParams* grads, double scale) {
  ForwardTrace tr = forward(f, p, config, options);
  const EncodedSentence& enc = tr.encoded;
  LossBreakdown loss;

  if (!grads) {
    loss.crf = crf::crf_nll(enc.emissions, p.transitions, gold);
    loss.lm = lm_loss(enc.lm_fwd_logits, enc.lm_bwd_logits, f.lm_ids);
    loss.total = loss.crf + lm_weight * loss.lm;
    return loss;
  }

  const Index n = static_cast<Index>(f.size());
  const Index h = config.hidden;
  ModelParams& g = *grads;

  // CRF and emission projection.
  auto crf_grad = crf::crf_nll_with_gradient(enc.emissions, p.transitions, gold);
  loss.crf = crf_grad.loss;
  g.transitions += scale * crf_grad.d_transitions;
  g.emit_w.noalias() += scale * crf_grad.d_emissions * tr.word_out.transpose();
  g.emit_b.col(0) += scale * crf_grad.d_emissions.rowwise().sum();
  MatrixXd d_out = p.emit_w.transpose() * crf_grad.d_emissions;
  if (tr.output_mask.size()) d_out = d_out.cwiseProduct(tr.output_mask);

  // Word BiLSTM.
  MatrixXd dx = lstm_backward(p.word_fwd, tr.word_f, d_out.topRows(h), g.word_fwd, scale);
  dx += lstm_backward(p.word_bwd, tr.word_b, d_out.bottomRows(h), g.word_bwd, scale);
  if (tr.input_mask.size()) dx = dx.cwiseProduct(tr.input_mask);

  const Index wd = config.word_dim;
  const Index cd = config.char_feature_dim();
  scatter_add_columns(g.word_emb, f.word_ids, dx.topRows(wd), scale);
  if (config.lexicon_mode == LexiconMode::SoftLexicon) {
    const Index pd = config.phrase_dim;
    for (Index i = 0; i < n; ++i)
      for (const auto& term : f.lexicon_terms[static_cast<std::size_t>(i)])
        g.phrase_emb.col(phrase_row(term.phrase)) += scale * term.weight * dx.col(i).segment(wd + cd + term.block * pd, pd);
  }

  // Character features: tagging highway plus the two LM paths.
  MatrixXd d_char = highway_stack_backward(p.highway_tag, tr.hw_tag, dx.middleRows(wd, cd), g.highway_tag, scale);

  loss.lm = 0.0;
  if (n > 1) {
    MatrixXd d_logits;
    loss.lm += mean_cross_entropy(enc.lm_fwd_logits, f.lm_ids, 1, &d_logits);
    d_logits *= lm_weight;
    g.lm_fwd_w.noalias() += scale * d_logits * tr.lmf_hidden.transpose();
    g.lm_fwd_b.col(0) += scale * d_logits.rowwise().sum();
    MatrixXd d_hidden = p.lm_fwd_w.transpose() * d_logits;
    d_char.topLeftCorner(h, n - 1) +=
        highway_stack_backward(p.highway_lm_fwd, tr.hw_lmf, d_hidden, g.highway_lm_fwd, scale);

    loss.lm += mean_cross_entropy(enc.lm_bwd_logits, f.lm_ids, 0, &d_logits);
    d_logits *= lm_weight;
    g.lm_bwd_w.noalias() += scale * d_logits * tr.lmb_hidden.transpose();
    g.lm_bwd_b.col(0) += scale * d_logits.rowwise().sum();
    d_hidden = p.lm_bwd_w.transpose() * d_logits;
    d_char.bottomRightCorner(h, n - 1) +=
        highway_stack_backward(p.highway_lm_bwd, tr.hw_lmb, d_hidden, g.highway_lm_bwd, scale);
  }
  loss.total = loss.crf + lm_weight * loss.lm;

  // Character BiLSTM.
  const Index len = static_cast<Index>(f.char_stream.size());
  MatrixXd dh_f = MatrixXd::Zero(h, len);
  MatrixXd dh_b = MatrixXd::Zero(h, len);
  for (Index i = 0; i < n; ++i) {
    dh_f.col(f.word_end[static_cast<std::size_t>(i)]) += d_char.col(i).head(h);
    dh_b.col(f.word_start[static_cast<std::size_t>(i)]) += d_char.col(i).tail(h);
  }
  MatrixXd d_chars = lstm_backward(p.char_fwd, tr.char_f, dh_f, g.char_fwd, scale);
  d_chars += lstm_backward(p.char_bwd, tr.char_b, dh_b, g.char_bwd, scale);
  scatter_add_columns(g.char_emb, f.char_stream, d_chars, scale);
  return loss;
}

}  // namespace lexner
