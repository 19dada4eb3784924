#include "lexner/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "lexner/crf.hpp"
#include "lexner/error.hpp"

namespace lexner {

void TrainConfig::validate() const {
  if (!(eta0 > 0.0)) throw ConfigError("eta0 must be positive");
  if (!(rho >= 0.0)) throw ConfigError("rho must be non-negative");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
  if (!(clip_threshold > 0.0)) throw ConfigError("clip_threshold must be positive");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(lm_weight >= 0.0)) throw ConfigError("lm_weight must be non-negative");
}

double lr_at(int epoch, double eta0, double rho) { return eta0 / (1.0 + rho * epoch); }

double global_norm(const ModelParams& grads) {
  double sum = 0.0;
  grads.for_each([&sum](const std::string&, const Eigen::MatrixXd& g) { sum += g.squaredNorm(); });
  return std::sqrt(sum);
}

double clip_gradients(ModelParams& grads, double threshold) {
  std::string bad;
  grads.for_each([&bad](const std::string& name, const Eigen::MatrixXd& g) {
    if (bad.empty() && !g.allFinite()) bad = name;
  });
  if (!bad.empty()) throw NumericError("non-finite gradient in " + bad);
  const double norm = global_norm(grads);
  if (norm > threshold) {
    const double factor = threshold / norm;
    grads.for_each([factor](const std::string&, Eigen::MatrixXd& g) { g *= factor; });
  }
  return norm;
}

OptimizerState make_optimizer_state(const ModelParams& params) { return {params.zeros_like(), 0}; }

void sgd_momentum_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr, double momentum) {
  std::vector<Eigen::MatrixXd*> p, v;
  std::vector<const Eigen::MatrixXd*> g;
  params.for_each([&p](const std::string&, Eigen::MatrixXd& m) { p.push_back(&m); });
  state.velocity.for_each([&v](const std::string&, Eigen::MatrixXd& m) { v.push_back(&m); });
  grads.for_each([&g](const std::string&, const Eigen::MatrixXd& m) { g.push_back(&m); });
  if (p.size() != v.size() || p.size() != g.size()) throw NumericError("optimizer state does not match parameters");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]->rows() != g[i]->rows() || p[i]->cols() != g[i]->cols() || p[i]->rows() != v[i]->rows() ||
        p[i]->cols() != v[i]->cols())
      throw NumericError("gradient shape does not match parameter shape");
    *v[i] = momentum * *v[i] - lr * *g[i];
    *p[i] += *v[i];
  }
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t sentence_count, std::size_t batch_size,
                                                   std::uint64_t seed, int epoch) {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  std::vector<std::size_t> order(sentence_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch)};
  std::mt19937_64 engine(seq);
  // Fisher-Yates with an explicit bounded draw so the order does not depend
  // on the standard library's shuffle.
  for (std::size_t i = sentence_count; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(engine() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < sentence_count; start += batch_size)
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(start + batch_size, sentence_count)));
  return batches;
}

void write_metrics_csv(std::ostream& out, const std::vector<EpochRecord>& records) {
  out << "epoch,train_loss,dev_precision,dev_recall,dev_f1,lr\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.2f,%.2f,%.2f,%.8g\n", r.epoch, r.train_loss, r.dev_precision,
                  r.dev_recall, r.dev_f1, r.lr);
    out << line;
  }
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t dropout_seed(std::uint64_t seed, int epoch, std::size_t sentence) {
  return mix(mix(mix(seed) ^ static_cast<std::uint64_t>(epoch)) ^ sentence);
}

}  // namespace

Model prepare_model(const TrainInputs& inputs, const ModelConfig& model_config, const TrainConfig& train_config) {
  if (!inputs.train || inputs.train->empty()) throw DataError("training set is empty");
  model_config.validate();
  train_config.validate();
  const auto& train = inputs.train->sentences;
  for (const auto& s : train)
    if (!s.tagged()) throw DataError("training sentences must carry gold tags");
  for (const auto& s : train) {
    auto check = validate_bio(s.tags(), inputs.train->scheme, false);
    if (!check.violations.empty())
      throw DataError("training corpus has an invalid BIO tag at token " + std::to_string(check.violations.front()));
  }

  Model model;
  model.config = model_config;
  model.scheme = inputs.train->scheme;

  std::vector<Sentence> other;
  for (const Dataset* split : {inputs.dev, inputs.test})
    if (split) other.insert(other.end(), split->sentences.begin(), split->sentences.end());
  EmbeddingTable no_vectors(model_config.word_dim);
  const EmbeddingTable& pretrained = inputs.pretrained ? *inputs.pretrained : no_vectors;
  auto words = build_vocab(train, other, pretrained, model_config.word_dim, train_config.seed ^ 0x5752444CULL);
  model.words = words.vocab;
  model.lm_words = build_lm_vocab(train, model_config.lm_vocab_cap);
  model.chars = CharVocab::build(train);

  if (model_config.lexicon_mode != LexiconMode::None) {
    if (!inputs.lexicon) throw ConfigError("lexicon_mode " + std::string(to_string(model_config.lexicon_mode)) + " requires a lexicon");
    static const std::vector<Sentence> kNoTest;
    model.lexicon = LexiconArtifacts{*inputs.lexicon,
                                     build_lexicon_stats(*inputs.lexicon, train, inputs.test ? inputs.test->sentences : kNoTest)};
  }

  auto& c = model.config;
  c.tag_count = static_cast<int>(model.scheme.tag_count());
  c.word_vocab_size = static_cast<int>(model.words.size());
  c.char_vocab_size = static_cast<int>(model.chars.size());
  c.lm_vocab_size = lm_class_count(model.lm_words);
  c.phrase_count = model.lexicon ? static_cast<int>(model.lexicon->lexicon.size()) : 0;

  model.params = init_params(c, train_config.seed);
  model.params.word_emb = words.table;
  if (c.lexicon_mode == LexiconMode::SoftLexicon)
    model.params.phrase_emb = init_phrase_embeddings(model.lexicon->lexicon, words, c.phrase_dim, train_config.seed ^ 0x50485253ULL);
  return model;
}

TrainResult train(const TrainInputs& inputs, const ModelConfig& model_config, const TrainConfig& train_config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  Model model = prepare_model(inputs, model_config, train_config);
  const auto builder = model.feature_builder();
  const auto& train = inputs.train->sentences;
  const auto features = builder.build_all(train);
  std::vector<std::vector<int>> gold;
  gold.reserve(train.size());
  for (const auto& s : train) gold.push_back(gold_indices(s, model.scheme));

  TrainResult result;
  result.checkpoint.model = model;
  result.checkpoint.has_dev = inputs.dev != nullptr;
  result.checkpoint.best_dev_f1 = -1.0;

  OptimizerState state = make_optimizer_state(model.params);
  ModelParams grads = model.params.zeros_like();

  for (int epoch = 0; epoch < train_config.epochs; ++epoch) {
    state.epoch = epoch;
    const double lr = lr_at(epoch, train_config.eta0, train_config.rho);
    double loss_sum = 0.0;
    const auto batches = make_batches(train.size(), static_cast<std::size_t>(train_config.batch_size), train_config.seed, epoch);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      grads.set_zero();
      const double scale = 1.0 / static_cast<double>(batches[b].size());
      for (std::size_t idx : batches[b]) {
        ForwardOptions options{true, dropout_seed(train_config.seed, epoch, idx)};
        auto loss = sentence_loss(features[idx], gold[idx], model.params, model.config, options, train_config.lm_weight,
                                  &grads, scale);
        if (!std::isfinite(loss.total))
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(b) +
                             ", sentence " + std::to_string(idx));
        loss_sum += loss.total;
      }
      clip_gradients(grads, train_config.clip_threshold);
      sgd_momentum_step(model.params, grads, state, lr, train_config.momentum);
      crf::apply_mask(model.params.transitions);
      if (!model.params.all_finite())
        throw NumericError("parameters became non-finite at epoch " + std::to_string(epoch) + ", batch " + std::to_string(b));
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(train.size());
    record.lr = lr;
    if (inputs.dev) {
      auto report = evaluate_model(model, *inputs.dev);
      record.dev_precision = report.overall.precision();
      record.dev_recall = report.overall.recall();
      record.dev_f1 = report.overall.f1();
      if (record.dev_f1 > result.checkpoint.best_dev_f1) {
        result.checkpoint.model.params = model.params;
        result.checkpoint.best_dev_f1 = record.dev_f1;
        result.checkpoint.epoch = epoch + 1;
      }
    } else {
      result.checkpoint.model.params = model.params;
      result.checkpoint.epoch = epoch + 1;
    }
    result.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
  }

  if (inputs.dev && result.epochs.empty()) {
    result.checkpoint.best_dev_f1 = evaluate_model(model, *inputs.dev).overall.f1();
  } else if (!inputs.dev) {
    result.checkpoint.best_dev_f1 = 0.0;
  }
  return result;
}

}  // namespace lexner
