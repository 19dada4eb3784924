#pragma once

// Mini-batch SGD with classical momentum, inverse-time learning-rate decay,
// global-norm gradient clipping, and best-on-dev model selection.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lexner/corpus.hpp"
#include "lexner/embeddings.hpp"
#include "lexner/lexicon.hpp"
#include "lexner/model.hpp"
#include "lexner/network.hpp"

namespace lexner {

struct TrainConfig {
  double eta0 = 0.01;
  double rho = 0.05;
  int batch_size = 10;
  double momentum = 0.9;
  double clip_threshold = 5.0;
  int epochs = 50;
  double lm_weight = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// eta0 / (1 + rho * t), t counted in epochs from 0.
double lr_at(int epoch, double eta0, double rho);

double global_norm(const ModelParams& grads);

/// Rescales all gradients by threshold / norm when the global L2 norm exceeds
/// the threshold. Returns the pre-clip norm. Throws NumericError on NaN/Inf.
double clip_gradients(ModelParams& grads, double threshold);

struct OptimizerState {
  ModelParams velocity;
  int epoch = 0;
};

OptimizerState make_optimizer_state(const ModelParams& params);

/// v <- momentum * v - lr * g;  p <- p + v.
void sgd_momentum_step(ModelParams& params, const ModelParams& grads, OptimizerState& state, double lr, double momentum);

/// Sentence indices shuffled with a generator seeded by (seed, epoch), cut
/// into consecutive groups of batch_size.
std::vector<std::vector<std::size_t>> make_batches(std::size_t sentence_count, std::size_t batch_size,
                                                   std::uint64_t seed, int epoch);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean joint loss per sentence
  double dev_precision = 0.0;
  double dev_recall = 0.0;
  double dev_f1 = 0.0;
  double lr = 0.0;
};

/// `epoch,train_loss,dev_precision,dev_recall,dev_f1,lr` rows with header.
void write_metrics_csv(std::ostream& out, const std::vector<EpochRecord>& records);

struct TrainInputs {
  const Dataset* train = nullptr;
  const Dataset* dev = nullptr;   // optional; selects the best epoch
  const Dataset* test = nullptr;  // optional; joins train in the lexicon statistics corpus
  const Lexicon* lexicon = nullptr;  // required unless lexicon_mode is none
  const EmbeddingTable* pretrained = nullptr;  // optional
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochRecord> epochs;
};

/// Builds vocabularies, lexicon statistics and initial parameters for a run.
Model prepare_model(const TrainInputs& inputs, const ModelConfig& model_config, const TrainConfig& train_config);

TrainResult train(const TrainInputs& inputs, const ModelConfig& model_config, const TrainConfig& train_config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace lexner
