#pragma once

// Central finite differences over every parameter of the joint loss on the
// tiny three-sentence batch.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lexner/features.hpp"
#include "lexner/model.hpp"
#include "lexner/network.hpp"
#include "lexner/trainer.hpp"

namespace fixture {

struct GroupError {
  double relative = 0.0;  // ||analytic - numeric|| / (||analytic|| + ||numeric||); 0 when both vanish
  double analytic_norm = 0.0;
  std::size_t entries = 0;
};

inline std::map<std::string, GroupError> gradient_check(lexner::LexiconMode mode, double h = 1e-4, double lm_weight = 1.0) {
  using namespace lexner;
  Dataset data = conll(kTinyCorpus);
  Lexicon lex = lexicon(kTinyLexicon);
  TrainInputs inputs;
  inputs.train = &data;
  inputs.lexicon = &lex;
  TrainConfig tc;
  tc.seed = 3;
  Model model = prepare_model(inputs, tiny_config(mode), tc);
  auto builder = model.feature_builder();
  auto features = builder.build_all(data.sentences);
  std::vector<std::vector<int>> gold;
  for (const auto& s : data.sentences) gold.push_back(gold_indices(s, model.scheme));

  auto batch_loss = [&](const ModelParams& p, ModelParams* grads) {
    double total = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      ForwardOptions opt{true, 1000 + i};
      total += sentence_loss(features[i], gold[i], p, model.config, opt, lm_weight, grads, 1.0 / 3.0).total / 3.0;
    }
    return total;
  };

  ModelParams analytic = model.params.zeros_like();
  batch_loss(model.params, &analytic);

  std::vector<std::pair<std::string, Eigen::MatrixXd*>> params, grads;
  model.params.for_each([&](const std::string& n, Eigen::MatrixXd& m) { params.emplace_back(n, &m); });
  analytic.for_each([&](const std::string& n, Eigen::MatrixXd& m) { grads.emplace_back(n, &m); });

  std::map<std::string, GroupError> out;
  for (std::size_t g = 0; g < params.size(); ++g) {
    Eigen::MatrixXd& p = *params[g].second;
    if (p.size() == 0) continue;
    Eigen::MatrixXd numeric(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double saved = p.data()[i];
      p.data()[i] = saved + h;
      const double up = batch_loss(model.params, nullptr);
      p.data()[i] = saved - h;
      const double down = batch_loss(model.params, nullptr);
      p.data()[i] = saved;
      numeric.data()[i] = (up - down) / (2 * h);
    }
    const Eigen::MatrixXd& a = *grads[g].second;
    GroupError e;
    e.analytic_norm = a.norm();
    e.entries = static_cast<std::size_t>(p.size());
    const double scale = a.norm() + numeric.norm();
    e.relative = scale < 1e-10 ? 0.0 : (a - numeric).norm() / scale;
    out[params[g].first] = e;
  }
  return out;
}

}  // namespace fixture
