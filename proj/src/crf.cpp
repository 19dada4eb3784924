#include "lexner/crf.hpp"

#include <cmath>
#include <string>

#include "lexner/error.hpp"

namespace lexner::crf {

namespace {

int checked_tag_count(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions) {
  const auto k = emissions.rows();
  if (transitions.rows() != k + 2 || transitions.cols() != k + 2)
    throw DataError("transition matrix must be " + std::to_string(k + 2) + "x" + std::to_string(k + 2));
  return static_cast<int>(k);
}

void check_tags(const std::vector<int>& tags, Eigen::Index n, int k) {
  if (static_cast<Eigen::Index>(tags.size()) != n)
    throw DataError("tag sequence length " + std::to_string(tags.size()) + " != " + std::to_string(n));
  for (int t : tags)
    if (t < 0 || t >= k) throw DataError("tag index " + std::to_string(t) + " out of range");
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

// alpha(:, i) = log-sum of scores of all prefixes ending at token i in tag k,
// including emission i.
Eigen::MatrixXd forward_table(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions, int k) {
  const auto n = emissions.cols();
  Eigen::MatrixXd alpha(k, n);
  alpha.col(0) = transitions.row(start_state(k)).head(k).transpose() + emissions.col(0);
  const auto inner = transitions.topLeftCorner(k, k);
  Eigen::VectorXd scratch(k);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (int to = 0; to < k; ++to) {
      scratch = alpha.col(i - 1) + inner.col(to);
      alpha(to, i) = log_sum_exp(scratch) + emissions(to, i);
    }
  }
  return alpha;
}

// beta(:, i) = log-sum of scores of all suffixes after token i given tag k at
// i, excluding emission i.
Eigen::MatrixXd backward_table(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions, int k) {
  const auto n = emissions.cols();
  Eigen::MatrixXd beta(k, n);
  beta.col(n - 1) = transitions.col(stop_state(k)).head(k);
  const auto inner = transitions.topLeftCorner(k, k);
  Eigen::VectorXd scratch(k);
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    for (int from = 0; from < k; ++from) {
      scratch = inner.row(from).transpose() + emissions.col(i + 1) + beta.col(i + 1);
      beta(from, i) = log_sum_exp(scratch);
    }
  }
  return beta;
}

double log_z_from_alpha(const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& transitions, int k) {
  Eigen::VectorXd last = alpha.col(alpha.cols() - 1) + transitions.col(stop_state(k)).head(k);
  return log_sum_exp(last);
}

}  // namespace

Eigen::MatrixXd initial_transitions(int tag_count) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(tag_count + 2, tag_count + 2);
  apply_mask(t);
  return t;
}

void apply_mask(Eigen::MatrixXd& transitions) {
  const int k = static_cast<int>(transitions.rows()) - 2;
  transitions.col(start_state(k)).setConstant(kMaskedScore);
  transitions.row(stop_state(k)).setConstant(kMaskedScore);
  transitions(start_state(k), stop_state(k)) = kMaskedScore;
}

double sequence_score(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions, const std::vector<int>& tags) {
  const int k = checked_tag_count(emissions, transitions);
  check_tags(tags, emissions.cols(), k);
  if (tags.empty()) return 0.0;
  double score = transitions(start_state(k), tags.front());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    score += emissions(tags[i], static_cast<Eigen::Index>(i));
    if (i + 1 < tags.size()) score += transitions(tags[i], tags[i + 1]);
  }
  return score + transitions(tags.back(), stop_state(k));
}

double log_partition(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions) {
  const int k = checked_tag_count(emissions, transitions);
  if (emissions.cols() == 0) return 0.0;
  return log_z_from_alpha(forward_table(emissions, transitions, k), transitions, k);
}

DecodedPath viterbi_decode(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions) {
  const int k = checked_tag_count(emissions, transitions);
  const auto n = emissions.cols();
  DecodedPath path;
  if (n == 0) return path;

  Eigen::VectorXd score = transitions.row(start_state(k)).head(k).transpose() + emissions.col(0);
  Eigen::VectorXd next(k);
  std::vector<int> back(static_cast<std::size_t>(k * n), 0);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (int to = 0; to < k; ++to) {
      int best = 0;
      double best_score = score[0] + transitions(0, to);
      for (int from = 1; from < k; ++from) {
        double s = score[from] + transitions(from, to);
        if (s > best_score) {
          best_score = s;
          best = from;
        }
      }
      next[to] = best_score + emissions(to, i);
      back[static_cast<std::size_t>(i * k + to)] = best;
    }
    score.swap(next);
  }

  int last = 0;
  double best_score = score[0] + transitions(0, stop_state(k));
  for (int t = 1; t < k; ++t) {
    double s = score[t] + transitions(t, stop_state(k));
    if (s > best_score) {
      best_score = s;
      last = t;
    }
  }
  path.score = best_score;
  path.tags.assign(static_cast<std::size_t>(n), 0);
  path.tags.back() = last;
  for (Eigen::Index i = n - 1; i > 0; --i)
    path.tags[static_cast<std::size_t>(i - 1)] = back[static_cast<std::size_t>(i * k + path.tags[static_cast<std::size_t>(i)])];
  return path;
}

double crf_nll(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions, const std::vector<int>& gold) {
  const double gold_score = sequence_score(emissions, transitions, gold);
  return log_partition(emissions, transitions) - gold_score;
}

NllGradient crf_nll_with_gradient(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions,
                                  const std::vector<int>& gold) {
  const int k = checked_tag_count(emissions, transitions);
  check_tags(gold, emissions.cols(), k);
  const auto n = emissions.cols();
  NllGradient out;
  out.d_emissions = Eigen::MatrixXd::Zero(k, n);
  out.d_transitions = Eigen::MatrixXd::Zero(k + 2, k + 2);
  if (n == 0) return out;

  const Eigen::MatrixXd alpha = forward_table(emissions, transitions, k);
  const Eigen::MatrixXd beta = backward_table(emissions, transitions, k);
  const double log_z = log_z_from_alpha(alpha, transitions, k);
  out.loss = log_z - sequence_score(emissions, transitions, gold);

  // Unary marginals.
  out.d_emissions = (alpha + beta).array() - log_z;
  out.d_emissions = out.d_emissions.array().exp();
  out.d_transitions.row(start_state(k)).head(k) = out.d_emissions.col(0).transpose();
  out.d_transitions.col(stop_state(k)).head(k) = out.d_emissions.col(n - 1);

  // Pairwise marginals summed over positions.
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    for (int from = 0; from < k; ++from)
      for (int to = 0; to < k; ++to)
        out.d_transitions(from, to) += std::exp(alpha(from, i) + transitions(from, to) + emissions(to, i + 1) +
                                                beta(to, i + 1) - log_z);

  // Minus the gold path's indicator counts.
  out.d_transitions(start_state(k), gold.front()) -= 1.0;
  out.d_transitions(gold.back(), stop_state(k)) -= 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.d_emissions(gold[static_cast<std::size_t>(i)], i) -= 1.0;
    if (i + 1 < n) out.d_transitions(gold[static_cast<std::size_t>(i)], gold[static_cast<std::size_t>(i + 1)]) -= 1.0;
  }
  return out;
}

}  // namespace lexner::crf
