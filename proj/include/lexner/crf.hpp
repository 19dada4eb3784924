#pragma once

// Linear-chain CRF over K tags with virtual START and STOP states.
//
// Emissions are K x n (one column per token). Transitions are (K+2) x (K+2)
// indexed [from][to]; row/column K is START and K+1 is STOP. Entries that no
// path can use (anything into START, anything out of STOP) hold kMaskedScore.

#include <vector>

#include <Eigen/Dense>

namespace lexner::crf {

inline constexpr double kMaskedScore = -1e4;

inline int start_state(int tag_count) { return tag_count; }
inline int stop_state(int tag_count) { return tag_count + 1; }

/// Zero transitions with the structural masks applied.
Eigen::MatrixXd initial_transitions(int tag_count);
void apply_mask(Eigen::MatrixXd& transitions);

struct DecodedPath {
  std::vector<int> tags;
  double score = 0.0;
};

double sequence_score(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions, const std::vector<int>& tags);

double log_partition(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions);

/// Ties resolve to the lowest tag index at every backtracking step.
DecodedPath viterbi_decode(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions);

double crf_nll(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions, const std::vector<int>& gold);

struct NllGradient {
  double loss = 0.0;
  Eigen::MatrixXd d_emissions;    // K x n
  Eigen::MatrixXd d_transitions;  // (K+2) x (K+2), zero on masked entries
};

/// Loss plus its gradient via forward-backward marginals.
NllGradient crf_nll_with_gradient(const Eigen::MatrixXd& emissions, const Eigen::MatrixXd& transitions,
                                  const std::vector<int>& gold);

}  // namespace lexner::crf
