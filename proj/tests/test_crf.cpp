#include <doctest.h>

#include <cmath>
#include <random>

#include "lexner/crf.hpp"
#include "lexner/error.hpp"
#include "oracles.hpp"

using namespace lexner;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// n = 2, K = 2: emissions [[1,0],[0,1]] (row = token), T[0][0] = 2.
struct TwoByTwo {
  Eigen::MatrixXd em{{1.0, 0.0}, {0.0, 1.0}};  // K x n; symmetric so the layout does not matter
  Eigen::MatrixXd tr = crf::initial_transitions(2);
  TwoByTwo() {
    tr(0, 0) = 2.0;
    tr(2, 0) = tr(2, 1) = tr(0, 3) = tr(1, 3) = 0.0;
  }
};

}  // namespace

TEST_CASE("sequence_score sums start, emissions, transitions and stop") {
  Eigen::MatrixXd em(2, 1);
  em << 0.7, -1.0;
  auto tr = crf::initial_transitions(2);
  CHECK(crf::sequence_score(em, tr, {0}) == doctest::Approx(0.7));

  TwoByTwo ex;
  CHECK(crf::sequence_score(ex.em, ex.tr, {0, 0}) == doctest::Approx(3.0));
  CHECK(crf::sequence_score(ex.em, ex.tr, {0, 1}) == doctest::Approx(2.0));
  CHECK(crf::sequence_score(ex.em, ex.tr, {1, 0}) == doctest::Approx(0.0));
  CHECK(crf::sequence_score(ex.em, ex.tr, {1, 1}) == doctest::Approx(1.0));

  CHECK(crf::sequence_score(Eigen::MatrixXd::Zero(3, 4), crf::initial_transitions(3), {0, 1, 2, 0}) == 0.0);
  CHECK_THROWS_AS(crf::sequence_score(ex.em, ex.tr, {0, 2}), DataError);
  CHECK_THROWS_AS(crf::sequence_score(ex.em, ex.tr, {0}), DataError);
}

TEST_CASE("log_partition closed forms") {
  Eigen::MatrixXd em = Eigen::MatrixXd::Zero(2, 1);
  CHECK(crf::log_partition(em, crf::initial_transitions(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  TwoByTwo ex;
  const double expected = std::log(std::exp(3.0) + std::exp(2.0) + std::exp(0.0) + std::exp(1.0));
  CHECK(std::abs(crf::log_partition(ex.em, ex.tr) - expected) < 1e-12);
}

TEST_CASE("viterbi on the worked example and tie rule") {
  TwoByTwo ex;
  auto path = crf::viterbi_decode(ex.em, ex.tr);
  CHECK(path.tags == std::vector<int>{0, 0});
  CHECK(path.score == doctest::Approx(3.0));

  Eigen::MatrixXd one(1, 4);
  one << 0.3, -2.0, 1.0, 0.0;
  CHECK(crf::viterbi_decode(one, crf::initial_transitions(1)).tags == std::vector<int>{0, 0, 0, 0});

  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(4, 5, 0.25);
  CHECK(crf::viterbi_decode(flat, crf::initial_transitions(4)).tags == std::vector<int>(5, 0));
}

TEST_CASE("crf_nll closed forms and validation") {
  Eigen::MatrixXd em = Eigen::MatrixXd::Zero(2, 1);
  auto tr = crf::initial_transitions(2);
  CHECK(crf::crf_nll(em, tr, {0}) == doctest::Approx(std::log(2.0)));
  CHECK(crf::crf_nll(em, tr, {1}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(crf::crf_nll(em, tr, {2}), DataError);
  CHECK_THROWS_AS(crf::crf_nll(em, tr, {-1}), DataError);

  Eigen::MatrixXd sharp(2, 3);
  sharp << 20, 20, 20, 0, 0, 0;
  double loss = crf::crf_nll(sharp, tr, {0, 0, 0});
  CHECK(loss > 0.0);
  CHECK(loss < 1e-6);
}

TEST_CASE("brute-force equivalence on random instances") {
  std::mt19937_64 rng(20240611);
  int draws = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int k = 1; k <= 5; ++k) {
      for (int rep = 0; rep < 4; ++rep, ++draws) {
        Eigen::MatrixXd em = random_matrix(rng, k, n, 3.0);
        Eigen::MatrixXd tr = random_matrix(rng, k + 2, k + 2, 2.0);
        crf::apply_mask(tr);
        auto truth = oracle::enumerate(em, tr);

        CHECK(std::abs(crf::log_partition(em, tr) - truth.log_z) < 1e-8);
        auto decoded = crf::viterbi_decode(em, tr);
        CHECK(decoded.tags == truth.best);
        CHECK(std::abs(decoded.score - truth.best_score) < 1e-9);

        long double mass = 0.0L;
        for (double s : truth.scores) mass += std::exp(static_cast<long double>(s - truth.log_z));
        CHECK(std::abs(static_cast<double>(mass) - 1.0) < 1e-6);

        const auto& gold = truth.paths[rng() % truth.paths.size()];
        const double expected = truth.log_z - oracle::path_score(em, tr, gold);
        CHECK(std::abs(crf::crf_nll(em, tr, gold) - expected) < 1e-8);
        CHECK(crf::crf_nll(em, tr, gold) >= 0.0);
        CHECK(crf::log_partition(em, tr) >= crf::sequence_score(em, tr, gold) - 1e-12);
      }
    }
  }
  CHECK(draws >= 100);
}

TEST_CASE("shift invariance per column") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    const int k = 4, n = 5;
    Eigen::MatrixXd em = random_matrix(rng, k, n, 2.0);
    Eigen::MatrixXd tr = random_matrix(rng, k + 2, k + 2, 1.0);
    crf::apply_mask(tr);
    std::vector<int> gold{0, 3, 1, 1, 2};
    Eigen::MatrixXd shifted = em;
    const double delta = std::uniform_real_distribution<double>(-5, 5)(rng);
    shifted.col(2).array() += delta;
    CHECK(crf::log_partition(shifted, tr) == doctest::Approx(crf::log_partition(em, tr) + delta).epsilon(1e-12));
    CHECK(crf::sequence_score(shifted, tr, gold) == doctest::Approx(crf::sequence_score(em, tr, gold) + delta).epsilon(1e-12));
    CHECK(std::abs(crf::crf_nll(shifted, tr, gold) - crf::crf_nll(em, tr, gold)) < 1e-9);
    CHECK(crf::viterbi_decode(shifted, tr).tags == crf::viterbi_decode(em, tr).tags);
  }
}

TEST_CASE("nll gradient matches finite differences") {
  std::mt19937_64 rng(99);
  const int k = 3, n = 4;
  Eigen::MatrixXd em = random_matrix(rng, k, n, 1.5);
  Eigen::MatrixXd tr = random_matrix(rng, k + 2, k + 2, 1.0);
  crf::apply_mask(tr);
  std::vector<int> gold{2, 0, 1, 1};
  auto g = crf::crf_nll_with_gradient(em, tr, gold);
  CHECK(g.loss == doctest::Approx(crf::crf_nll(em, tr, gold)).epsilon(1e-12));
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < em.size(); ++i) {
    Eigen::MatrixXd a = em, b = em;
    a.data()[i] += h;
    b.data()[i] -= h;
    double fd = (crf::crf_nll(a, tr, gold) - crf::crf_nll(b, tr, gold)) / (2 * h);
    CHECK(std::abs(fd - g.d_emissions.data()[i]) < 1e-7);
  }
  for (Eigen::Index r = 0; r < k + 2; ++r)
    for (Eigen::Index c = 0; c < k + 2; ++c) {
      if (tr(r, c) == crf::kMaskedScore) {
        CHECK(g.d_transitions(r, c) == 0.0);
        continue;
      }
      Eigen::MatrixXd a = tr, b = tr;
      a(r, c) += h;
      b(r, c) -= h;
      double fd = (crf::crf_nll(em, a, gold) - crf::crf_nll(em, b, gold)) / (2 * h);
      CHECK(std::abs(fd - g.d_transitions(r, c)) < 1e-7);
    }
}
