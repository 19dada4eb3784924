#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lexner/error.hpp"
#include "lexner/model.hpp"
#include "lexner/trainer.hpp"

using namespace lexner;

namespace {

ModelParams random_grads(const ModelParams& like, std::mt19937_64& rng, double scale) {
  ModelParams g = like.zeros_like();
  std::normal_distribution<double> n(0.0, scale);
  g.for_each([&](const std::string&, Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  });
  return g;
}

struct Tiny {
  Dataset data = fixture::conll(fixture::kTinyCorpus);
  Lexicon lex = fixture::lexicon(fixture::kTinyLexicon);
  TrainInputs inputs() const {
    TrainInputs in;
    in.train = &data;
    in.dev = &data;
    in.lexicon = &lex;
    return in;
  }
};

std::string serialize(const Checkpoint& ck) {
  std::ostringstream out;
  save_checkpoint(out, ck);
  return out.str();
}

}  // namespace

TEST_CASE("learning-rate schedule") {
  CHECK(lr_at(0, 0.01, 0.05) == 0.01);
  CHECK(lr_at(20, 0.01, 0.05) == 0.01 / 2);
  CHECK(lr_at(20, 0.37, 0.05) == 0.37 / 2);
  CHECK(lr_at(100, 0.01, 0.05) == 0.01 / 6);
  for (int t = 0; t < 200; ++t) CHECK(lr_at(t + 1, 0.01, 0.05) < lr_at(t, 0.01, 0.05));
}

TEST_CASE("gradient clipping") {
  Tiny t;
  auto model = prepare_model(t.inputs(), fixture::tiny_config(LexiconMode::SoftLexicon), TrainConfig{});
  std::mt19937_64 rng(9);

  auto g = random_grads(model.params, rng, 1.0);
  const double norm = global_norm(g);
  auto small = g;
  small.for_each([&](const std::string&, Eigen::MatrixXd& m) { m *= 3.0 / norm; });
  auto before = small;
  CHECK(clip_gradients(small, 5.0) == doctest::Approx(3.0));
  CHECK(small.emit_w == before.emit_w);

  auto big = g;
  big.for_each([&](const std::string&, Eigen::MatrixXd& m) { m *= 10.0 / norm; });
  auto unclipped = big;
  clip_gradients(big, 5.0);
  CHECK(big.word_fwd.wx.isApprox(unclipped.word_fwd.wx * 0.5, 1e-14));

  for (int rep = 0; rep < 50; ++rep) {
    auto r = random_grads(model.params, rng, std::exp(std::uniform_real_distribution<double>(-6, 2)(rng)));
    const double pre = clip_gradients(r, 5.0);
    CHECK(std::abs(global_norm(r) - std::min(pre, 5.0)) <= 1e-9);
  }

  auto bad = g;
  bad.lm_fwd_b(0, 0) = std::nan("");
  CHECK_THROWS_AS(clip_gradients(bad, 5.0), NumericError);
  bad.lm_fwd_b(0, 0) = INFINITY;
  CHECK_THROWS_AS(clip_gradients(bad, 5.0), NumericError);
}

TEST_CASE("momentum step") {
  ModelParams p;
  p.emit_b = Eigen::MatrixXd::Constant(1, 1, 2.0);
  auto state = make_optimizer_state(p);
  ModelParams g = p.zeros_like();
  g.emit_b(0, 0) = 1.0;
  sgd_momentum_step(p, g, state, 0.1, 0.9);
  CHECK(p.emit_b(0, 0) == doctest::Approx(1.9));
  CHECK(state.velocity.emit_b(0, 0) == doctest::Approx(-0.1));

  // With zero gradient the remaining drift is v * m / (1 - m).
  g.emit_b(0, 0) = 0.0;
  const double start = p.emit_b(0, 0);
  for (int i = 0; i < 2000; ++i) sgd_momentum_step(p, g, state, 0.1, 0.9);
  CHECK(p.emit_b(0, 0) - start == doctest::Approx(-0.1 * 0.9 / 0.1).epsilon(1e-12));

  ModelParams q;
  q.emit_b = Eigen::MatrixXd::Constant(1, 1, 1.0);
  auto s2 = make_optimizer_state(q);
  g.emit_b(0, 0) = 2.0;
  sgd_momentum_step(q, g, s2, 0.25, 0.0);
  sgd_momentum_step(q, g, s2, 0.25, 0.0);
  CHECK(q.emit_b(0, 0) == doctest::Approx(0.0));

  ModelParams wrong;
  wrong.emit_b = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(sgd_momentum_step(q, wrong, s2, 0.1, 0.9), NumericError);
}

TEST_CASE("batches") {
  auto b = make_batches(25, 10, 1, 0);
  REQUIRE(b.size() == 3);
  CHECK(b[0].size() == 10);
  CHECK(b[1].size() == 10);
  CHECK(b[2].size() == 5);
  CHECK(make_batches(25, 10, 1, 0) == b);
  CHECK(make_batches(25, 10, 1, 1) != b);
  CHECK(make_batches(25, 10, 2, 0) != b);
  std::multiset<std::size_t> seen;
  for (const auto& batch : b) seen.insert(batch.begin(), batch.end());
  std::multiset<std::size_t> all;
  for (std::size_t i = 0; i < 25; ++i) all.insert(i);
  CHECK(seen == all);
  CHECK(make_batches(0, 10, 1, 0).empty());
  CHECK_THROWS_AS(make_batches(5, 0, 1, 0), ConfigError);
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.momentum = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.eta0 = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  TrainConfig d;
  CHECK(d.eta0 == 0.01);
  CHECK(d.rho == 0.05);
  CHECK(d.batch_size == 10);
  CHECK(d.momentum == 0.9);
  CHECK(d.clip_threshold == 5.0);
  CHECK(d.epochs == 50);
  CHECK(d.lm_weight == 1.0);
}

TEST_CASE("training runs, selects on dev, and is deterministic") {
  Tiny t;
  TrainConfig tc;
  tc.epochs = 3;
  tc.batch_size = 2;
  auto mc = fixture::tiny_config(LexiconMode::SoftLexicon);

  auto zero = tc;
  zero.epochs = 0;
  auto init = train(t.inputs(), mc, zero);
  CHECK(init.epochs.empty());
  CHECK(init.checkpoint.epoch == 0);
  auto prepared = prepare_model(t.inputs(), mc, zero);
  CHECK(init.checkpoint.model.params.emit_w == prepared.params.emit_w);

  std::vector<EpochRecord> seen;
  auto a = train(t.inputs(), mc, tc, [&](const EpochRecord& r) { seen.push_back(r); });
  auto b = train(t.inputs(), mc, tc);
  REQUIRE(a.epochs.size() == 3);
  CHECK(seen.size() == 3);
  CHECK(a.epochs[1].lr == lr_at(1, tc.eta0, tc.rho));
  CHECK(serialize(a.checkpoint) == serialize(b.checkpoint));
  std::ostringstream ma, mb;
  write_metrics_csv(ma, a.epochs);
  write_metrics_csv(mb, b.epochs);
  CHECK(ma.str() == mb.str());
  CHECK(ma.str().rfind("epoch,train_loss,dev_precision,dev_recall,dev_f1,lr\n0,", 0) == 0);

  double best = -1;
  for (const auto& r : a.epochs) best = std::max(best, r.dev_f1);
  CHECK(a.checkpoint.best_dev_f1 == best);
  CHECK(evaluate_model(a.checkpoint.model, t.data).overall.f1() == best);

  auto no_dev = t.inputs();
  no_dev.dev = nullptr;
  auto last = train(no_dev, mc, tc);
  CHECK(last.checkpoint.epoch == 3);
  CHECK(!last.checkpoint.has_dev);
}

TEST_CASE("training input validation") {
  Tiny t;
  auto in = t.inputs();
  in.lexicon = nullptr;
  CHECK_THROWS_AS(prepare_model(in, fixture::tiny_config(LexiconMode::SoftLexicon), TrainConfig{}), ConfigError);
  CHECK_NOTHROW(prepare_model(in, fixture::tiny_config(LexiconMode::None), TrainConfig{}));

  Dataset empty{{}, TagScheme::equipment_domain()};
  TrainInputs none;
  none.train = &empty;
  CHECK_THROWS_AS(prepare_model(none, fixture::tiny_config(LexiconMode::None), TrainConfig{}), DataError);

  auto broken = fixture::conll("a O\nb I-PER\n");
  TrainInputs bad;
  bad.train = &broken;
  CHECK_THROWS_AS(prepare_model(bad, fixture::tiny_config(LexiconMode::None), TrainConfig{}), DataError);

  auto untagged = fixture::conll("a\nb\n");
  TrainInputs raw;
  raw.train = &untagged;
  CHECK_THROWS_AS(prepare_model(raw, fixture::tiny_config(LexiconMode::None), TrainConfig{}), DataError);
}

TEST_CASE("checkpoint round trip is bit exact") {
  Tiny t;
  TrainConfig tc;
  tc.epochs = 2;
  for (auto mode : {LexiconMode::None, LexiconMode::ExSoftword, LexiconMode::SoftLexicon}) {
    auto result = train(t.inputs(), fixture::tiny_config(mode), tc);
    const std::string bytes = serialize(result.checkpoint);
    std::istringstream in(bytes);
    auto loaded = load_checkpoint(in);
    CHECK(serialize(loaded) == bytes);
    CHECK(loaded.model.config == result.checkpoint.model.config);
    CHECK(loaded.best_dev_f1 == result.checkpoint.best_dev_f1);
    CHECK(loaded.epoch == result.checkpoint.epoch);
    CHECK(loaded.model.words.words() == result.checkpoint.model.words.words());
    CHECK(loaded.model.lexicon.has_value() == (mode != LexiconMode::None));
    bool same = true;
    std::vector<const Eigen::MatrixXd*> a, b;
    loaded.model.params.for_each([&](const std::string&, const Eigen::MatrixXd& m) { a.push_back(&m); });
    result.checkpoint.model.params.for_each([&](const std::string&, const Eigen::MatrixXd& m) { b.push_back(&m); });
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      same = same && a[i]->size() == b[i]->size() &&
             std::memcmp(a[i]->data(), b[i]->data(), sizeof(double) * static_cast<std::size_t>(a[i]->size())) == 0;
    CHECK(same);
    CHECK(evaluate_model(loaded.model, t.data).overall.f1() == result.checkpoint.best_dev_f1);
    for (const auto& s : t.data.sentences) CHECK(loaded.model.predict(s) == result.checkpoint.model.predict(s));
  }
}

TEST_CASE("checkpoint load rejects damage") {
  Tiny t;
  TrainConfig tc;
  tc.epochs = 0;
  const std::string bytes = serialize(train(t.inputs(), fixture::tiny_config(LexiconMode::None), tc).checkpoint);

  auto load = [](std::string b) {
    std::istringstream in(b);
    return load_checkpoint(in);
  };
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(load(bad_magic), DataError);
  std::string bad_version = bytes;
  bad_version[8] = 9;
  CHECK_THROWS_WITH_AS(load(bad_version), doctest::Contains("version"), DataError);
  CHECK_THROWS_WITH_AS(load(bytes.substr(0, bytes.size() - 3)), doctest::Contains("truncated"), DataError);
  CHECK_THROWS_AS(load(bytes.substr(0, 30)), DataError);
  CHECK_THROWS_AS(load_checkpoint_file("/nonexistent/model.ckpt"), DataError);
}

TEST_CASE("evaluate_model guards") {
  Tiny t;
  TrainConfig tc;
  tc.epochs = 0;
  auto model = train(t.inputs(), fixture::tiny_config(LexiconMode::None), tc).checkpoint.model;
  CHECK_THROWS_AS(evaluate_model(model, Dataset{{}, t.data.scheme}), DataError);
  Dataset other{t.data.sentences, TagScheme({"PER"})};
  CHECK_THROWS_AS(evaluate_model(model, other), DataError);
  auto r1 = evaluate_model(model, t.data);
  auto r2 = evaluate_model(model, t.data);
  CHECK(r1.overall.correct == r2.overall.correct);
  CHECK(r1.overall.predicted == r2.overall.predicted);
}
