#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "lexner/embeddings.hpp"
#include "lexner/error.hpp"
#include "lexner/features.hpp"

using namespace lexner;

namespace {

EmbeddingTable vectors(const std::string& text, int dim) {
  std::istringstream in(text);
  return load_pretrained(in, dim);
}

std::string load_error(const std::string& text, int dim) {
  try {
    vectors(text, dim);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("load_pretrained") {
  auto t = vectors("rocket 0.1 -0.2\n", 2);
  REQUIRE(t.size() == 1);
  CHECK(t.vector(0)[0] == 0.1);
  CHECK(t.vector(0)[1] == -0.2);

  auto dup = vectors("Rocket 1 2\nrocket 3 4\nRocket 5 6\n", 2);
  CHECK(dup.size() == 2);
  CHECK(dup.vector(static_cast<std::size_t>(dup.lookup("Rocket")))[0] == 1.0);
  CHECK(dup.lookup("ROCKET") == dup.lookup("rocket"));
  CHECK(dup.lookup("motor") == -1);

  CHECK(load_error("rocket 0.1\n", 2).find("line 1") != std::string::npos);
  CHECK(load_error("a 1 2\nb 1 2 3\n", 2).find("line 2") != std::string::npos);
  CHECK(load_error("a 1 x\n", 2).find("unparsable") != std::string::npos);
  CHECK(load_error("a 1 2e\n", 2).find("unparsable") != std::string::npos);
  CHECK(vectors("", 3).size() == 0);
}

TEST_CASE("vocabularies") {
  Vocab v;
  CHECK(v.size() == 2);
  CHECK(v.word(Vocab::kPad) == "<pad>");
  CHECK(v.word(Vocab::kUnk) == "<unk>");
  int rocket = v.add("rocket");
  CHECK(v.add("rocket") == rocket);
  CHECK(v.lookup("Rocket") == rocket);
  CHECK(v.lookup("motor") == Vocab::kUnk);

  CharVocab c = CharVocab::build({tokenize_raw("ab é")});
  CHECK(c.size() == 6);
  CHECK(c.lookup("é") == 5);
  CHECK(c.lookup("z") == CharVocab::kUnk);
  CHECK(utf8_chars("aé€😀") == std::vector<std::string>{"a", "é", "€", "😀"});
}

TEST_CASE("build_vocab copies pretrained rows and bounds the rest") {
  auto data = fixture::conll(fixture::kTinyCorpus);
  auto extra = fixture::conll("Orbit O\nzzz O\n");
  const int dim = 100;
  std::ostringstream text;
  text << "rocket";
  for (int i = 0; i < dim; ++i) text << ' ' << (i * 0.01);
  text << "\norbit";
  for (int i = 0; i < dim; ++i) text << ' ' << (-i * 0.01);
  text << '\n';
  auto pre = vectors(text.str(), dim);

  auto a = build_vocab(data.sentences, extra.sentences, pre, dim, 42);
  auto b = build_vocab(data.sentences, extra.sentences, pre, dim, 42);
  CHECK(a.table == b.table);
  CHECK(a.vocab.contains("Orbit"));
  CHECK(!a.vocab.contains("zzz"));
  CHECK(a.table.col(a.vocab.lookup("rocket")) == pre.vector(0));
  CHECK(a.table.col(a.vocab.lookup("Orbit")) == pre.vector(1));
  CHECK(a.table.col(Vocab::kPad).isZero());
  const double bound = std::sqrt(3.0 / dim);
  CHECK(a.table.col(a.vocab.lookup("motor")).cwiseAbs().maxCoeff() <= bound);
  CHECK(a.table.col(Vocab::kUnk).cwiseAbs().maxCoeff() <= bound);
  CHECK(a.table.col(Vocab::kUnk).norm() > 0);

  auto other = build_vocab(data.sentences, {}, pre, dim, 43);
  CHECK(other.table.col(other.vocab.lookup("motor")) != a.table.col(a.vocab.lookup("motor")));

  CHECK_THROWS_AS(build_vocab(data.sentences, {}, pre, 50, 1), ConfigError);
}

TEST_CASE("init_phrase_embeddings") {
  WordEmbeddings words;
  words.vocab.add("rocket");
  words.vocab.add("motor");
  words.table = Eigen::MatrixXd::Zero(3, 4);
  words.table.col(Vocab::kUnk) << 0.5, -0.5, 9;
  words.table.col(2) << 1, 0, 7;
  words.table.col(3) << 0, 1, 7;
  auto lex = fixture::lexicon("rocket motor\nrocket\nwarp drive\n");
  auto emb = init_phrase_embeddings(lex, words, 2, 5);
  REQUIRE(emb.cols() == 4);
  CHECK(emb.col(1) == Eigen::Vector2d(0.5, 0.5));
  CHECK(emb.col(2) == Eigen::Vector2d(1, 0));
  CHECK(emb.col(3) == Eigen::Vector2d(0.5, -0.5));
  CHECK(emb.col(0).cwiseAbs().maxCoeff() <= std::sqrt(3.0 / 2));
  CHECK(init_phrase_embeddings(lex, words, 2, 5) == emb);
  CHECK_THROWS_AS(init_phrase_embeddings(lex, words, 4, 5), ConfigError);
}

TEST_CASE("feature builder layout") {
  auto data = fixture::conll(fixture::kTinyCorpus);
  auto lex = fixture::lexicon(fixture::kTinyLexicon);
  LexiconArtifacts art{lex, build_lexicon_stats(lex, data.sentences, {})};
  Vocab words(std::vector<std::string>{"NASA", "bought"});
  Vocab lm = build_lm_vocab(data.sentences, 3);
  CharVocab chars = CharVocab::build(data.sentences);

  FeatureBuilder soft(words, lm, chars, LexiconMode::SoftLexicon, &art);
  auto f = soft.build(data.sentences[1]);  // NASA bought a rocket motor in May
  CHECK(f.size() == 7);
  CHECK(f.word_ids[0] == words.lookup("NASA"));
  CHECK(f.word_ids[2] == Vocab::kUnk);
  CHECK(f.char_stream.front() == CharVocab::kSep);
  CHECK(f.char_stream.back() == CharVocab::kSep);
  CHECK(f.word_start[0] == 0);
  CHECK(f.word_end[0] == 5);
  CHECK(f.word_start[1] == 5);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f.char_stream[static_cast<std::size_t>(f.word_start[i])] == CharVocab::kSep);
    CHECK(f.char_stream[static_cast<std::size_t>(f.word_end[i])] == CharVocab::kSep);
  }
  CHECK(f.lexicon_terms.size() == 7);
  CHECK(f.lexicon_flags.empty());

  FeatureBuilder ex(words, lm, chars, LexiconMode::ExSoftword, &art);
  auto g = ex.build(data.sentences[1]);
  CHECK(g.lexicon_flags[3] == ExSoftwordFlags{1, 0, 0, 1, 0});
  CHECK(g.lexicon_terms.empty());

  CHECK_THROWS_AS(FeatureBuilder(words, lm, chars, LexiconMode::SoftLexicon, nullptr), ConfigError);
}

TEST_CASE("LM vocabulary is frequency capped") {
  auto data = fixture::conll("a O\nb O\nb O\nc O\nc O\nc O\nd O\n");
  auto lm = build_lm_vocab(data.sentences, 2);
  CHECK(lm_class_count(lm) == 3);
  CHECK(lm_index(lm, "c") == 1);
  CHECK(lm_index(lm, "b") == 2);
  CHECK(lm_index(lm, "a") == 0);
  CHECK(lm_index(lm, "never") == 0);
  auto wide = build_lm_vocab(data.sentences, 100);
  CHECK(lm_class_count(wide) == 5);
  CHECK(lm_index(wide, "a") == 3);  // ties keep first occurrence
  CHECK(lm_index(wide, "d") == 4);
}
