#include "lexner/model.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "lexner/crf.hpp"
#include "lexner/error.hpp"

namespace lexner {

using nlohmann::json;

FeatureBuilder Model::feature_builder() const {
  return FeatureBuilder(words, lm_words, chars, config.lexicon_mode, lexicon ? &*lexicon : nullptr);
}

std::vector<int> Model::predict_indices(const SentenceFeatures& features) const {
  auto encoded = encode_sentence(features, params, config, ForwardOptions{});
  return crf::viterbi_decode(encoded.emissions, params.transitions).tags;
}

std::vector<std::string> Model::predict(const Sentence& sentence) const {
  auto builder = feature_builder();
  std::vector<std::string> out;
  for (int idx : predict_indices(builder.build(sentence))) out.push_back(scheme.tag(idx));
  return out;
}

EvalReport evaluate_model(const Model& model, const Dataset& dataset) {
  if (dataset.empty()) throw DataError("cannot evaluate on an empty dataset");
  if (!(dataset.scheme == model.scheme)) throw DataError("dataset tag scheme does not match the model's");
  auto builder = model.feature_builder();
  std::vector<std::vector<std::string>> gold, pred;
  gold.reserve(dataset.size());
  pred.reserve(dataset.size());
  for (const auto& s : dataset.sentences) {
    gold.push_back(s.tags());
    std::vector<std::string> tags;
    for (int idx : model.predict_indices(builder.build(s))) tags.push_back(model.scheme.tag(idx));
    pred.push_back(std::move(tags));
  }
  return entity_f1(gold, pred, model.scheme);
}

// ---------------------------------------------------------------------------
// Checkpoint container

namespace {

constexpr std::array<char, 8> kMagic{'L', 'E', 'X', 'N', 'E', 'R', 'C', 'K'};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
}

template <typename T>
T read_le(std::istream& in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    int byte = in.get();
    if (byte == EOF) throw DataError("checkpoint is truncated");
    value |= static_cast<std::uint64_t>(byte & 0xFF) << (8 * i);
  }
  return static_cast<T>(value);
}

json config_to_json(const ModelConfig& c) {
  return {{"word_dim", c.word_dim},
          {"char_dim", c.char_dim},
          {"hidden", c.hidden},
          {"highway_depth", c.highway_depth},
          {"dropout", c.dropout},
          {"phrase_dim", c.phrase_dim},
          {"lexicon_mode", std::string(to_string(c.lexicon_mode))},
          {"lm_vocab_cap", c.lm_vocab_cap},
          {"tag_count", c.tag_count},
          {"word_vocab_size", c.word_vocab_size},
          {"char_vocab_size", c.char_vocab_size},
          {"lm_vocab_size", c.lm_vocab_size},
          {"phrase_count", c.phrase_count}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.word_dim = j.at("word_dim");
  c.char_dim = j.at("char_dim");
  c.hidden = j.at("hidden");
  c.highway_depth = j.at("highway_depth");
  c.dropout = j.at("dropout");
  c.phrase_dim = j.at("phrase_dim");
  c.lexicon_mode = parse_lexicon_mode(j.at("lexicon_mode").get<std::string>());
  c.lm_vocab_cap = j.at("lm_vocab_cap");
  c.tag_count = j.at("tag_count");
  c.word_vocab_size = j.at("word_vocab_size");
  c.char_vocab_size = j.at("char_vocab_size");
  c.lm_vocab_size = j.at("lm_vocab_size");
  c.phrase_count = j.at("phrase_count");
  return c;
}

// Vocabularies are stored without their reserved leading entries.
std::vector<std::string> drop_reserved(const std::vector<std::string>& all, std::size_t reserved) {
  return {all.begin() + static_cast<std::ptrdiff_t>(reserved), all.end()};
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& ck) {
  const Model& m = ck.model;
  json header;
  header["format_version"] = Checkpoint::kFormatVersion;
  header["config"] = config_to_json(m.config);
  header["labels"] = m.scheme.labels();
  header["words"] = drop_reserved(m.words.words(), 2);
  header["lm_words"] = drop_reserved(m.lm_words.words(), 2);
  header["chars"] = drop_reserved(m.chars.chars(), 3);
  if (m.lexicon) {
    std::vector<std::string> phrases;
    for (std::size_t i = 0; i < m.lexicon->lexicon.size(); ++i)
      phrases.push_back(m.lexicon->lexicon.phrase_text(static_cast<PhraseId>(i)));
    header["lexicon"] = {{"phrases", phrases}, {"z", m.lexicon->stats.z}, {"c", m.lexicon->stats.c}};
  } else {
    header["lexicon"] = nullptr;
  }
  header["training"] = {{"has_dev", ck.has_dev}, {"best_dev_f1", ck.best_dev_f1}, {"epoch", ck.epoch}};
  json tensors = json::array();
  m.params.for_each([&](const std::string& name, const Eigen::MatrixXd& t) {
    tensors.push_back({{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}});
  });
  header["tensors"] = tensors;

  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  write_le<std::uint32_t>(out, Checkpoint::kFormatVersion);
  write_le<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  m.params.for_each([&](const std::string&, const Eigen::MatrixXd& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) write_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(t.data()[i]));
  });
  if (!out) throw DataError("failed writing checkpoint");
}

void save_checkpoint_file(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot create checkpoint file: " + path);
  save_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError("not a lexner checkpoint (bad magic)");
  const auto version = read_le<std::uint32_t>(in);
  if (version != Checkpoint::kFormatVersion)
    throw DataError("unsupported checkpoint format version " + std::to_string(version));
  const auto length = read_le<std::uint64_t>(in);
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw DataError("checkpoint is truncated");

  Checkpoint ck;
  try {
    const json header = json::parse(text);
    Model& m = ck.model;
    m.config = config_from_json(header.at("config"));
    m.scheme = TagScheme(header.at("labels").get<std::vector<std::string>>());
    m.words = Vocab(header.at("words").get<std::vector<std::string>>());
    m.lm_words = Vocab(header.at("lm_words").get<std::vector<std::string>>());
    m.chars = CharVocab(header.at("chars").get<std::vector<std::string>>());
    if (!header.at("lexicon").is_null()) {
      const auto& lex = header.at("lexicon");
      std::vector<std::vector<std::string>> phrases;
      for (const auto& p : lex.at("phrases").get<std::vector<std::string>>()) {
        std::vector<std::string> tokens;
        std::size_t start = 0;
        while (start <= p.size()) {
          auto space = p.find(' ', start);
          if (space == std::string::npos) space = p.size();
          tokens.push_back(p.substr(start, space - start));
          start = space + 1;
        }
        phrases.push_back(std::move(tokens));
      }
      LexiconArtifacts artifacts{Lexicon(phrases), {}};
      artifacts.stats.z = lex.at("z").get<std::vector<std::int64_t>>();
      artifacts.stats.c = lex.at("c").get<std::int64_t>();
      if (artifacts.stats.z.size() != artifacts.lexicon.size()) throw DataError("checkpoint lexicon statistics are inconsistent");
      m.lexicon = std::move(artifacts);
    }
    const auto& training = header.at("training");
    ck.has_dev = training.at("has_dev");
    ck.best_dev_f1 = training.at("best_dev_f1");
    ck.epoch = training.at("epoch");

    const auto depth = static_cast<std::size_t>(m.config.highway_depth);
    m.params.highway_tag.resize(depth);
    m.params.highway_lm_fwd.resize(depth);
    m.params.highway_lm_bwd.resize(depth);
    const auto& directory = header.at("tensors");
    std::size_t index = 0;
    m.params.for_each([&](const std::string& name, Eigen::MatrixXd& t) {
      if (index >= directory.size() || directory[index].at("name") != name)
        throw DataError("checkpoint tensor directory does not match the model layout at '" + name + "'");
      t.resize(directory[index].at("rows").get<Eigen::Index>(), directory[index].at("cols").get<Eigen::Index>());
      ++index;
    });
    if (index != directory.size()) throw DataError("checkpoint has unexpected extra tensors");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint header: ") + e.what());
  }

  ck.model.params.for_each([&](const std::string&, Eigen::MatrixXd& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = std::bit_cast<double>(read_le<std::uint64_t>(in));
  });
  return ck;
}

Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  return load_checkpoint(in);
}

}  // namespace lexner
