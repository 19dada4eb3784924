#include "lexner/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "lexner/error.hpp"

namespace lexner {

bool EmbeddingTable::add(const std::string& key, const Eigen::Ref<const Eigen::VectorXd>& vec) {
  if (vec.size() != dim_) throw DataError("embedding for '" + key + "' has wrong dimension");
  if (!index_.emplace(key, static_cast<std::int64_t>(keys_.size())).second) return false;
  keys_.push_back(key);
  data_.insert(data_.end(), vec.data(), vec.data() + vec.size());
  return true;
}

std::int64_t EmbeddingTable::lookup(const std::string& key) const {
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  it = index_.find(to_lower_ascii(key));
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd EmbeddingTable::vector(std::size_t row) const {
  return Eigen::Map<const Eigen::VectorXd>(data_.data() + row * static_cast<std::size_t>(dim_), dim_);
}

Eigen::MatrixXd EmbeddingTable::matrix() const {
  return Eigen::Map<const Eigen::MatrixXd>(data_.data(), dim_, static_cast<Eigen::Index>(keys_.size()));
}

EmbeddingTable load_pretrained(std::istream& in, int expected_dim) {
  EmbeddingTable table(expected_dim);
  std::string line;
  std::size_t line_no = 0;
  Eigen::VectorXd vec(expected_dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t pos = line.find(' ');
    if (line.empty()) continue;
    std::string word = line.substr(0, pos);
    int d = 0;
    const char* p = pos == std::string::npos ? line.data() + line.size() : line.data() + pos;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double value = 0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc() || (next < end && *next != ' '))
        throw DataError("line " + std::to_string(line_no) + ": unparsable number in embedding for '" + word + "'");
      if (d < expected_dim) vec[d] = value;
      ++d;
      p = next;
    }
    if (d != expected_dim)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected_dim) +
                      " dimensions, got " + std::to_string(d));
    table.add(word, vec);
  }
  return table;
}

EmbeddingTable load_pretrained_file(const std::string& path, int expected_dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pretrained vectors: " + path);
  return load_pretrained(in, expected_dim);
}

Vocab::Vocab() {
  add(kPadToken);
  add(kUnkToken);
}

Vocab::Vocab(const std::vector<std::string>& words) : Vocab() {
  for (const auto& w : words) add(w);
}

int Vocab::add(const std::string& word) {
  auto [it, inserted] = index_.emplace(word, static_cast<int>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

int Vocab::lookup(const std::string& word) const {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  it = index_.find(to_lower_ascii(word));
  return it == index_.end() ? kUnk : it->second;
}

CharVocab::CharVocab() {
  add(kPadToken);
  add(kUnkToken);
  add(kSepToken);
}

CharVocab::CharVocab(const std::vector<std::string>& chars) : CharVocab() {
  for (const auto& c : chars) add(c);
}

int CharVocab::add(const std::string& ch) {
  auto [it, inserted] = index_.emplace(ch, static_cast<int>(chars_.size()));
  if (inserted) chars_.push_back(ch);
  return it->second;
}

int CharVocab::lookup(const std::string& ch) const {
  auto it = index_.find(ch);
  return it == index_.end() ? kUnk : it->second;
}

CharVocab CharVocab::build(const std::vector<Sentence>& sentences) {
  CharVocab vocab;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens)
      for (const auto& ch : utf8_chars(t.surface)) vocab.add(ch);
  return vocab;
}

std::vector<std::string> utf8_chars(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 1;
    if (i + len > text.size()) len = 1;
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

WordEmbeddings build_vocab(const std::vector<Sentence>& train, const std::vector<Sentence>& other_splits,
                           const EmbeddingTable& pretrained, int dim, std::uint64_t seed) {
  if (pretrained.size() > 0 && pretrained.dim() != dim)
    throw ConfigError("pretrained vectors have dimension " + std::to_string(pretrained.dim()) + ", word_dim is " +
                      std::to_string(dim));
  WordEmbeddings out;
  for (const auto& s : train)
    for (const auto& t : s.tokens) out.vocab.add(t.surface);
  for (const auto& s : other_splits)
    for (const auto& t : s.tokens)
      if (!out.vocab.contains(t.surface) && pretrained.lookup(t.surface) >= 0) out.vocab.add(t.surface);

  UniformSource rng(seed);
  const double bound = std::sqrt(3.0 / dim);
  out.table = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(out.vocab.size()));
  for (std::size_t i = 1; i < out.vocab.size(); ++i) {
    std::int64_t row = i == static_cast<std::size_t>(Vocab::kUnk) ? -1 : pretrained.lookup(out.vocab.words()[i]);
    auto col = out.table.col(static_cast<Eigen::Index>(i));
    if (row >= 0) {
      col = pretrained.vector(static_cast<std::size_t>(row));
    } else {
      for (Eigen::Index d = 0; d < dim; ++d) col[d] = rng.symmetric(bound);
    }
  }
  return out;
}

Eigen::MatrixXd init_phrase_embeddings(const Lexicon& lexicon, const WordEmbeddings& words, int phrase_dim,
                                       std::uint64_t seed) {
  if (phrase_dim > words.table.rows())
    throw ConfigError("phrase_dim " + std::to_string(phrase_dim) + " exceeds word_dim " +
                      std::to_string(words.table.rows()));
  Eigen::MatrixXd out(phrase_dim, static_cast<Eigen::Index>(lexicon.size()) + 1);
  UniformSource rng(seed);
  const double bound = std::sqrt(3.0 / phrase_dim);
  for (Eigen::Index d = 0; d < phrase_dim; ++d) out(d, 0) = rng.symmetric(bound);

  for (std::size_t p = 0; p < lexicon.size(); ++p) {
    const auto& tokens = lexicon.phrase_tokens(static_cast<PhraseId>(p));
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(phrase_dim);
    for (const auto& t : tokens) sum += words.table.col(words.vocab.lookup(t)).head(phrase_dim);
    out.col(phrase_row(static_cast<PhraseId>(p))) = sum / static_cast<double>(tokens.size());
  }
  return out;
}

}  // namespace lexner
