#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "lexner/corpus.hpp"
#include "lexner/lexicon.hpp"
#include "lexner/trainer.hpp"

namespace fixture {

inline lexner::Dataset conll(const std::string& text, const lexner::TagScheme& scheme = lexner::TagScheme::equipment_domain()) {
  std::istringstream in(text);
  return lexner::read_conll(in, scheme);
}

inline lexner::Lexicon lexicon(const std::string& text) {
  std::istringstream in(text);
  return lexner::load_lexicon(in);
}

inline const char* kTinyCorpus =
    "The O\nsolid B-PCT\nrocket I-PCT\nmotor I-PCT\nfired O\n.\tO\n\n"
    "NASA B-ORG\nbought O\na O\nrocket B-PCT\nmotor I-PCT\nin O\nMay B-TIM\n\n"
    "Lee B-PER\n";

inline const char* kTinyLexicon = "rocket motor\nsolid rocket motor\nrocket\nnasa\nmay\n";

/// A deliberately small network so finite differences stay cheap.
inline lexner::ModelConfig tiny_config(lexner::LexiconMode mode) {
  lexner::ModelConfig c;
  c.word_dim = 6;
  c.char_dim = 3;
  c.hidden = 4;
  c.highway_depth = 1;
  c.dropout = 0.5;
  c.phrase_dim = 3;
  c.lexicon_mode = mode;
  c.lm_vocab_cap = 6;
  return c;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lexner_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream out(file(name), std::ios::binary);
    out << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace fixture
