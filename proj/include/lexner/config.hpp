#pragma once

// Experiment configuration: one `key = value` text file per run, with
// command-line overrides applied on top.

#include <iosfwd>
#include <string>
#include <vector>

#include "lexner/corpus.hpp"
#include "lexner/network.hpp"
#include "lexner/trainer.hpp"

namespace lexner {

struct AppConfig {
  // paths; empty means unset
  std::string train;
  std::string dev;
  std::string test;
  std::string lexicon;
  std::string pretrained;
  std::string checkpoint;
  std::string output_dir = ".";
  std::string input;   // tag/eval input; empty reads stdin for tag
  std::string output;  // tag/eval/lexicon-stats/learning-curve output; empty writes stdout

  std::string input_format = "conll";  // conll | raw
  std::string eval_on = "test";        // test | dev, used when input is unset
  std::vector<std::string> labels = TagScheme::equipment_domain().labels();
  std::vector<std::size_t> sizes;  // learning-curve training-set sizes
  std::size_t top_k = 10;          // lexicon-stats phrases listed

  TrainConfig train_config;
  ModelConfig model_config;

  TagScheme scheme() const { return TagScheme(labels); }
  /// Range checks over every field; throws ConfigError naming the key.
  void validate() const;
};

/// Every key accepted in config files and as `--key` overrides.
const std::vector<std::string>& config_keys();

/// Parses and stores one value. Throws ConfigError naming the key when the
/// key is unknown or the value does not parse.
void set_config_value(AppConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const AppConfig& config, const std::string& key);

AppConfig parse_config(std::istream& in);
AppConfig load_config(const std::string& path);

/// The resolved configuration in the file format, one key per line.
void write_config(std::ostream& out, const AppConfig& config);

/// Checks that the paths `command` needs are set and exist.
void require_paths(const AppConfig& config, const std::string& command);

}  // namespace lexner
