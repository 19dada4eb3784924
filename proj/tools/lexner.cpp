// lexner: train, tag, eval, lexicon-stats, learning-curve, synth.
//
// Every subcommand takes an optional config file followed by `--key value`
// overrides. Failures print one line `lexner: error[<kind>]: <message>` to
// stderr and exit 1 (usage/config), 2 (data) or 3 (numeric).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "lexner/app.hpp"
#include "lexner/config.hpp"
#include "lexner/error.hpp"
#include "lexner/synthetic.hpp"

using namespace lexner;

namespace {

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int fail(const char* kind, int code, const std::string& message) {
  std::cerr << "lexner: error[" << kind << "]: " << one_line(message) << std::endl;
  return code;
}

struct ConfigCommand {
  explicit ConfigCommand(CLI::App* a) : app(a) {}

  CLI::App* app;
  std::string config_path;
  std::map<std::string, std::string> overrides;

  AppConfig resolve() const {
    AppConfig config = config_path.empty() ? AppConfig{} : load_config(config_path);
    for (const auto& key : config_keys()) {
      auto it = overrides.find(key);
      if (it != overrides.end()) set_config_value(config, key, it->second);
    }
    return config;
  }
};

void add_config_options(ConfigCommand& cmd) {
  cmd.app->add_option("config", cmd.config_path, "config file of `key = value` lines");
  for (const auto& key : config_keys()) {
    cmd.app->add_option_function<std::string>(
        "--" + key, [&cmd, key](const std::string& v) { cmd.overrides[key] = v; }, "override config key " + key);
  }
}

void write_split(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_conll(out, d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexicon-enhanced named entity recognition"};
  app.require_subcommand(1);

  ConfigCommand train_cmd{app.add_subcommand("train", "train a tagger; writes checkpoint and metrics.csv")};
  ConfigCommand tag_cmd{app.add_subcommand("tag", "tag raw text or CoNLL input with a checkpoint")};
  ConfigCommand eval_cmd{app.add_subcommand("eval", "entity-level P/R/F1 of a checkpoint")};
  ConfigCommand stats_cmd{app.add_subcommand("lexicon-stats", "lexicon match and frequency report")};
  ConfigCommand curve_cmd{app.add_subcommand("learning-curve", "test F1 as a function of training-set size")};
  for (auto* c : {&train_cmd, &tag_cmd, &eval_cmd, &stats_cmd, &curve_cmd}) add_config_options(*c);

  SyntheticConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic tagged corpus and gazetteer");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--train-sentences", synth.train_sentences);
  synth_cmd->add_option("--dev-sentences", synth.dev_sentences);
  synth_cmd->add_option("--test-sentences", synth.test_sentences);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", 1, e.what());
  }

  try {
    if (train_cmd.app->parsed()) {
      cmd_train(train_cmd.resolve(), std::cerr);
    } else if (tag_cmd.app->parsed()) {
      cmd_tag(tag_cmd.resolve(), std::cin, std::cout);
    } else if (eval_cmd.app->parsed()) {
      cmd_eval(eval_cmd.resolve(), std::cout);
    } else if (stats_cmd.app->parsed()) {
      cmd_lexicon_stats(stats_cmd.resolve(), std::cout);
    } else if (curve_cmd.app->parsed()) {
      cmd_learning_curve(curve_cmd.resolve(), std::cout, std::cerr);
    } else if (synth_cmd->parsed()) {
      const auto corpus = generate_synthetic(synth);
      std::filesystem::create_directories(synth_out);
      const std::filesystem::path dir(synth_out);
      write_split((dir / "train.conll").string(), corpus.train);
      write_split((dir / "dev.conll").string(), corpus.dev);
      write_split((dir / "test.conll").string(), corpus.test);
      std::ofstream gaz(dir / "gazetteer.txt", std::ios::binary);
      if (!gaz) throw DataError("cannot write " + (dir / "gazetteer.txt").string());
      write_gazetteer(gaz, corpus.gazetteer);
    }
    std::cout.flush();
    if (!std::cout) return fail("data", 2, "failed writing standard output");
  } catch (const ConfigError& e) {
    return fail("config", e.exit_code(), e.what());
  } catch (const DataError& e) {
    return fail("data", e.exit_code(), e.what());
  } catch (const NumericError& e) {
    return fail("numeric", e.exit_code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("data", 2, e.what());
  } catch (const std::bad_alloc&) {
    return fail("numeric", 3, "out of memory");
  } catch (const std::exception& e) {
    return fail("data", 2, e.what());
  }
  return 0;
}
