#include "lexner/app.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lexner/embeddings.hpp"
#include "lexner/error.hpp"
#include "lexner/lexicon.hpp"
#include "lexner/model.hpp"

namespace lexner {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir.empty() ? "." : dir) / name).string();
}

/// Corpora and resources a training run reads, owned in one place.
struct TrainingData {
  Dataset train;
  std::optional<Dataset> dev;
  std::optional<Dataset> test;
  std::optional<Lexicon> lexicon;
  std::optional<EmbeddingTable> pretrained;

  explicit TrainingData(const AppConfig& config) {
    const auto scheme = config.scheme();
    train = read_conll_file(config.train, scheme);
    if (!config.dev.empty()) dev = read_conll_file(config.dev, scheme);
    if (!config.test.empty()) test = read_conll_file(config.test, scheme);
    if (config.model_config.lexicon_mode != LexiconMode::None) lexicon = load_lexicon_file(config.lexicon);
    if (!config.pretrained.empty()) pretrained = load_pretrained_file(config.pretrained, config.model_config.word_dim);
  }

  TrainInputs inputs(const Dataset& train_split) const {
    TrainInputs in;
    in.train = &train_split;
    in.dev = dev ? &*dev : nullptr;
    in.test = test ? &*test : nullptr;
    in.lexicon = lexicon ? &*lexicon : nullptr;
    in.pretrained = pretrained ? &*pretrained : nullptr;
    return in;
  }
};

Model load_model(const AppConfig& config) {
  auto checkpoint = load_checkpoint_file(config.checkpoint);
  if (!(checkpoint.model.scheme == config.scheme())) {
    std::string have;
    for (const auto& l : checkpoint.model.scheme.labels()) have += (have.empty() ? "" : ",") + l;
    throw DataError("checkpoint labels " + have + " do not match the configured labels");
  }
  return std::move(checkpoint.model);
}

void echo_config(const AppConfig& config, std::ostream& log) {
  std::ostringstream text;
  write_config(text, config);
  std::istringstream lines(text.str());
  std::string line;
  while (std::getline(lines, line)) log << "# " << line << '\n';
}

}  // namespace

TrainResult cmd_train(const AppConfig& config, std::ostream& log) {
  config.validate();
  require_paths(config, "train");
  echo_config(config, log);
  TrainingData data(config);

  std::filesystem::create_directories(config.output_dir.empty() ? "." : config.output_dir);
  const std::string checkpoint_path =
      config.checkpoint.empty() ? join_path(config.output_dir, "model.ckpt") : config.checkpoint;
  const std::string metrics_path = join_path(config.output_dir, "metrics.csv");
  auto metrics = open_output(metrics_path);
  write_metrics_csv(metrics, {});
  metrics.flush();

  auto result = train(data.inputs(data.train), config.model_config, config.train_config, [&](const EpochRecord& r) {
    std::ostringstream row;
    write_metrics_csv(row, {r});
    const std::string text = row.str();
    metrics << text.substr(text.find('\n') + 1);
    metrics.flush();
    log << "epoch " << r.epoch << " loss " << r.train_loss << " lr " << r.lr;
    if (data.dev) log << " dev P/R/F1 " << fixed2(r.dev_precision) << '/' << fixed2(r.dev_recall) << '/' << fixed2(r.dev_f1);
    log << '\n';
  });
  save_checkpoint_file(checkpoint_path, result.checkpoint);
  if (data.dev)
    log << "best dev F1 " << fixed2(result.checkpoint.best_dev_f1) << " at epoch " << result.checkpoint.epoch << '\n';
  log << "checkpoint written to " << checkpoint_path << '\n';
  return result;
}

void cmd_tag(const AppConfig& config, std::istream& in, std::ostream& out) {
  config.validate();
  require_paths(config, "tag");
  const Model model = load_model(config);

  std::ifstream file;
  if (!config.input.empty()) {
    file.open(config.input, std::ios::binary);
    if (!file) throw DataError("cannot open input: " + config.input);
  }
  std::istream& source = config.input.empty() ? in : file;

  Dataset data{{}, model.scheme};
  if (config.input_format == "raw") {
    std::string line;
    while (std::getline(source, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      data.sentences.push_back(tokenize_raw(line));
    }
  } else {
    data = read_conll(source, model.scheme);
  }

  std::ofstream file_out;
  if (!config.output.empty()) file_out = open_output(config.output);
  std::ostream& sink = config.output.empty() ? out : file_out;
  for (auto& s : data.sentences) {
    const auto tags = model.predict(s);
    for (std::size_t i = 0; i < s.size(); ++i) s.tokens[i].gold_tag = tags[i];
  }
  write_conll(sink, data);
}

EvalReport cmd_eval(const AppConfig& config, std::ostream& out) {
  config.validate();
  require_paths(config, "eval");
  const Model model = load_model(config);
  const std::string path = config.input.empty() ? (config.eval_on == "dev" ? config.dev : config.test) : config.input;
  const auto data = read_conll_file(path, model.scheme);
  for (std::size_t i = 0; i < data.sentences.size(); ++i)
    if (!data.sentences[i].tagged()) throw DataError(path + ": sentence " + std::to_string(i) + " has no gold tags");
  auto report = evaluate_model(model, data);
  write_report_table(out, report);
  if (!config.output.empty()) {
    auto csv = open_output(config.output);
    write_report_csv(csv, report);
  }
  return report;
}

void cmd_lexicon_stats(const AppConfig& config, std::ostream& out) {
  config.validate();
  require_paths(config, "lexicon-stats");
  const auto scheme = config.scheme();
  const auto lexicon = load_lexicon_file(config.lexicon);
  const auto train = read_conll_file(config.train, scheme);
  const auto test = config.test.empty() ? Dataset{{}, scheme} : read_conll_file(config.test, scheme);
  const auto report = lexicon_report(lexicon, train.sentences, test.sentences, config.top_k);
  if (config.output.empty()) {
    write_lexicon_report(out, report);
  } else {
    auto file = open_output(config.output);
    write_lexicon_report(file, report);
  }
}

void write_learning_curve_header(std::ostream& out, const TagScheme& scheme) {
  out << "size";
  for (const auto& l : scheme.labels()) out << ',' << l;
  out << ",overall_f1\n";
}

void cmd_learning_curve(const AppConfig& config, std::ostream& out, std::ostream& log) {
  config.validate();
  require_paths(config, "learning-curve");
  echo_config(config, log);
  TrainingData data(config);
  const auto& test = *data.test;
  if (test.empty()) throw DataError(config.test + ": test set is empty");
  const std::size_t n = data.train.size();
  for (std::size_t s : config.sizes)
    if (s > n)
      throw ConfigError("sizes: " + std::to_string(s) + " exceeds the " + std::to_string(n) + " training sentences");

  std::ofstream file_out;
  if (!config.output.empty()) file_out = open_output(config.output);
  std::ostream& sink = config.output.empty() ? out : file_out;
  write_learning_curve_header(sink, config.scheme());
  if (config.sizes.empty()) return;

  // One shuffle for every size; each run trains on a prefix of it.
  const auto order = make_batches(n, n, config.train_config.seed ^ 0x4C43525655ULL, 0).front();
  for (std::size_t s : config.sizes) {
    Dataset subset{{}, data.train.scheme};
    subset.sentences.reserve(s);
    for (std::size_t i = 0; i < s; ++i) subset.sentences.push_back(data.train.sentences[order[i]]);
    log << "learning curve: training on " << s << " sentences\n";
    auto result = train(data.inputs(subset), config.model_config, config.train_config);
    const auto report = evaluate_model(result.checkpoint.model, test);
    sink << s;
    for (const auto& l : report.labels) sink << ',' << fixed2(report.label(l).f1());
    sink << ',' << fixed2(report.overall.f1()) << '\n';
    sink.flush();
    log << "learning curve: size " << s << " test F1 " << fixed2(report.overall.f1()) << '\n';
  }
}

}  // namespace lexner
