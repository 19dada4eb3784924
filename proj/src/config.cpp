#include "lexner/config.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "lexner/error.hpp"

namespace lexner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError(key + ": cannot parse '" + value + "' as " + expected);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, "an integer");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) bad_value(key, value, "a number");
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest text that reads back to the same value.
  for (int p = 1; p <= 17; ++p) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.*g", p, v);
    if (std::strtod(tmp, nullptr) == v) return tmp;
  }
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "," : "") << items[i];
  return out.str();
}

struct Field {
  std::function<void(AppConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const AppConfig&)> get;
};

Field string_field(std::string AppConfig::*member) {
  return {[member](AppConfig& c, const std::string&, const std::string& v) { c.*member = v; },
          [member](const AppConfig& c) { return c.*member; }};
}

template <typename Owner>
Field int_field(Owner AppConfig::*owner, int Owner::*member) {
  return {[=](AppConfig& c, const std::string& k, const std::string& v) { (c.*owner).*member = parse_integer<int>(k, v); },
          [=](const AppConfig& c) { return std::to_string((c.*owner).*member); }};
}

template <typename Owner>
Field double_field(Owner AppConfig::*owner, double Owner::*member) {
  return {[=](AppConfig& c, const std::string& k, const std::string& v) { (c.*owner).*member = parse_double(k, v); },
          [=](const AppConfig& c) { return format_double((c.*owner).*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    using A = AppConfig;
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("train", string_field(&A::train));
    t.emplace_back("dev", string_field(&A::dev));
    t.emplace_back("test", string_field(&A::test));
    t.emplace_back("lexicon", string_field(&A::lexicon));
    t.emplace_back("pretrained", string_field(&A::pretrained));
    t.emplace_back("checkpoint", string_field(&A::checkpoint));
    t.emplace_back("output_dir", string_field(&A::output_dir));
    t.emplace_back("input", string_field(&A::input));
    t.emplace_back("output", string_field(&A::output));
    t.emplace_back("input_format", string_field(&A::input_format));
    t.emplace_back("eval_on", string_field(&A::eval_on));
    t.emplace_back("labels", Field{[](A& c, const std::string&, const std::string& v) { c.labels = split_list(v); },
                                   [](const A& c) { return join(c.labels); }});
    t.emplace_back("sizes", Field{[](A& c, const std::string& k, const std::string& v) {
                                    c.sizes.clear();
                                    for (const auto& item : split_list(v)) c.sizes.push_back(parse_integer<std::size_t>(k, item));
                                  },
                                  [](const A& c) { return join(c.sizes); }});
    t.emplace_back("top_k", Field{[](A& c, const std::string& k, const std::string& v) { c.top_k = parse_integer<std::size_t>(k, v); },
                                  [](const A& c) { return std::to_string(c.top_k); }});

    t.emplace_back("eta0", double_field(&A::train_config, &TrainConfig::eta0));
    t.emplace_back("rho", double_field(&A::train_config, &TrainConfig::rho));
    t.emplace_back("batch_size", int_field(&A::train_config, &TrainConfig::batch_size));
    t.emplace_back("momentum", double_field(&A::train_config, &TrainConfig::momentum));
    t.emplace_back("clip_threshold", double_field(&A::train_config, &TrainConfig::clip_threshold));
    t.emplace_back("epochs", int_field(&A::train_config, &TrainConfig::epochs));
    t.emplace_back("lm_weight", double_field(&A::train_config, &TrainConfig::lm_weight));
    t.emplace_back("seed", Field{[](A& c, const std::string& k, const std::string& v) {
                                   c.train_config.seed = parse_integer<std::uint64_t>(k, v);
                                 },
                                 [](const A& c) { return std::to_string(c.train_config.seed); }});

    t.emplace_back("word_dim", int_field(&A::model_config, &ModelConfig::word_dim));
    t.emplace_back("char_dim", int_field(&A::model_config, &ModelConfig::char_dim));
    t.emplace_back("hidden", int_field(&A::model_config, &ModelConfig::hidden));
    t.emplace_back("highway_depth", int_field(&A::model_config, &ModelConfig::highway_depth));
    t.emplace_back("dropout", double_field(&A::model_config, &ModelConfig::dropout));
    t.emplace_back("phrase_dim", int_field(&A::model_config, &ModelConfig::phrase_dim));
    t.emplace_back("lm_vocab_cap", int_field(&A::model_config, &ModelConfig::lm_vocab_cap));
    t.emplace_back("lexicon_mode", Field{[](A& c, const std::string& k, const std::string& v) {
                                           try {
                                             c.model_config.lexicon_mode = parse_lexicon_mode(v);
                                           } catch (const ConfigError&) {
                                             bad_value(k, v, "none, exsoftword or softlexicon");
                                           }
                                         },
                                         [](const A& c) { return std::string(to_string(c.model_config.lexicon_mode)); }});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, field] : fields())
    if (name == key) return &field;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.first);
    return k;
  }();
  return keys;
}

void set_config_value(AppConfig& config, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + key + "'");
  f->set(config, key, value);
}

std::string get_config_value(const AppConfig& config, const std::string& key) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + key + "'");
  return f->get(config);
}

void AppConfig::validate() const {
  train_config.validate();
  model_config.validate();
  if (labels.empty()) throw ConfigError("labels must not be empty");
  (void)scheme();
  if (input_format != "conll" && input_format != "raw") throw ConfigError("input_format must be conll or raw");
  if (eval_on != "test" && eval_on != "dev") throw ConfigError("eval_on must be test or dev");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ConfigError("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ConfigError("sizes must be strictly ascending");
  }
  if (top_k == 0) throw ConfigError("top_k must be positive");
}

AppConfig parse_config(std::istream& in) {
  AppConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(key + ": set twice (line " + std::to_string(line_no) + ")");
    set_config_value(config, key, trim(line.substr(eq + 1)));
  }
  return config;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

void write_config(std::ostream& out, const AppConfig& config) {
  for (const auto& [name, field] : fields()) out << name << " = " << field.get(config) << '\n';
}

void require_paths(const AppConfig& config, const std::string& command) {
  std::vector<std::pair<std::string, bool>> keys;  // key, required
  const bool needs_lexicon = config.model_config.lexicon_mode != LexiconMode::None;
  if (command == "train") {
    keys = {{"train", true}, {"dev", false}, {"test", false}, {"lexicon", needs_lexicon}, {"pretrained", false}};
  } else if (command == "tag") {
    keys = {{"checkpoint", true}, {"input", false}};
  } else if (command == "eval") {
    keys = {{"checkpoint", true}, {"input", false}, {config.eval_on, config.input.empty()}};
  } else if (command == "lexicon-stats") {
    keys = {{"lexicon", true}, {"train", true}, {"test", false}};
  } else if (command == "learning-curve") {
    keys = {{"train", true}, {"test", true}, {"dev", false}, {"lexicon", needs_lexicon}, {"pretrained", false}};
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  for (const auto& [key, required] : keys) {
    const std::string path = get_config_value(config, key);
    if (path.empty()) {
      if (required) throw ConfigError(key + ": required for " + command + " but not set");
      continue;
    }
    if (!std::filesystem::is_regular_file(path)) throw ConfigError(key + ": file not found: " + path);
  }
}

}  // namespace lexner
