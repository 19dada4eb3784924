#include "lexner/corpus.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexner/error.hpp"

namespace lexner {

namespace {

bool is_label(std::string_view label) {
  if (label.empty()) return false;
  for (char ch : label)
    if (!(std::isupper(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) || ch == '_'))
      return false;
  return std::isupper(static_cast<unsigned char>(label.front())) != 0;
}

// Splits "B-ORG" into ('B', "ORG"); returns prefix 'O' for "O".
std::pair<char, std::string_view> split_tag(std::string_view tag) {
  if (tag == "O") return {'O', {}};
  return {tag.front(), tag.substr(2)};
}

std::vector<std::string_view> split_columns(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) cols.push_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

bool is_ascii_punct(char ch) { return std::ispunct(static_cast<unsigned char>(ch)) != 0; }

}  // namespace

std::vector<std::string> Sentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::string> Sentence::tags() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.gold_tag.value_or("O"));
  return out;
}

TagScheme::TagScheme(std::vector<std::string> labels) : labels_(std::move(labels)) {
  tags_.push_back("O");
  for (const auto& label : labels_) {
    if (!is_label(label)) throw ConfigError("invalid label '" + label + "': labels must be uppercase ASCII");
    tags_.push_back("B-" + label);
    tags_.push_back("I-" + label);
  }
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (!index_.emplace(tags_[i], static_cast<int>(i)).second)
      throw ConfigError("duplicate label in tag scheme: " + tags_[i].substr(2));
  }
}

TagScheme TagScheme::equipment_domain() { return TagScheme({"PER", "ORG", "PCT", "OUT", "SER", "TIM"}); }

bool TagScheme::contains(std::string_view tag) const { return index_.count(std::string(tag)) > 0; }

int TagScheme::index_of(std::string_view tag) const {
  auto it = index_.find(std::string(tag));
  if (it == index_.end()) throw DataError("tag '" + std::string(tag) + "' is not in the tag scheme");
  return it->second;
}

Dataset read_conll(std::istream& in, const TagScheme& scheme) {
  Dataset dataset;
  dataset.scheme = scheme;
  Sentence current;
  std::size_t columns = 0;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!current.tokens.empty()) dataset.sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto cols = split_columns(line);
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols.front().rfind("-DOCSTART-", 0) == 0) continue;

    if (columns == 0) {
      columns = cols.size();
    } else if (cols.size() != columns) {
      if ((columns == 1) != (cols.size() == 1))
        throw DataError("line " + std::to_string(line_no) + ": mixed tagged and untagged lines in one file");
      throw DataError("line " + std::to_string(line_no) + ": malformed line, expected " + std::to_string(columns) +
                      " columns, got " + std::to_string(cols.size()));
    }

    Token token{std::string(cols.front()), std::nullopt};
    if (columns > 1) {
      std::string tag(cols.back());
      if (!scheme.contains(tag))
        throw DataError("line " + std::to_string(line_no) + ": tag '" + tag + "' is not in the tag scheme");
      token.gold_tag = std::move(tag);
    }
    current.tokens.push_back(std::move(token));
  }
  flush();
  return dataset;
}

Dataset read_conll_file(const std::string& path, const TagScheme& scheme) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return read_conll(in, scheme);
}

void write_conll(std::ostream& out, const Dataset& dataset) {
  for (const auto& sentence : dataset.sentences) {
    for (const auto& token : sentence.tokens) {
      out << token.surface;
      if (token.gold_tag) out << ' ' << *token.gold_tag;
      out << '\n';
    }
    out << '\n';
  }
}

std::string write_conll(const Dataset& dataset) {
  std::ostringstream out;
  write_conll(out, dataset);
  return out.str();
}

BioCheck validate_bio(const std::vector<std::string>& tags, const TagScheme& scheme, bool repair) {
  BioCheck result{tags, {}};
  std::string_view previous_label;
  char previous_prefix = 'O';
  for (std::size_t i = 0; i < tags.size(); ++i) {
    scheme.index_of(tags[i]);
    auto [prefix, label] = split_tag(tags[i]);
    if (prefix == 'I' && (previous_prefix == 'O' || previous_label != label)) {
      result.violations.push_back(i);
      if (repair) result.tags[i] = "B-" + std::string(label);
    }
    previous_prefix = prefix;
    previous_label = label;
  }
  return result;
}

std::vector<EntitySpan> extract_spans(const std::vector<std::string>& tags) {
  std::vector<EntitySpan> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto& tag = tags[i];
    if (tag == "O") continue;
    if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I'))
      throw DataError("malformed BIO tag '" + tag + "' at position " + std::to_string(i));
    std::string label = tag.substr(2);
    if (tag[0] == 'B') {
      spans.push_back({i, i + 1, std::move(label)});
      continue;
    }
    if (spans.empty() || spans.back().end != i || spans.back().label != label)
      throw DataError("invalid BIO sequence: '" + tag + "' at position " + std::to_string(i) +
                      " does not continue an entity");
    spans.back().end = i + 1;
  }
  return spans;
}

std::vector<std::string> spans_to_bio(const std::vector<EntitySpan>& spans, std::size_t length) {
  std::vector<std::string> tags(length, "O");
  for (const auto& span : spans) {
    if (span.start >= span.end || span.end > length)
      throw DataError("entity span out of range");
    tags[span.start] = "B-" + span.label;
    for (std::size_t i = span.start + 1; i < span.end; ++i) tags[i] = "I-" + span.label;
  }
  return tags;
}

Sentence tokenize_raw(std::string_view text) {
  Sentence sentence;
  std::istringstream words{std::string(text)};
  std::string word;
  while (words >> word) {
    std::size_t begin = 0;
    std::size_t end = word.size();
    std::vector<std::string> trailing;
    while (begin < end && is_ascii_punct(word[begin])) {
      sentence.tokens.push_back({std::string(1, word[begin]), std::nullopt});
      ++begin;
    }
    while (end > begin && is_ascii_punct(word[end - 1])) {
      trailing.emplace_back(1, word[end - 1]);
      --end;
    }
    if (end > begin) sentence.tokens.push_back({word.substr(begin, end - begin), std::nullopt});
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) sentence.tokens.push_back({*it, std::nullopt});
  }
  if (sentence.tokens.empty()) throw DataError("empty sentence");
  return sentence;
}

}  // namespace lexner
