#pragma once

// Column-format tagged corpora and BIO tag handling.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexner {

struct Token {
  std::string surface;
  std::optional<std::string> gold_tag;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool tagged() const { return !tokens.empty() && tokens.front().gold_tag.has_value(); }
  std::vector<std::string> surfaces() const;
  std::vector<std::string> tags() const;

  bool operator==(const Sentence&) const = default;
};

/// Label inventory plus the derived BIO tag set.
///
/// Tag indices are assigned as: 0 = "O", then for the i-th label (0-based)
/// 2i+1 = "B-<label>" and 2i+2 = "I-<label>".
class TagScheme {
 public:
  TagScheme() = default;
  explicit TagScheme(std::vector<std::string> labels);

  /// PER, ORG, PCT, OUT, SER, TIM.
  static TagScheme equipment_domain();

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t tag_count() const { return tags_.size(); }
  const std::string& tag(int index) const { return tags_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& tags() const { return tags_; }

  bool contains(std::string_view tag) const;
  /// Throws DataError naming the tag when it is outside the scheme.
  int index_of(std::string_view tag) const;

  bool operator==(const TagScheme& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> index_;
};

/// Half-open token range [start, end) carrying one label.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  bool operator==(const EntitySpan&) const = default;
  auto operator<=>(const EntitySpan&) const = default;
};

struct Dataset {
  std::vector<Sentence> sentences;
  TagScheme scheme;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
};

Dataset read_conll(std::istream& in, const TagScheme& scheme);
Dataset read_conll_file(const std::string& path, const TagScheme& scheme);
void write_conll(std::ostream& out, const Dataset& dataset);
std::string write_conll(const Dataset& dataset);

struct BioCheck {
  std::vector<std::string> tags;
  std::vector<std::size_t> violations;
};

/// Finds I-X tags that do not continue an X entity. With `repair` each such
/// tag is rewritten to B-X, matching how conlleval reads them.
BioCheck validate_bio(const std::vector<std::string>& tags, const TagScheme& scheme, bool repair);

/// Requires a strictly valid BIO sequence; throws DataError otherwise.
std::vector<EntitySpan> extract_spans(const std::vector<std::string>& tags);

/// Inverse of extract_spans for non-overlapping spans.
std::vector<std::string> spans_to_bio(const std::vector<EntitySpan>& spans, std::size_t length);

/// Whitespace split followed by peeling ASCII punctuation off token edges.
Sentence tokenize_raw(std::string_view text);

}  // namespace lexner
