#include "lexner/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "lexner/error.hpp"

namespace lexner {

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& ch : out)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return out;
}

Lexicon::Lexicon(const std::vector<std::vector<std::string>>& phrases) {
  for (const auto& raw : phrases) {
    if (raw.empty()) continue;
    std::vector<std::string> tokens;
    tokens.reserve(raw.size());
    for (const auto& t : raw) tokens.push_back(to_lower_ascii(t));

    std::int32_t node = 0;
    for (const auto& t : tokens) {
      auto it = nodes_[static_cast<std::size_t>(node)].children.find(t);
      if (it == nodes_[static_cast<std::size_t>(node)].children.end()) {
        auto next = static_cast<std::int32_t>(nodes_.size());
        nodes_[static_cast<std::size_t>(node)].children.emplace(t, next);
        nodes_.emplace_back();
        node = next;
      } else {
        node = it->second;
      }
    }
    auto& terminal = nodes_[static_cast<std::size_t>(node)].terminal;
    if (terminal != kNonePhrase) continue;
    terminal = static_cast<PhraseId>(phrases_.size());
    max_length_ = std::max(max_length_, tokens.size());
    phrases_.push_back(std::move(tokens));
  }
}

std::string Lexicon::phrase_text(PhraseId id) const {
  std::string out;
  for (const auto& t : phrase_tokens(id)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

PhraseId Lexicon::find(const std::vector<std::string>& tokens) const {
  std::int32_t node = 0;
  for (const auto& t : tokens) {
    const auto& children = nodes_[static_cast<std::size_t>(node)].children;
    auto it = children.find(to_lower_ascii(t));
    if (it == children.end()) return kNonePhrase;
    node = it->second;
  }
  return tokens.empty() ? kNonePhrase : nodes_[static_cast<std::size_t>(node)].terminal;
}

std::vector<Lexicon::Match> Lexicon::find_all(const std::vector<std::string>& lowered) const {
  std::vector<Match> matches;
  for (std::size_t start = 0; start < lowered.size(); ++start) {
    std::int32_t node = 0;
    for (std::size_t end = start; end < lowered.size(); ++end) {
      const auto& children = nodes_[static_cast<std::size_t>(node)].children;
      auto it = children.find(lowered[end]);
      if (it == children.end()) break;
      node = it->second;
      PhraseId id = nodes_[static_cast<std::size_t>(node)].terminal;
      if (id != kNonePhrase) matches.push_back({start, end + 1, id});
    }
  }
  return matches;
}

Lexicon load_lexicon(std::istream& in) {
  std::vector<std::vector<std::string>> phrases;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    phrases.push_back(std::move(tokens));
  }
  Lexicon lexicon(phrases);
  if (lexicon.size() == 0) throw DataError("empty lexicon");
  return lexicon;
}

Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path);
  return load_lexicon(in);
}

namespace {

std::vector<std::string> lowered_surfaces(const std::vector<std::string>& surfaces) {
  std::vector<std::string> out;
  out.reserve(surfaces.size());
  for (const auto& s : surfaces) out.push_back(to_lower_ascii(s));
  return out;
}

void add_unique(std::vector<PhraseId>& set, PhraseId id) {
  if (std::find(set.begin(), set.end(), id) == set.end()) set.push_back(id);
}

}  // namespace

std::vector<BmesWordSets> match_bmes(const std::vector<std::string>& surfaces, const Lexicon& lexicon) {
  std::vector<BmesWordSets> result(surfaces.size());
  for (const auto& m : lexicon.find_all(lowered_surfaces(surfaces))) {
    if (m.end - m.start == 1) {
      add_unique(result[m.start].sets[3], m.phrase);
      continue;
    }
    add_unique(result[m.start].sets[0], m.phrase);
    for (std::size_t i = m.start + 1; i + 1 < m.end; ++i) add_unique(result[i].sets[1], m.phrase);
    add_unique(result[m.end - 1].sets[2], m.phrase);
  }
  for (auto& token : result)
    for (auto& set : token.sets)
      if (set.empty()) set.push_back(kNonePhrase);
  return result;
}

std::vector<BmesWordSets> match_bmes(const Sentence& sentence, const Lexicon& lexicon) {
  return match_bmes(sentence.surfaces(), lexicon);
}

std::vector<std::int64_t> count_frequencies(const std::vector<Sentence>& corpus, const Lexicon& lexicon) {
  std::vector<std::int64_t> z(lexicon.size(), 0);
  for (const auto& sentence : corpus) {
    auto matches = lexicon.find_all(lowered_surfaces(sentence.surfaces()));
    for (const auto& m : matches) {
      bool covered = std::any_of(matches.begin(), matches.end(), [&](const Lexicon::Match& other) {
        return other.start <= m.start && m.end <= other.end && (other.start != m.start || other.end != m.end);
      });
      if (!covered) ++z[static_cast<std::size_t>(m.phrase)];
    }
  }
  return z;
}

std::int64_t smoothing_constant(const std::map<std::string, std::int64_t>& word_counts) {
  if (word_counts.empty()) throw DataError("smoothing constant needs at least one word type");
  std::vector<std::int64_t> counts;
  counts.reserve(word_counts.size());
  for (const auto& [word, count] : word_counts) counts.push_back(count);
  std::sort(counts.begin(), counts.end());
  // |{count < c}| / n >= 0.1  <=>  10 * |{count < c}| >= n. The smallest such
  // c is one more than the k-th smallest count, k = ceil(n / 10).
  std::size_t n = counts.size();
  std::size_t k = (n + 9) / 10;
  return std::max<std::int64_t>(1, counts[k - 1] + 1);
}

double LexiconStats::weight(PhraseId id) const {
  double zw = id == kNonePhrase ? 0.0 : static_cast<double>(z.at(static_cast<std::size_t>(id)));
  return zw + static_cast<double>(c);
}

LexiconStats build_lexicon_stats(const Lexicon& lexicon, const std::vector<Sentence>& train,
                                 const std::vector<Sentence>& test) {
  std::vector<Sentence> statistics(train);
  statistics.insert(statistics.end(), test.begin(), test.end());

  LexiconStats stats;
  stats.z = count_frequencies(statistics, lexicon);

  std::set<std::string> train_types;
  for (const auto& s : train)
    for (const auto& t : s.tokens) train_types.insert(to_lower_ascii(t.surface));
  std::map<std::string, std::int64_t> counts;
  for (const auto& s : statistics)
    for (const auto& t : s.tokens) {
      auto w = to_lower_ascii(t.surface);
      if (train_types.count(w)) ++counts[w];
    }
  stats.c = smoothing_constant(counts);
  return stats;
}

std::vector<SetVectorTerm> set_vector_terms(const BmesWordSets& sets, const LexiconStats& stats) {
  std::vector<SetVectorTerm> terms;
  double total = 0.0;
  for (int block = 0; block < 4; ++block)
    for (PhraseId id : sets.sets[static_cast<std::size_t>(block)]) {
      double w = stats.weight(id);
      terms.push_back({block, id, w});
      total += w;
    }
  for (auto& t : terms) t.weight /= total;
  return terms;
}

Eigen::VectorXd set_vector(const BmesWordSets& sets, const LexiconStats& stats, const Eigen::MatrixXd& phrase_embeddings) {
  const Eigen::Index dim = phrase_embeddings.rows();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(4 * dim);
  for (const auto& t : set_vector_terms(sets, stats))
    out.segment(t.block * dim, dim) += t.weight * phrase_embeddings.col(phrase_row(t.phrase));
  return out;
}

ExSoftwordFlags exsoftword_flags(const BmesWordSets& sets) {
  ExSoftwordFlags flags{};
  bool any = false;
  for (std::size_t i = 0; i < 4; ++i) {
    bool real = sets.sets[i].front() != kNonePhrase;
    flags[i] = real ? 1 : 0;
    any = any || real;
  }
  flags[4] = any ? 0 : 1;
  return flags;
}

std::vector<ExSoftwordFlags> exsoftword_flags(const Sentence& sentence, const Lexicon& lexicon) {
  std::vector<ExSoftwordFlags> out;
  for (const auto& sets : match_bmes(sentence, lexicon)) out.push_back(exsoftword_flags(sets));
  return out;
}

LexiconReport lexicon_report(const Lexicon& lexicon, const std::vector<Sentence>& train,
                             const std::vector<Sentence>& test, std::size_t top_k) {
  LexiconReport report;
  report.phrase_count = lexicon.size();
  auto stats = build_lexicon_stats(lexicon, train, test);
  report.c = stats.c;
  for (const auto* split : {&train, &test})
    for (const auto& s : *split)
      report.matched_occurrences += static_cast<std::int64_t>(lexicon.find_all(lowered_surfaces(s.surfaces())).size());

  std::vector<PhraseId> order(lexicon.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<PhraseId>(i);
    report.counted_occurrences += stats.z[i];
  }
  std::stable_sort(order.begin(), order.end(), [&](PhraseId a, PhraseId b) {
    return stats.z[static_cast<std::size_t>(a)] > stats.z[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 0; i < std::min(top_k, order.size()); ++i)
    report.top_phrases.emplace_back(lexicon.phrase_text(order[i]), stats.z[static_cast<std::size_t>(order[i])]);
  return report;
}

void write_lexicon_report(std::ostream& out, const LexiconReport& report) {
  out << "phrases             " << report.phrase_count << '\n'
      << "matched_occurrences " << report.matched_occurrences << '\n'
      << "counted_occurrences " << report.counted_occurrences << '\n'
      << "smoothing_c         " << report.c << '\n'
      << "top_phrases\n";
  for (const auto& [phrase, count] : report.top_phrases) out << "  " << count << '\t' << phrase << '\n';
}

}  // namespace lexner
