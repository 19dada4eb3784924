#include "lexner/synthetic.hpp"

#include <array>
#include <ostream>
#include <set>
#include <sstream>

#include "lexner/embeddings.hpp"
#include "lexner/error.hpp"

namespace lexner {

namespace {

const std::vector<std::string> kLabels{"PER", "ORG", "PCT", "OUT", "SER", "TIM"};

// "{L}" is an entity slot, "{n}" a noise slot.
const std::vector<std::string> kTemplates{
    "chief engineer {n} {PER} {n} inspected the launch site .",
    "according to {n} {PER} {n} the trial was delayed .",
    "the contract was signed by {n} {PER} {n} and {ORG} {n} officials .",
    "the agency {n} {ORG} {n} announced a new program .",
    "analysts expect {n} {ORG} {n} to expand its testing division .",
    "workers at {n} {ORG} {n} assembled the {n} {PCT} {n} prototype .",
    "the navy ordered twelve {n} {PCT} {n} units last quarter .",
    "a modified {n} {PCT} {n} was displayed at the exhibition .",
    "the study reported {n} {OUT} {n} after the final review .",
    "researchers published {n} {OUT} {n} in the annual report .",
    "the upgrade led to {n} {OUT} {n} across the fleet .",
    "customers can request {n} {SER} {n} through the portal .",
    "the company now provides {n} {SER} {n} for regional operators .",
    "maintenance teams rely on {n} {SER} {n} during deployment .",
    "the first flight is scheduled for {n} {TIM} {n} at the range .",
    "deliveries resumed during {n} {TIM} {n} after the pause .",
    "since {n} {TIM} {n} the {n} {PCT} {n} has logged many hours .",
    "{PER} {n} confirmed that {n} {SER} {n} will continue .",
};

// Template words that also appear in the gazetteer without being entities.
const std::vector<std::string> kDistractors{"launch site", "annual report", "testing division", "prototype",
                                            "exhibition", "portal", "fleet", "range"};

const std::array<const char*, 14> kOnsets{"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
const std::array<const char*, 5> kVowels{"a", "e", "i", "o", "u"};
const std::array<const char*, 5> kCodas{"", "", "n", "r", "s"};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_.unit() * static_cast<double>(n)); }
  bool chance(double p) { return rng_.unit() < p; }

  std::string syllable_word() {
    std::string w;
    const std::size_t syllables = 2 + below(2);
    for (std::size_t s = 0; s < syllables; ++s) {
      w += kOnsets[below(kOnsets.size())];
      w += kVowels[below(kVowels.size())];
      w += kCodas[below(kCodas.size())];
    }
    return w;
  }

  /// A pseudo-word not yet in `taken`; records it.
  std::string fresh_word(std::set<std::string>& taken) {
    while (true) {
      auto w = syllable_word();
      if (taken.insert(w).second) return w;
    }
  }

 private:
  UniformSource rng_;
};

std::vector<std::string> split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

struct Pools {
  // pools[label][0] = training names, pools[label][1] = held-out names
  std::vector<std::array<std::vector<std::vector<std::string>>, 2>> names;
  std::set<std::string> entity_words;
};

Sentence realize(const std::string& tmpl, const Pools& pools, bool held_out_split, const SyntheticConfig& config,
                 Generator& gen, std::set<std::string>& reserved) {
  Sentence s;
  for (const auto& piece : split(tmpl)) {
    if (piece == "{n}") {
      if (!gen.chance(config.noise_rate)) continue;
      std::string w;
      do {
        w = gen.syllable_word();
      } while (reserved.count(w));
      s.tokens.push_back({w, "O"});
      continue;
    }
    if (piece.size() > 2 && piece.front() == '{') {
      const std::string label = piece.substr(1, piece.size() - 2);
      std::size_t li = 0;
      while (kLabels[li] != label) ++li;
      const auto& pool = pools.names[li];
      const bool use_held_out = held_out_split && !gen.chance(config.seen_in_test);
      const auto& names = pool[use_held_out ? 1 : 0];
      const auto& name = names[gen.below(names.size())];
      for (std::size_t i = 0; i < name.size(); ++i) s.tokens.push_back({name[i], (i == 0 ? "B-" : "I-") + label});
      continue;
    }
    s.tokens.push_back({piece, "O"});
  }
  return s;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticConfig& config) {
  if (config.phrases_per_label <= config.held_out_per_label || config.held_out_per_label == 0)
    throw ConfigError("synthetic corpus needs both training and held-out names for every label");
  if (config.train_sentences == 0) throw ConfigError("synthetic corpus needs training sentences");

  Generator gen(config.seed);
  std::set<std::string> reserved;
  for (const auto& t : kTemplates)
    for (const auto& w : split(t)) reserved.insert(w);

  Pools pools;
  SyntheticCorpus corpus;
  pools.names.resize(kLabels.size());
  for (std::size_t li = 0; li < kLabels.size(); ++li) {
    for (std::size_t p = 0; p < config.phrases_per_label; ++p) {
      std::vector<std::string> name(1 + gen.below(3));
      for (auto& w : name) w = gen.fresh_word(reserved);
      const int bucket = p < config.held_out_per_label ? 1 : 0;
      std::string text;
      for (const auto& w : name) text += (text.empty() ? "" : " ") + w;
      corpus.gazetteer.push_back(text);
      pools.names[li][static_cast<std::size_t>(bucket)].push_back(std::move(name));
    }
  }
  for (const auto& d : kDistractors) corpus.gazetteer.push_back(d);
  // Interleave so phrase order carries no label information.
  for (std::size_t i = corpus.gazetteer.size(); i > 1; --i) std::swap(corpus.gazetteer[i - 1], corpus.gazetteer[gen.below(i)]);

  auto make_split = [&](std::size_t count, bool held_out) {
    Dataset d{{}, TagScheme(kLabels)};
    for (std::size_t i = 0; i < count; ++i)
      d.sentences.push_back(realize(kTemplates[gen.below(kTemplates.size())], pools, held_out, config, gen, reserved));
    return d;
  };
  corpus.train = make_split(config.train_sentences, false);
  corpus.dev = make_split(config.dev_sentences, true);
  corpus.test = make_split(config.test_sentences, true);
  return corpus;
}

void write_gazetteer(std::ostream& out, const std::vector<std::string>& phrases) {
  for (const auto& p : phrases) out << p << '\n';
}

}  // namespace lexner
