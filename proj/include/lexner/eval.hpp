#pragma once

// Entity-level precision / recall / F1 with conlleval semantics.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lexner/corpus.hpp"

namespace lexner {

struct LabelScore {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;

  double precision() const;  // percent; 0 when nothing predicted
  double recall() const;     // percent; 0 when nothing gold
  double f1() const;         // percent; 0 when P + R = 0
};

struct EvalReport {
  std::vector<std::string> labels;  // scheme order
  std::map<std::string, LabelScore> per_label;
  LabelScore overall;  // micro-averaged

  const LabelScore& label(const std::string& name) const { return per_label.at(name); }
};

/// Exact (start, end, label) matching. Predictions are repaired I->B before
/// span extraction; gold must already be valid BIO.
EvalReport entity_f1(const std::vector<std::vector<std::string>>& gold, const std::vector<std::vector<std::string>>& pred,
                     const TagScheme& scheme);

/// Aligned text table, values to two decimals.
void write_report_table(std::ostream& out, const EvalReport& report);
/// `label,precision,recall,f1,gold,pred,correct` with a final OVERALL row.
void write_report_csv(std::ostream& out, const EvalReport& report);

}  // namespace lexner
