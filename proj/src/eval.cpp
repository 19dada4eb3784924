#include "lexner/eval.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include "lexner/error.hpp"

namespace lexner {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

double LabelScore::precision() const { return predicted == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(predicted); }

double LabelScore::recall() const { return gold == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(gold); }

double LabelScore::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalReport entity_f1(const std::vector<std::vector<std::string>>& gold, const std::vector<std::vector<std::string>>& pred,
                     const TagScheme& scheme) {
  if (gold.size() != pred.size())
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences, prediction has " + std::to_string(pred.size()));
  EvalReport report;
  report.labels = scheme.labels();
  for (const auto& label : scheme.labels()) report.per_label[label];

  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size())
      throw DataError("sentence " + std::to_string(i) + ": gold length " + std::to_string(gold[i].size()) +
                      " != predicted length " + std::to_string(pred[i].size()));
    auto gold_spans = extract_spans(validate_bio(gold[i], scheme, false).tags);
    auto pred_spans = extract_spans(validate_bio(pred[i], scheme, true).tags);
    std::set<EntitySpan> gold_set(gold_spans.begin(), gold_spans.end());
    for (const auto& s : gold_spans) ++report.per_label[s.label].gold;
    for (const auto& s : pred_spans) {
      auto& score = report.per_label[s.label];
      ++score.predicted;
      if (gold_set.count(s)) ++score.correct;
    }
  }
  for (const auto& [label, score] : report.per_label) {
    report.overall.gold += score.gold;
    report.overall.predicted += score.predicted;
    report.overall.correct += score.correct;
  }
  return report;
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %9s %9s %9s %7s %7s %7s\n", "label", "precision", "recall", "f1", "gold",
                "pred", "correct");
  out << line;
  auto row = [&](const std::string& name, const LabelScore& s) {
    std::snprintf(line, sizeof line, "%-10s %9.2f %9.2f %9.2f %7zu %7zu %7zu\n", name.c_str(), s.precision(),
                  s.recall(), s.f1(), s.gold, s.predicted, s.correct);
    out << line;
  };
  for (const auto& label : report.labels) row(label, report.per_label.at(label));
  row("OVERALL", report.overall);
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "label,precision,recall,f1,gold,pred,correct\n";
  auto row = [&](const std::string& name, const LabelScore& s) {
    out << name << ',' << fixed2(s.precision()) << ',' << fixed2(s.recall()) << ',' << fixed2(s.f1()) << ','
        << s.gold << ',' << s.predicted << ',' << s.correct << '\n';
  };
  for (const auto& label : report.labels) row(label, report.per_label.at(label));
  row("OVERALL", report.overall);
}

}  // namespace lexner
