#pragma once

// Hand-counted entity-level cases shared by the evaluator tests and the
// acceptance run.

#include <string>
#include <vector>

#include "oracles.hpp"

namespace fixture {

struct EvalCase {
  const char* name;
  std::vector<std::string> gold, pred;
  oracle::Counts counts;  // gold, pred, correct
};

inline const std::vector<EvalCase>& eval_suite() {
  static const std::vector<EvalCase> suite{
      // gold {(0,2,PER),(5,7,ORG)}, pred {(0,2,PER),(5,6,ORG),(8,9,PCT)}: P 1/3, R 1/2, F1 40
      {"mixed sentence",
       {"B-PER", "I-PER", "O", "O", "O", "B-ORG", "I-ORG", "O", "O", "O"},
       {"B-PER", "I-PER", "O", "O", "O", "B-ORG", "O", "O", "B-PCT", "O"},
       {2, 3, 1}},
      {"adjacent entities", {"B-PER", "B-PER", "I-PER"}, {"B-PER", "B-PER", "I-PER"}, {2, 2, 2}},
      {"adjacent merged", {"B-PER", "B-PER"}, {"B-PER", "I-PER"}, {2, 1, 0}},
      {"boundary off by one", {"O", "B-ORG", "I-ORG", "O"}, {"B-ORG", "I-ORG", "I-ORG", "O"}, {1, 1, 0}},
      {"right span wrong label", {"B-PCT", "I-PCT"}, {"B-SER", "I-SER"}, {1, 1, 0}},
      {"I without B repaired", {"O", "B-TIM", "I-TIM"}, {"O", "I-TIM", "I-TIM"}, {1, 1, 1}},
      {"label switch inside run", {"B-ORG", "I-ORG", "I-ORG"}, {"B-ORG", "I-PER", "I-PER"}, {1, 2, 0}},
      {"all O", {"B-OUT", "O"}, {"O", "O"}, {1, 0, 0}},
      {"exact match", {"B-SER", "I-SER", "O", "B-TIM"}, {"B-SER", "I-SER", "O", "B-TIM"}, {2, 2, 2}},
  };
  return suite;
}

}  // namespace fixture
