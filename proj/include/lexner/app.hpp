#pragma once

// The pipeline behind each CLI subcommand. Progress goes to `log`; results go
// to the files named in the config or to `out`.

#include <iosfwd>

#include "lexner/config.hpp"
#include "lexner/eval.hpp"
#include "lexner/trainer.hpp"

namespace lexner {

/// Writes the checkpoint (config `checkpoint`, default <output_dir>/model.ckpt)
/// and <output_dir>/metrics.csv.
TrainResult cmd_train(const AppConfig& config, std::ostream& log);

/// Tags `input` (or `in`) with the checkpoint and writes `<token> <tag>` lines.
void cmd_tag(const AppConfig& config, std::istream& in, std::ostream& out);

EvalReport cmd_eval(const AppConfig& config, std::ostream& out);

void cmd_lexicon_stats(const AppConfig& config, std::ostream& out);

/// One independent training run per size on a prefix of a fixed shuffle of
/// the training set, scored on the test set.
/// CSV: `size,<label F1 in scheme order>,overall_f1`.
void cmd_learning_curve(const AppConfig& config, std::ostream& out, std::ostream& log);

void write_learning_curve_header(std::ostream& out, const TagScheme& scheme);

}  // namespace lexner
