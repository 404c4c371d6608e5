// mvplda/eval.h

// Copyright 2026  The mvplda Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MVPLDA_EVAL_H_
#define MVPLDA_EVAL_H_

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mvplda/dataset.h"

namespace mvplda {

/// Trial taxonomy: target, impostor-wrong (wrong speaker, wrong phrase),
/// target-wrong (right speaker, wrong phrase), impostor-correct (wrong
/// speaker, right phrase).
enum class TrialType { kTarget, kImpostorWrong, kTargetWrong, kImpostorCorrect };

const char *trial_type_tag(TrialType type);        // TGT / IW / TW / IC
TrialType parse_trial_type(const std::string &tag);

/// One verification trial: enrollment rows to average, a test row, a type.
struct Trial {
  std::vector<int> enroll_rows;
  int test_row = 0;
  TrialType type = TrialType::kTarget;
};

Vector average_enroll(const std::vector<Vector> &vectors);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Equal error rate by a full threshold sweep.  Acceptance is score >=
/// threshold (ties accept).  FAR - FRR is monotone in the threshold; the
/// EER is read off by linear interpolation between the two adjacent
/// operating points where its sign flips, and the returned threshold is the
/// interpolated crossing.
EerResult sweep_eer(const std::vector<std::pair<double, bool>> &scores);

struct TypeResult {
  double eer = 0.0;
  double threshold = 0.0;
  long count = 0;
};

/// Scored trial set.  Per-type EERs pair each nontarget type with the full
/// target score set (one row per nontarget type, as the usual tables do);
/// the overall row pools every nontarget trial.  Raw scores stay in trial
/// order so every number is reproducible from the report alone.
struct EvalReport {
  long target_count = 0;
  std::map<TrialType, TypeResult> per_type;
  TypeResult overall;
  std::vector<std::pair<double, TrialType>> scores;
};

using PairScorer = std::function<double(const Vector &, const Vector &)>;

EvalReport evaluate_trials(const PairScorer &scorer, const Dataset &features,
                           const std::vector<Trial> &trials);

double cosine_score(const Vector &xt, const Vector &xs);

}  // namespace mvplda

#endif  // MVPLDA_EVAL_H_
