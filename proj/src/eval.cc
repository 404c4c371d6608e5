// mvplda/eval.cc

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

#include "mvplda/eval.h"

#include <algorithm>
#include <cmath>

namespace mvplda {

const char *trial_type_tag(TrialType type) {
  switch (type) {
    case TrialType::kTarget: return "TGT";
    case TrialType::kImpostorWrong: return "IW";
    case TrialType::kTargetWrong: return "TW";
    case TrialType::kImpostorCorrect: return "IC";
  }
  throw std::logic_error("unreachable trial type");
}

TrialType parse_trial_type(const std::string &tag) {
  if (tag == "TGT") return TrialType::kTarget;
  if (tag == "IW") return TrialType::kImpostorWrong;
  if (tag == "TW") return TrialType::kTargetWrong;
  if (tag == "IC") return TrialType::kImpostorCorrect;
  throw DegenerateTrialSet("unknown trial type tag '" + tag + "'");
}

Vector average_enroll(const std::vector<Vector> &vectors) {
  if (vectors.empty()) throw EmptyEnrollment();
  Vector sum = Vector::Zero(vectors.front().size());
  for (const auto &v : vectors) {
    if (v.size() != sum.size())
      throw DimensionMismatch("enrollment vectors disagree on dim");
    sum += v;
  }
  return sum / static_cast<double>(vectors.size());
}

EerResult sweep_eer(const std::vector<std::pair<double, bool>> &scores) {
  std::vector<double> targets, nontargets;
  for (const auto &[score, is_target] : scores) {
    if (!std::isfinite(score))
      throw DegenerateTrialSet("non-finite score in trial set");
    (is_target ? targets : nontargets).push_back(score);
  }
  if (targets.empty() || nontargets.empty())
    throw DegenerateTrialSet("need at least one target and one nontarget");
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  std::vector<double> thresholds;
  thresholds.reserve(targets.size() + nontargets.size() + 1);
  std::merge(targets.begin(), targets.end(), nontargets.begin(),
             nontargets.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);  // all-reject sentinel

  const double nt = static_cast<double>(targets.size());
  const double nn = static_cast<double>(nontargets.size());
  // At threshold t: FAR = #{nontarget >= t}/nn falls, FRR = #{target < t}/nt
  // rises, so FAR - FRR crosses zero exactly once.
  double prev_far = 1.0, prev_frr = 0.0, prev_t = thresholds.front();
  size_t it = 0, in = 0;
  for (double t : thresholds) {
    while (it < targets.size() && targets[it] < t) ++it;
    while (in < nontargets.size() && nontargets[in] < t) ++in;
    const double far = static_cast<double>(nontargets.size() - in) / nn;
    const double frr = static_cast<double>(it) / nt;
    const double prev_gap = prev_far - prev_frr;
    const double gap = far - frr;
    if (prev_gap >= 0.0 && gap < 0.0) {
      const double alpha = prev_gap / (prev_gap - gap);
      return {prev_far + alpha * (far - prev_far),
              prev_t + alpha * (t - prev_t)};
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  // prev_gap hit exactly zero at the final operating point.
  return {prev_far, prev_t};
}

EvalReport evaluate_trials(const PairScorer &scorer, const Dataset &features,
                           const std::vector<Trial> &trials) {
  if (trials.empty()) throw DegenerateTrialSet("no trials");
  const int num_rows = static_cast<int>(features.items.size());

  EvalReport report;
  report.scores.reserve(trials.size());
  for (size_t i = 0; i < trials.size(); ++i) {
    const Trial &trial = trials[i];
    if (trial.test_row < 0 || trial.test_row >= num_rows)
      throw DegenerateTrialSet("trial " + std::to_string(i) +
                               ": test row out of range");
    std::vector<Vector> enroll;
    enroll.reserve(trial.enroll_rows.size());
    for (int r : trial.enroll_rows) {
      if (r < 0 || r >= num_rows)
        throw DegenerateTrialSet("trial " + std::to_string(i) +
                                 ": enroll row out of range");
      enroll.push_back(features.items[r].features);
    }
    const Vector model = average_enroll(enroll);
    double score;
    try {
      score = scorer(model, features.items[trial.test_row].features);
    } catch (const std::exception &err) {
      throw std::runtime_error("trial " + std::to_string(i) + ": " +
                               err.what());
    }
    report.scores.emplace_back(score, trial.type);
  }

  std::vector<std::pair<double, bool>> target_pool;
  for (const auto &[score, type] : report.scores)
    if (type == TrialType::kTarget) target_pool.emplace_back(score, true);
  report.target_count = static_cast<long>(target_pool.size());

  std::vector<std::pair<double, bool>> pooled = target_pool;
  for (TrialType type : {TrialType::kImpostorWrong, TrialType::kTargetWrong,
                         TrialType::kImpostorCorrect}) {
    std::vector<std::pair<double, bool>> subset = target_pool;
    long count = 0;
    for (const auto &[score, t] : report.scores)
      if (t == type) {
        subset.emplace_back(score, false);
        pooled.emplace_back(score, false);
        ++count;
      }
    if (count == 0) continue;
    const EerResult r = sweep_eer(subset);
    report.per_type[type] = TypeResult{r.eer, r.threshold, count};
  }
  const EerResult overall = sweep_eer(pooled);
  report.overall =
      TypeResult{overall.eer, overall.threshold,
                 static_cast<long>(pooled.size() - target_pool.size())};
  return report;
}

double cosine_score(const Vector &xt, const Vector &xs) {
  if (xt.size() != xs.size())
    throw DimensionMismatch("cosine_score operand dims");
  const double nt = xt.norm();
  const double ns = xs.norm();
  if (nt == 0.0 || ns == 0.0) throw ZeroVector();
  return xt.dot(xs) / (nt * ns);
}

}  // namespace mvplda
