// mvplda/io.h

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

#ifndef MVPLDA_IO_H_
#define MVPLDA_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "mvplda/dataset.h"
#include "mvplda/eval.h"
#include "mvplda/jplda.h"
#include "mvplda/plda.h"

namespace mvplda {

// All formats are whitespace-delimited text with 17-significant-digit
// decimals: diff-able, portable, and lossless for doubles.

class MalformedHeader : public std::runtime_error {
 public:
  explicit MalformedHeader(const std::string &what)
      : std::runtime_error("malformed header: " + what) {}
};

class RowArityError : public std::runtime_error {
 public:
  RowArityError(long line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

class NonFiniteValue : public std::runtime_error {
 public:
  NonFiniteValue(long line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) +
                           ": non-finite value: " + what) {}
};

class MissingSection : public std::runtime_error {
 public:
  explicit MissingSection(const std::string &section)
      : std::runtime_error("missing model section " + section) {}
};

class TrialFileError : public std::runtime_error {
 public:
  TrialFileError(long line, const std::string &what)
      : std::runtime_error("trial line " + std::to_string(line) + ": " + what) {}
};

std::string format_double(double value);  // 17 significant digits

/// Feature file: `mvplda-features 1 <d>` header, then one row per vector:
/// label_a label_b v1 .. vd.  Labels re-index densely from 0 on parse; the
/// original ids are preserved per dense index.
struct FeatureData {
  Dataset data;
  std::vector<long> original_a;  // dense id -> original id
  std::vector<long> original_b;
};

FeatureData parse_features(std::istream &in);
void write_features(std::ostream &out, const Dataset &dataset);

/// Model file: `mvplda-model 1 plda|jplda`, a dims line, then the fixed
/// section order MU, B, SIGMA (plda) or MU, S, T, SIGMA (jplda).
enum class ModelKind { kPlda, kJplda };

void write_model(std::ostream &out, const PldaModel &model);
void write_model(std::ostream &out, const JointPldaModel &model);
ModelKind parse_model_kind(const std::string &text);
PldaModel parse_plda_model(const std::string &text);
JointPldaModel parse_jplda_model(const std::string &text);

/// Trial file: one trial per line, `i1,i2,.. test_row TYPE` with TYPE in
/// {TGT, IW, TW, IC} and row indices into the paired feature file.
std::vector<Trial> parse_trials(std::istream &in, int num_feature_rows);
void write_trials(std::ostream &out, const std::vector<Trial> &trials);

/// Report file: `mvplda-report 1`, a TGT count row, one row per nontarget
/// type in the order IW, IC, TW, then the pooled Total row.
void write_report(std::ostream &out, const EvalReport &report);

/// Re-parses a written report and validates its invariants (used by
/// `eval --check`); returns the parsed rows with no raw scores.
EvalReport parse_report(std::istream &in);

}  // namespace mvplda

#endif  // MVPLDA_IO_H_
