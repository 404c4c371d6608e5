// mvplda/dataset.h

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

#ifndef MVPLDA_DATASET_H_
#define MVPLDA_DATASET_H_

#include <vector>

#include "mvplda/common.h"

namespace mvplda {

/// One feature vector carrying its two label views (A = e.g. speaker,
/// B = e.g. phrase).
struct LabeledVector {
  Vector features;
  int label_a = 0;
  int label_b = 0;
};

struct Dataset {
  Index dim = 0;
  std::vector<LabeledVector> items;

  int num_labels_a() const;
  int num_labels_b() const;
};

/// Rows of the dataset sharing one grouping key.
struct SampleGroup {
  long label_a = 0;  // -1 when the key ignores this view
  long label_b = 0;
  std::vector<int> rows;
};

enum class GroupBy { kCell, kLabelA, kLabelB };

/// Groups rows by the requested key in a canonical order: groups sorted by
/// key, rows within a group sorted lexicographically by feature values.
/// Every trainer accumulates in this order, which makes a trained model a
/// function of the grouped sufficient statistics alone -- permuting the
/// dataset rows cannot change any result bit.
std::vector<SampleGroup> group_rows(const Dataset &dataset, GroupBy key);

/// Mean over all grouped rows, accumulated in canonical order.
Vector grouped_mean(const Dataset &dataset,
                    const std::vector<SampleGroup> &groups);

/// Per-coordinate variance about `mean`, canonical order, 1/n convention.
Vector grouped_variance(const Dataset &dataset,
                        const std::vector<SampleGroup> &groups,
                        const Vector &mean);

}  // namespace mvplda

#endif  // MVPLDA_DATASET_H_
