// mvplda/dataset.cc

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

#include "mvplda/dataset.h"

#include <algorithm>
#include <map>
#include <set>

namespace mvplda {

int Dataset::num_labels_a() const {
  std::set<int> seen;
  for (const auto &item : items) seen.insert(item.label_a);
  return static_cast<int>(seen.size());
}

int Dataset::num_labels_b() const {
  std::set<int> seen;
  for (const auto &item : items) seen.insert(item.label_b);
  return static_cast<int>(seen.size());
}

std::vector<SampleGroup> group_rows(const Dataset &dataset, GroupBy key) {
  if (dataset.items.empty()) throw EmptyDataset("no rows to group");
  std::map<std::pair<long, long>, std::vector<int>> buckets;
  for (int r = 0; r < static_cast<int>(dataset.items.size()); ++r) {
    const auto &item = dataset.items[r];
    if (item.features.size() != dataset.dim)
      throw DimensionMismatch("row " + std::to_string(r) + " has dim " +
                              std::to_string(item.features.size()) +
                              ", dataset says " + std::to_string(dataset.dim));
    std::pair<long, long> k;
    switch (key) {
      case GroupBy::kCell:
        k = {item.label_a, item.label_b};
        break;
      case GroupBy::kLabelA:
        k = {item.label_a, -1};
        break;
      case GroupBy::kLabelB:
        k = {item.label_b, -1};
        break;
    }
    buckets[k].push_back(r);
  }
  const auto lex_less = [&dataset](int lhs, int rhs) {
    const Vector &a = dataset.items[lhs].features;
    const Vector &b = dataset.items[rhs].features;
    for (Index i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  };
  std::vector<SampleGroup> groups;
  groups.reserve(buckets.size());
  for (auto &[k, rows] : buckets) {
    std::sort(rows.begin(), rows.end(), lex_less);
    SampleGroup g;
    if (key == GroupBy::kLabelB) {
      g.label_a = -1;
      g.label_b = k.first;
    } else {
      g.label_a = k.first;
      g.label_b = k.second;
    }
    g.rows = std::move(rows);
    groups.push_back(std::move(g));
  }
  return groups;
}

Vector grouped_mean(const Dataset &dataset,
                    const std::vector<SampleGroup> &groups) {
  Vector sum = Vector::Zero(dataset.dim);
  long n = 0;
  for (const auto &g : groups)
    for (int r : g.rows) {
      sum += dataset.items[r].features;
      ++n;
    }
  if (n == 0) throw EmptyDataset("mean of zero rows");
  return sum / static_cast<double>(n);
}

Vector grouped_variance(const Dataset &dataset,
                        const std::vector<SampleGroup> &groups,
                        const Vector &mean) {
  Vector sum = Vector::Zero(dataset.dim);
  long n = 0;
  for (const auto &g : groups)
    for (int r : g.rows) {
      sum += (dataset.items[r].features - mean).cwiseAbs2();
      ++n;
    }
  if (n == 0) throw EmptyDataset("variance of zero rows");
  return sum / static_cast<double>(n);
}

}  // namespace mvplda
