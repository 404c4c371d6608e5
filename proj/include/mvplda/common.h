// mvplda/common.h

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

#ifndef MVPLDA_COMMON_H_
#define MVPLDA_COMMON_H_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mvplda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Every diagonal covariance entry is clamped to at least this value on
// construction, so no E-step solve ever sees a singular noise model.
constexpr double kVarianceFloor = 1e-6;

// Relative tolerance for accepting a matrix as symmetric.
constexpr double kSymmetryTol = 1e-12;

class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string &what)
      : std::runtime_error("not positive definite: " + what) {}
};

class DimensionMismatch : public std::runtime_error {
 public:
  explicit DimensionMismatch(const std::string &what)
      : std::runtime_error("dimension mismatch: " + what) {}
};

class SingularAccumulator : public std::runtime_error {
 public:
  explicit SingularAccumulator(const std::string &what)
      : std::runtime_error("singular accumulator: " + what) {}
};

class EmptyDataset : public std::runtime_error {
 public:
  explicit EmptyDataset(const std::string &what)
      : std::runtime_error("empty dataset: " + what) {}
};

class InvalidPriors : public std::runtime_error {
 public:
  explicit InvalidPriors(const std::string &what)
      : std::runtime_error("invalid priors: " + what) {}
};

class EmptyEnrollment : public std::runtime_error {
 public:
  EmptyEnrollment() : std::runtime_error("empty enrollment list") {}
};

class DegenerateTrialSet : public std::runtime_error {
 public:
  explicit DegenerateTrialSet(const std::string &what)
      : std::runtime_error("degenerate trial set: " + what) {}
};

class ZeroVector : public std::runtime_error {
 public:
  ZeroVector() : std::runtime_error("zero vector has no direction") {}
};

}  // namespace mvplda

#endif  // MVPLDA_COMMON_H_
