// mvplda/io.cc

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

#include "mvplda/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mvplda {

namespace {

std::vector<std::string> split_fields(const std::string &line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) fields.push_back(field);
  return fields;
}

bool parse_long(const std::string &field, long *out) {
  const char *begin = field.data();
  const char *end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(const std::string &field, double *out) {
  const char *begin = field.data();
  const char *end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<long> dense_reindex(std::vector<long> *labels) {
  std::vector<long> distinct(*labels);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  std::map<long, int> to_dense;
  for (size_t i = 0; i < distinct.size(); ++i)
    to_dense[distinct[i]] = static_cast<int>(i);
  for (auto &l : *labels) l = to_dense[l];
  return distinct;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

FeatureData parse_features(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader("empty feature file");
  const auto header = split_fields(line);
  long version = 0, dim = 0;
  if (header.size() != 3 || header[0] != "mvplda-features" ||
      !parse_long(header[1], &version) || version != 1 ||
      !parse_long(header[2], &dim) || dim < 1)
    throw MalformedHeader("want 'mvplda-features 1 <d>', got '" + line + "'");

  FeatureData out;
  out.data.dim = dim;
  std::vector<long> labels_a, labels_b;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (static_cast<long>(fields.size()) != dim + 2)
      throw RowArityError(line_no, "want " + std::to_string(dim + 2) +
                                       " fields, got " +
                                       std::to_string(fields.size()));
    long a = 0, b = 0;
    if (!parse_long(fields[0], &a) || !parse_long(fields[1], &b) || a < 0 ||
        b < 0)
      throw RowArityError(line_no, "labels must be non-negative integers");
    LabeledVector item;
    item.features.resize(dim);
    for (long k = 0; k < dim; ++k) {
      double v = 0.0;
      if (!parse_double(fields[2 + k], &v) || !std::isfinite(v))
        throw NonFiniteValue(line_no, "'" + fields[2 + k] + "'");
      item.features[k] = v;
    }
    labels_a.push_back(a);
    labels_b.push_back(b);
    out.data.items.push_back(std::move(item));
  }
  if (out.data.items.empty()) throw EmptyDataset("feature file has no rows");
  out.original_a = dense_reindex(&labels_a);
  out.original_b = dense_reindex(&labels_b);
  for (size_t i = 0; i < out.data.items.size(); ++i) {
    out.data.items[i].label_a = static_cast<int>(labels_a[i]);
    out.data.items[i].label_b = static_cast<int>(labels_b[i]);
  }
  return out;
}

void write_features(std::ostream &out, const Dataset &dataset) {
  out << "mvplda-features 1 " << dataset.dim << "\n";
  for (const auto &item : dataset.items) {
    out << item.label_a << ' ' << item.label_b;
    for (Index k = 0; k < item.features.size(); ++k)
      out << ' ' << format_double(item.features[k]);
    out << "\n";
  }
}

namespace {

void write_matrix_section(std::ostream &out, const std::string &name,
                          const Matrix &m) {
  out << name << "\n";
  for (Index r = 0; r < m.rows(); ++r) {
    if (m.cols() == 0) continue;
    for (Index c = 0; c < m.cols(); ++c)
      out << (c == 0 ? "" : " ") << format_double(m(r, c));
    out << "\n";
  }
}

void write_vector_section(std::ostream &out, const std::string &name,
                          const Vector &v) {
  out << name << "\n";
  for (Index k = 0; k < v.size(); ++k)
    out << (k == 0 ? "" : " ") << format_double(v[k]);
  out << "\n";
}

// Cursor over the model file lines.
class SectionReader {
 public:
  explicit SectionReader(const std::string &text) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
      if (!split_fields(line).empty()) lines_.push_back(line);
  }

  std::vector<std::string> header() {
    if (pos_ >= lines_.size()) throw MalformedHeader("empty model file");
    return split_fields(lines_[pos_++]);
  }

  void expect_section(const std::string &name) {
    if (pos_ >= lines_.size() || split_fields(lines_[pos_]) !=
                                     std::vector<std::string>{name})
      throw MissingSection(name);
    ++pos_;
  }

  // Numeric tokens until the next non-numeric line or EOF.
  std::vector<double> read_values(const std::string &section, long expected) {
    std::vector<double> values;
    while (pos_ < lines_.size()) {
      const auto fields = split_fields(lines_[pos_]);
      double probe = 0.0;
      if (!parse_double(fields.front(), &probe)) break;
      for (const auto &f : fields) {
        double v = 0.0;
        if (!parse_double(f, &v) || !std::isfinite(v))
          throw NonFiniteValue(static_cast<long>(pos_) + 1, "'" + f + "'");
        values.push_back(v);
      }
      ++pos_;
    }
    if (static_cast<long>(values.size()) != expected)
      throw DimensionMismatch("section " + section + " wants " +
                              std::to_string(expected) + " values, got " +
                              std::to_string(values.size()));
    return values;
  }

 private:
  std::vector<std::string> lines_;
  size_t pos_ = 0;
};

Vector to_vector(const std::vector<double> &values) {
  Vector v(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
  return v;
}

Matrix to_matrix(const std::vector<double> &values, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = values[static_cast<size_t>(r) * cols + c];
  return m;
}

std::vector<long> parse_dims_line(const std::vector<std::string> &fields,
                                  size_t expected) {
  if (fields.size() != expected + 1 || fields[0] != "dims")
    throw MalformedHeader("want 'dims' with " + std::to_string(expected) +
                          " sizes");
  std::vector<long> dims;
  for (size_t i = 1; i < fields.size(); ++i) {
    long v = 0;
    if (!parse_long(fields[i], &v) || v < 0)
      throw MalformedHeader("bad dims entry '" + fields[i] + "'");
    dims.push_back(v);
  }
  return dims;
}

std::vector<std::string> parse_model_header(SectionReader &reader) {
  const auto header = reader.header();
  long version = 0;
  if (header.size() != 3 || header[0] != "mvplda-model" ||
      !parse_long(header[1], &version) || version != 1)
    throw MalformedHeader("want 'mvplda-model 1 <kind>'");
  return header;
}

}  // namespace

void write_model(std::ostream &out, const PldaModel &model) {
  out << "mvplda-model 1 plda\n";
  out << "dims " << model.dim() << ' ' << model.subspace_dim() << "\n";
  write_vector_section(out, "MU", model.mu);
  write_matrix_section(out, "B", model.b.dense());
  write_vector_section(out, "SIGMA", model.sigma.entries());
}

void write_model(std::ostream &out, const JointPldaModel &model) {
  out << "mvplda-model 1 jplda\n";
  out << "dims " << model.dim() << ' ' << model.nu() << ' ' << model.nv()
      << "\n";
  write_vector_section(out, "MU", model.mu);
  write_matrix_section(out, "S", model.s.dense());
  write_matrix_section(out, "T", model.t.dense());
  write_vector_section(out, "SIGMA", model.sigma.entries());
}

ModelKind parse_model_kind(const std::string &text) {
  SectionReader reader(text);
  const auto header = parse_model_header(reader);
  if (header[2] == "plda") return ModelKind::kPlda;
  if (header[2] == "jplda") return ModelKind::kJplda;
  throw MalformedHeader("unknown model kind '" + header[2] + "'");
}

PldaModel parse_plda_model(const std::string &text) {
  SectionReader reader(text);
  const auto header = parse_model_header(reader);
  if (header[2] != "plda") throw MalformedHeader("not a plda model file");
  const auto dims = parse_dims_line(reader.header(), 2);
  const Index d = dims[0], n = dims[1];
  reader.expect_section("MU");
  const Vector mu = to_vector(reader.read_values("MU", d));
  reader.expect_section("B");
  const Matrix b = to_matrix(reader.read_values("B", d * n), d, n);
  reader.expect_section("SIGMA");
  const Vector sigma = to_vector(reader.read_values("SIGMA", d));
  return PldaModel(mu, FactorMatrix(b), DiagMatrix(sigma));
}

JointPldaModel parse_jplda_model(const std::string &text) {
  SectionReader reader(text);
  const auto header = parse_model_header(reader);
  if (header[2] != "jplda") throw MalformedHeader("not a jplda model file");
  const auto dims = parse_dims_line(reader.header(), 3);
  const Index d = dims[0], nu = dims[1], nv = dims[2];
  reader.expect_section("MU");
  const Vector mu = to_vector(reader.read_values("MU", d));
  reader.expect_section("S");
  const Matrix s = to_matrix(reader.read_values("S", d * nu), d, nu);
  reader.expect_section("T");
  const Matrix t = to_matrix(reader.read_values("T", d * nv), d, nv);
  reader.expect_section("SIGMA");
  const Vector sigma = to_vector(reader.read_values("SIGMA", d));
  return JointPldaModel(mu, FactorMatrix(s), FactorMatrix(t),
                        DiagMatrix(sigma));
}

std::vector<Trial> parse_trials(std::istream &in, int num_feature_rows) {
  std::vector<Trial> trials;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 3)
      throw TrialFileError(line_no, "want 'enroll_rows test_row TYPE'");
    Trial trial;
    std::string part;
    std::istringstream enroll(fields[0]);
    while (std::getline(enroll, part, ',')) {
      long row = 0;
      if (!parse_long(part, &row) || row < 0 || row >= num_feature_rows)
        throw TrialFileError(line_no, "enroll row '" + part + "' out of range");
      trial.enroll_rows.push_back(static_cast<int>(row));
    }
    if (trial.enroll_rows.empty())
      throw TrialFileError(line_no, "empty enroll spec");
    long row = 0;
    if (!parse_long(fields[1], &row) || row < 0 || row >= num_feature_rows)
      throw TrialFileError(line_no, "test row '" + fields[1] + "' out of range");
    trial.test_row = static_cast<int>(row);
    try {
      trial.type = parse_trial_type(fields[2]);
    } catch (const std::exception &) {
      throw TrialFileError(line_no, "bad trial type '" + fields[2] + "'");
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

void write_trials(std::ostream &out, const std::vector<Trial> &trials) {
  for (const auto &trial : trials) {
    for (size_t i = 0; i < trial.enroll_rows.size(); ++i)
      out << (i == 0 ? "" : ",") << trial.enroll_rows[i];
    out << ' ' << trial.test_row << ' ' << trial_type_tag(trial.type) << "\n";
  }
}

void write_report(std::ostream &out, const EvalReport &report) {
  out << "mvplda-report 1\n";
  out << "TGT " << report.target_count << "\n";
  for (TrialType type : {TrialType::kImpostorWrong, TrialType::kImpostorCorrect,
                         TrialType::kTargetWrong}) {
    const auto it = report.per_type.find(type);
    if (it == report.per_type.end()) continue;
    out << trial_type_tag(type) << ' ' << format_double(it->second.eer) << ' '
        << format_double(it->second.threshold) << ' ' << it->second.count
        << "\n";
  }
  out << "Total " << format_double(report.overall.eer) << ' '
      << format_double(report.overall.threshold) << ' ' << report.overall.count
      << "\n";
}

EvalReport parse_report(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) ||
      split_fields(line) != std::vector<std::string>{"mvplda-report", "1"})
    throw MalformedHeader("want 'mvplda-report 1'");
  EvalReport report;
  bool saw_tgt = false, saw_total = false;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields[0] == "TGT") {
      long count = 0;
      if (fields.size() != 2 || !parse_long(fields[1], &count) || count < 1)
        throw RowArityError(line_no, "want 'TGT <count >= 1>'");
      report.target_count = count;
      saw_tgt = true;
      continue;
    }
    if (fields.size() != 4)
      throw RowArityError(line_no, "want '<row> <eer> <threshold> <count>'");
    double eer = 0.0, threshold = 0.0;
    long count = 0;
    if (!parse_double(fields[1], &eer) || !parse_double(fields[2], &threshold) ||
        !parse_long(fields[3], &count) || !std::isfinite(eer) ||
        !std::isfinite(threshold))
      throw NonFiniteValue(line_no, line);
    if (eer < 0.0 || eer > 1.0)
      throw RowArityError(line_no, "EER outside [0,1]");
    if (count < 1) throw RowArityError(line_no, "count must be >= 1");
    if (fields[0] == "Total") {
      report.overall = TypeResult{eer, threshold, count};
      saw_total = true;
    } else {
      const TrialType type = parse_trial_type(fields[0]);
      if (type == TrialType::kTarget)
        throw RowArityError(line_no, "TGT row carries only a count");
      report.per_type[type] = TypeResult{eer, threshold, count};
    }
  }
  if (!saw_tgt) throw MissingSection("TGT");
  if (!saw_total) throw MissingSection("Total");
  return report;
}

}  // namespace mvplda
