// mvplda/cli.cc

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

#include "mvplda/cli.h"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "mvplda/eval.h"
#include "mvplda/io.h"
#include "mvplda/rng.h"
#include "mvplda/synth.h"

namespace mvplda {

namespace {

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string &what) : std::runtime_error(what) {}
};

class FileError : public std::runtime_error {
 public:
  explicit FileError(const std::string &what) : std::runtime_error(what) {}
};

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path);
  return out;
}

std::vector<double> parse_prior_list(const std::string &text) {
  std::vector<double> values;
  std::istringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception &) {
      throw UsageError("bad prior entry '" + part + "'");
    }
  }
  return values;
}

struct SynthArgs {
  SynthConfig config;
  std::string out;
  std::string trials_out;
  int enroll = 3;
};

void run_synth(const SynthArgs &args) {
  const JointPldaModel truth = make_truth(args.config);
  const Dataset data = sample_dataset(truth, args.config);
  auto out = open_output(args.out);
  write_features(out, data);

  if (args.trials_out.empty()) return;
  const int num_a = args.config.num_a;
  const int num_b = args.config.num_b;
  const int per_cell = args.config.samples_per_cell;
  if (args.enroll < 1 || args.enroll >= per_cell)
    throw UsageError("--enroll must leave at least one test sample per cell");
  if (num_a < 2 || num_b < 2)
    throw UsageError("--trials-out needs >= 2 speakers and >= 2 phrases");

  std::mt19937_64 partner(substream_seed(args.config.seed, Stream::kTrials));
  const auto row = [&](int i, int j, int k) {
    return (i * num_b + j) * per_cell + k;
  };
  std::vector<Trial> trials;
  for (int i = 0; i < num_a; ++i)
    for (int j = 0; j < num_b; ++j) {
      std::vector<int> enroll_rows;
      for (int k = 0; k < args.enroll; ++k) enroll_rows.push_back(row(i, j, k));
      for (int k = args.enroll; k < per_cell; ++k) {
        const int i2 =
            (i + 1 + static_cast<int>(partner() % (num_a - 1))) % num_a;
        const int j2 =
            (j + 1 + static_cast<int>(partner() % (num_b - 1))) % num_b;
        trials.push_back({enroll_rows, row(i, j, k), TrialType::kTarget});
        trials.push_back({enroll_rows, row(i2, j2, k), TrialType::kImpostorWrong});
        trials.push_back({enroll_rows, row(i, j2, k), TrialType::kTargetWrong});
        trials.push_back({enroll_rows, row(i2, j, k), TrialType::kImpostorCorrect});
      }
    }
  auto tout = open_output(args.trials_out);
  write_trials(tout, trials);
}

struct TrainArgs {
  std::string kind;
  int iterations = 10;
  int subspace = 40;
  int nu = 20;
  int nv = 20;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
};

void run_train(const TrainArgs &args) {
  std::ifstream in(args.in);
  if (!in) throw FileError("cannot open " + args.in);
  const FeatureData features = parse_features(in);

  LLTrace trace;
  std::ostringstream model_text;
  if (args.kind == "plda") {
    PldaConfig config;
    config.iterations = args.iterations;
    config.subspace_dim = args.subspace;
    config.seed = args.seed;
    auto [model, tr] = plda_train(features.data, config);
    trace = std::move(tr);
    write_model(model_text, model);
  } else {
    JointPldaConfig config;
    config.iterations = args.iterations;
    config.nu = args.nu;
    config.nv = args.nv;
    config.seed = args.seed;
    auto [model, tr] = jplda_train(features.data, config);
    trace = std::move(tr);
    write_model(model_text, model);
  }
  auto out = open_output(args.out);
  out << model_text.str();
  auto trace_out = open_output(args.out + ".lltrace");
  for (double v : trace.values) trace_out << format_double(v) << "\n";
}

struct ScorerArgs {
  std::string model;
  std::string features;
  std::string trials;
  std::string mode = "fast";
  std::string hypothesis = "joint";
  std::string priors;
  bool mode_given = false;
  bool hypothesis_given = false;
  bool priors_given = false;
};

// Builds the pair scorer a model file describes, honoring --mode /
// --hypothesis / --priors.
PairScorer build_scorer(const ScorerArgs &args) {
  const std::string text = read_file(args.model);
  const ModelKind kind = parse_model_kind(text);
  if (kind == ModelKind::kPlda) {
    if (args.hypothesis_given)
      throw UsageError("--hypothesis applies to jplda models only");
    if (args.priors_given)
      throw UsageError("--priors applies to jplda models only");
    const PldaModel model = parse_plda_model(text);
    if (args.mode == "fast") {
      const FastScorer scorer = plda_scorer_precompute(model);
      return [scorer](const Vector &xt, const Vector &xs) {
        return plda_llr_fast(scorer, xt, xs);
      };
    }
    if (args.mode == "naive")
      return [model](const Vector &xt, const Vector &xs) {
        return plda_llr_naive(model, xt, xs);
      };
    throw UsageError("--mode must be naive or fast");
  }

  if (args.mode_given) throw UsageError("--mode applies to plda models only");
  const JointPldaModel model = parse_jplda_model(text);
  if (args.hypothesis == "joint") {
    JointPriors priors = JointPriors::Uniform();
    if (args.priors_given) {
      const auto p = parse_prior_list(args.priors);
      if (p.size() != 3) throw UsageError("joint test wants 3 priors");
      priors = JointPriors(p[0], p[1], p[2]);
    }
    return [model, priors](const Vector &xt, const Vector &xs) {
      return jplda_llr(model, priors, xt, xs);
    };
  }
  if (args.hypothesis == "view-a" || args.hypothesis == "view-b") {
    ViewPriors priors = ViewPriors::Uniform();
    if (args.priors_given) {
      const auto p = parse_prior_list(args.priors);
      if (p.size() != 4) throw UsageError("view test wants 4 priors");
      priors = ViewPriors(p[0], p[1], p[2], p[3]);
    }
    const View view = args.hypothesis == "view-a" ? View::kA : View::kB;
    return [model, priors, view](const Vector &xt, const Vector &xs) {
      return jplda_llr_view(model, priors, xt, xs, view);
    };
  }
  throw UsageError("--hypothesis must be joint, view-a or view-b");
}

std::pair<Dataset, std::vector<Trial>> load_trial_set(const ScorerArgs &args) {
  std::ifstream fin(args.features);
  if (!fin) throw FileError("cannot open " + args.features);
  FeatureData features = parse_features(fin);
  std::ifstream tin(args.trials);
  if (!tin) throw FileError("cannot open " + args.trials);
  auto trials =
      parse_trials(tin, static_cast<int>(features.data.items.size()));
  return {std::move(features.data), std::move(trials)};
}

void run_score(const ScorerArgs &args, const std::string &out_path) {
  const PairScorer scorer = build_scorer(args);
  const auto [features, trials] = load_trial_set(args);
  auto out = open_output(out_path);
  for (const auto &trial : trials) {
    std::vector<Vector> enroll;
    for (int r : trial.enroll_rows) enroll.push_back(features.items[r].features);
    out << format_double(scorer(average_enroll(enroll),
                                features.items[trial.test_row].features))
        << "\n";
  }
}

void run_eval(const ScorerArgs &args, const std::string &report_path) {
  const PairScorer scorer = build_scorer(args);
  const auto [features, trials] = load_trial_set(args);
  const EvalReport report = evaluate_trials(scorer, features, trials);
  auto out = open_output(report_path);
  write_report(out, report);
}

void run_check(const std::string &report_path) {
  std::ifstream in(report_path);
  if (!in) throw FileError("cannot open " + report_path);
  parse_report(in);
}

}  // namespace

int run_cli(int argc, const char *const *argv) {
  CLI::App app{"Multi-view PLDA verification toolkit"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto *synth_cmd = app.add_subcommand(
      "synth", "Generate a labeled synthetic feature file from a seeded truth model");
  synth_cmd->add_option("--d", synth_args.config.dim, "feature dim")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--nu", synth_args.config.nu, "speaker subspace dim")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--nv", synth_args.config.nv, "phrase subspace dim")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--speakers", synth_args.config.num_a, "count of A labels")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--phrases", synth_args.config.num_b, "count of B labels")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--per-cell", synth_args.config.samples_per_cell,
                        "samples per (speaker, phrase) cell")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--noise", synth_args.config.noise_scale, "noise std")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth_args.config.seed, "master seed");
  synth_cmd->add_option("--out", synth_args.out, "feature file")->required();
  synth_cmd->add_option("--trials-out", synth_args.trials_out,
                        "also emit a TGT/IW/TW/IC trial list");
  synth_cmd->add_option("--enroll", synth_args.enroll,
                        "enrollment utterances per trial")
      ->check(CLI::PositiveNumber);

  TrainArgs train_args;
  auto *train_cmd = app.add_subcommand("train", "EM-train a model on a feature file");
  train_cmd->add_option("--kind", train_args.kind, "plda or jplda")
      ->required()
      ->check(CLI::IsMember({"plda", "jplda"}));
  train_cmd->add_option("--iters", train_args.iterations, "EM iterations")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--n", train_args.subspace, "plda subspace dim")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--nu", train_args.nu, "jplda speaker subspace dim")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--nv", train_args.nv, "jplda phrase subspace dim")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--seed", train_args.seed, "init seed");
  train_cmd->add_option("--in", train_args.in, "feature file")->required();
  train_cmd->add_option("--out", train_args.out, "model file")->required();

  ScorerArgs score_args;
  std::string score_out;
  auto *score_cmd =
      app.add_subcommand("score", "Score a trial list, one value per line");
  score_cmd->add_option("--model", score_args.model)->required();
  score_cmd->add_option("--features", score_args.features)->required();
  score_cmd->add_option("--trials", score_args.trials)->required();
  score_cmd->add_option("--out", score_out)->required();
  auto *score_mode = score_cmd->add_option("--mode", score_args.mode,
                                           "plda scorer: naive or fast");
  auto *score_hyp = score_cmd->add_option("--hypothesis", score_args.hypothesis,
                                          "jplda test: joint, view-a, view-b");
  auto *score_priors =
      score_cmd->add_option("--priors", score_args.priors,
                            "comma list: 3 values (joint) or 4 (view tests)");

  ScorerArgs eval_args;
  std::string report_path;
  bool check_only = false;
  auto *eval_cmd =
      app.add_subcommand("eval", "Score trials and report per-type EER");
  auto *eval_model = eval_cmd->add_option("--model", eval_args.model);
  auto *eval_features = eval_cmd->add_option("--features", eval_args.features);
  auto *eval_trials = eval_cmd->add_option("--trials", eval_args.trials);
  eval_cmd->add_option("--report", report_path)->required();
  auto *eval_mode = eval_cmd->add_option("--mode", eval_args.mode);
  auto *eval_hyp = eval_cmd->add_option("--hypothesis", eval_args.hypothesis);
  auto *eval_priors = eval_cmd->add_option("--priors", eval_args.priors);
  eval_cmd->add_flag("--check", check_only,
                     "re-parse and validate an existing report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "mvplda: usage error: " << e.what() << std::endl;
    return 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (*synth_cmd) run_synth(synth_args);
    if (*train_cmd) run_train(train_args);
    if (*score_cmd) {
      score_args.mode_given = score_mode->count() > 0;
      score_args.hypothesis_given = score_hyp->count() > 0;
      score_args.priors_given = score_priors->count() > 0;
      run_score(score_args, score_out);
    }
    if (*eval_cmd) {
      if (check_only) {
        run_check(report_path);
      } else {
        if (eval_model->count() == 0 || eval_features->count() == 0 ||
            eval_trials->count() == 0)
          throw UsageError("eval wants --model, --features and --trials");
        eval_args.mode_given = eval_mode->count() > 0;
        eval_args.hypothesis_given = eval_hyp->count() > 0;
        eval_args.priors_given = eval_priors->count() > 0;
        run_eval(eval_args, report_path);
      }
    }
  } catch (const UsageError &e) {
    std::cerr << "mvplda " << sub << ": usage error: " << e.what() << std::endl;
    return 1;
  } catch (const InvalidPriors &e) {
    std::cerr << "mvplda " << sub << ": usage error: " << e.what() << std::endl;
    return 1;
  } catch (const NotPositiveDefinite &e) {
    std::cerr << "mvplda " << sub << ": numeric error: " << e.what() << std::endl;
    return 3;
  } catch (const SingularAccumulator &e) {
    std::cerr << "mvplda " << sub << ": numeric error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "mvplda " << sub << ": data error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}

}  // namespace mvplda
