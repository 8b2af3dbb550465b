// Copyright 2026 The DLM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: data generation, augmentation, training,
// evaluation, sampling and the guidance service.
//
// Exit codes: 0 success, 1 usage, 2 data or schema error, 3 numeric failure.

#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "CLI11.hpp"
#include "dlm/augment.h"
#include "dlm/checkpoint.h"
#include "dlm/config.h"
#include "dlm/error.h"
#include "dlm/evaluation.h"
#include "dlm/guidance_server.h"
#include "dlm/svg.h"
#include "dlm/synth.h"
#include "dlm/trainer.h"
#include "dlm/version.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

int ExitCode(dlm::ErrorCode code) {
  switch (code) {
    case dlm::ErrorCode::kInvalidArgument:
    case dlm::ErrorCode::kEmptyCommand:
      return kExitUsage;
    case dlm::ErrorCode::kNumeric:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) dlm::Fail(dlm::ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
}

std::atomic<bool> g_interrupted{false};

void OnSignal(int) { g_interrupted = true; }

// --- gen-data -------------------------------------------------------------

struct GenDataArgs {
  int n = 0;
  uint64_t seed = 0;
  std::string noise = "default";
  std::string out;
};

int GenData(const GenDataArgs& a) {
  if (a.n < 1) dlm::Fail(dlm::ErrorCode::kInvalidArgument, "--n must be >= 1");
  const auto data =
      dlm::synth::GenerateDataset(a.n, dlm::NoiseProfile(a.noise), a.seed);
  dlm::io::WriteDataset(data, a.out);
  std::map<std::string, int> counts;
  for (const auto& s : data.samples) {
    ++counts[std::string(
        dlm::synth::IntentName(dlm::synth::ParseCommand(s.command).intent))];
  }
  std::printf("wrote %zu samples to %s\n", data.size(), a.out.c_str());
  for (const auto& [intent, count] : counts) {
    std::printf("  %-16s %d\n", intent.c_str(), count);
  }
  return 0;
}

// --- augment --------------------------------------------------------------

struct AugmentArgs {
  std::string in;
  std::string out;
  int k = 8;
  uint64_t seed = 0;
  std::string endpoint;
  std::string rejects;
};

int Augment(const AugmentArgs& a) {
  const auto source = dlm::io::ReadDataset(a.in);
  const auto report =
      dlm::augment::AugmentDataset(source, a.k, a.seed, a.endpoint);
  dlm::io::WriteDataset(report.dataset, a.out);
  std::string rejects;
  for (const auto& r : report.rejects) rejects += r + "\n";
  if (!a.rejects.empty()) WriteText(a.rejects, rejects);
  std::printf("wrote %zu samples (%zu inputs, k=%d) to %s\n",
              report.dataset.size(), source.size(), a.k, a.out.c_str());
  std::printf("rejects: %zu, paraphrase shortfalls: %d\n",
              report.rejects.size(), report.shortfalls);
  if (a.rejects.empty()) std::fputs(rejects.c_str(), stderr);
  return 0;
}

// --- train ----------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out;
  std::string history;
  std::string config;
  int epochs = 30;
  uint64_t seed = 0;
  bool no_standardize = false;
  bool no_augment_use = false;
  bool no_atld = false;
  std::string encoder = "trained";
};

int Train(const TrainArgs& a) {
  dlm::RunConfig config;
  config.train.epochs = a.epochs;
  config.train.seed = a.seed;
  config.model.seed = a.seed;
  config.model.standardize = !a.no_standardize;
  config.model.use_atld = !a.no_atld;
  config.model.encoder.kind = dlm::ParseEncoderKind(a.encoder);
  if (!a.config.empty()) dlm::ApplyConfigFile(a.config, &config);

  auto data = dlm::io::ReadDataset(a.data);
  if (a.no_augment_use) {
    std::erase_if(data.samples, [](const dlm::io::Sample& s) {
      return s.source == dlm::io::SampleSource::kAugmented;
    });
  }
  if (data.empty()) {
    dlm::Fail(dlm::ErrorCode::kSchema, "no training samples in " + a.data);
  }
  std::printf("training on %zu samples, config %s\n", data.size(),
              dlm::ConfigHash(config).c_str());
  dlm::TrainHistory history;
  const dlm::Policy policy = dlm::Train(
      data, config.model, config.train, &history,
      [](const dlm::EpochStats& s) {
        std::printf(
            "epoch %3d  loss %.5f  lr %.2e  val rmse %.1f cm  maoe %.2f deg  "
            "(%.1f s)\n",
            s.epoch, s.loss, s.lr, s.val_rmse_cm, s.val_maoe_deg, s.seconds);
        std::fflush(stdout);
      });

  json epochs = json::array();
  for (const auto& e : history.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"steps", e.steps},
                      {"loss", e.loss},
                      {"lr", e.lr},
                      {"val_rmse_cm", e.val_rmse_cm},
                      {"val_maoe_deg", e.val_maoe_deg},
                      {"seconds", e.seconds}});
  }
  const json training = {{"config", dlm::ConfigToJson(config)},
                         {"config_hash", dlm::ConfigHash(config)},
                         {"seed", a.seed},
                         {"data", a.data},
                         {"samples", data.size()},
                         {"no_augment_use", a.no_augment_use},
                         {"final_loss", history.epochs.back().loss}};
  dlm::io::SaveCheckpoint(policy, a.out, training);
  json report = training;
  report["history"] = std::move(epochs);
  WriteText(a.history.empty() ? a.out + ".history.json" : a.history,
            report.dump(2) + "\n");
  std::printf("saved %s\n", a.out.c_str());
  return 0;
}

// --- eval / corrupt-eval --------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string test_data;
  std::string report;
  int seeds = 1;
  uint64_t seed = 0;
  double threshold = dlm::metrics::kSuccessThreshold;
  bool ideal = false;
  // corrupt-eval only
  std::string mode = "dropout";
  int n = 925;
  std::string emit_corrupted;
};

json RunInfo(const dlm::io::CheckpointInfo& info, const EvalArgs& a) {
  return {{"checkpoint", a.checkpoint},
          {"checkpoint_hash", dlm::io::FileHash(a.checkpoint)},
          {"model", dlm::io::ModelConfigToJson(info.model)},
          {"training", info.training},
          {"test_data", a.test_data},
          {"seeds", a.seeds},
          {"seed", a.seed},
          {"threshold_m", a.threshold},
          {"ideal_reference", a.ideal}};
}

void PrintSummary(const char* label, const dlm::eval::EvalReport& r) {
  const auto& s = r.summary;
  std::printf(
      "%s: n=%d  SR %.1f%%  RMSE %.1f +- %.1f cm  MAOE %.2f +- %.2f deg  "
      "inference p50 %.1f ms p90 %.1f ms\n",
      label, s.count, s.sr_percent, s.rmse_cm.mean, s.rmse_cm.std,
      s.maoe_deg.mean, s.maoe_deg.std, r.timing.p50_ms, r.timing.p90_ms);
}

int Eval(const EvalArgs& a) {
  dlm::io::CheckpointInfo info;
  const dlm::Policy policy = dlm::io::LoadCheckpoint(a.checkpoint, &info);
  auto test = dlm::io::ReadDataset(a.test_data);
  if (a.ideal) test = dlm::eval::WithIdealReferences(test);
  const auto report = dlm::eval::EvaluatePolicy(
      policy, test, {a.seeds, a.seed, a.threshold});
  PrintSummary("eval", report);
  json out = RunInfo(info, a);
  out["results"] = dlm::eval::ReportToJson(report);
  if (!a.report.empty()) WriteText(a.report, out.dump(2) + "\n");
  return 0;
}

int CorruptEval(const EvalArgs& a) {
  dlm::io::CheckpointInfo info;
  const dlm::Policy policy = dlm::io::LoadCheckpoint(a.checkpoint, &info);
  auto source = dlm::io::ReadDataset(a.test_data);
  if (a.ideal) source = dlm::eval::WithIdealReferences(source);
  const auto mode = dlm::augment::ParseCorruptionMode(a.mode);
  const auto corrupted = dlm::eval::CorruptedSet(source, mode, a.n, a.seed);
  if (!a.emit_corrupted.empty()) {
    dlm::io::WriteDataset(corrupted, a.emit_corrupted);
  }
  const auto report = dlm::eval::EvaluatePolicy(
      policy, corrupted, {a.seeds, a.seed, a.threshold});
  PrintSummary(std::string(dlm::augment::CorruptionModeName(mode)).c_str(),
               report);
  json out = RunInfo(info, a);
  out["mode"] = dlm::augment::CorruptionModeName(mode);
  out["n"] = corrupted.size();
  out["results"] = dlm::eval::ReportToJson(report);
  if (!a.report.empty()) WriteText(a.report, out.dump(2) + "\n");
  return 0;
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
  std::string checkpoint;
  std::string command;
  uint64_t seed = 0;
  int seeds = 1;
  std::string emit = "json";
  std::string out;
};

int Sample(const SampleArgs& a) {
  const dlm::Policy policy = dlm::io::LoadCheckpoint(a.checkpoint);
  std::vector<dlm::Trajectory> trajectories;
  for (int i = 0; i < a.seeds; ++i) {
    trajectories.push_back(
        policy.Sample(a.command, a.seed + static_cast<uint64_t>(i)).trajectory);
  }
  std::optional<dlm::eval::Band> band;
  if (a.seeds > 1) band = dlm::eval::TrajectoryBand(trajectories);
  if (a.emit == "svg") {
    WriteText(a.out, dlm::RenderSvg(trajectories, band, a.command));
    return 0;
  }
  json out;
  if (a.seeds == 1) {
    out = dlm::guidance::TrajectoryToJson(trajectories.front());
  } else {
    json all = json::array();
    for (const auto& t : trajectories) {
      all.push_back(dlm::guidance::TrajectoryToJson(t));
    }
    json mean = json::array();
    for (const auto& p : band->mean) mean.push_back(dlm::guidance::PoseToJson(p));
    out = {{"command", a.command},
           {"trajectories", std::move(all)},
           {"band",
            {{"mean", std::move(mean)},
             {"xy_std", band->xy_std},
             {"heading_std", band->heading_std}}}};
  }
  WriteText(a.out, out.dump() + "\n");
  return 0;
}

// --- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string checkpoint;
  std::string bind = "127.0.0.1:8080";
};

int Serve(const ServeArgs& a) {
  const auto colon = a.bind.rfind(':');
  if (colon == std::string::npos) {
    dlm::Fail(dlm::ErrorCode::kInvalidArgument, "--bind expects host:port");
  }
  const std::string host = a.bind.substr(0, colon);
  const int port = std::stoi(a.bind.substr(colon + 1));
  const dlm::Policy policy = dlm::io::LoadCheckpoint(a.checkpoint);
  dlm::guidance::SessionManager sessions(
      [&policy](const std::string& text, uint64_t seed) {
        return policy.Sample(text, seed).trajectory;
      });
  dlm::guidance::GuidanceServer server(
      sessions, {dlm::kVersion, dlm::io::FileHash(a.checkpoint)});
  const int bound = server.Bind(host, port);
  spdlog::info("serving on {}:{}", host, bound);
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::thread worker([&server] { server.Run(); });
  while (!g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  spdlog::info("shutting down");
  server.Stop();
  worker.join();
  return 0;
}

// --- inspect / config -----------------------------------------------------

int Inspect(const std::string& path) {
  const auto info = dlm::io::InspectCheckpoint(path);
  json tensors = json::array();
  for (const auto& t : info.tensors) {
    tensors.push_back({{"name", t.name}, {"shape", {t.rows, t.cols}}});
  }
  const json out = {{"format_version", info.version},
                    {"model", dlm::io::ModelConfigToJson(info.model)},
                    {"vocabulary_size", info.vocabulary.size()},
                    {"training", info.training},
                    {"payload_bytes", info.payload_bytes},
                    {"tensors", std::move(tensors)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directive language model: text commands to SE(2) trajectories"};
  app.set_version_flag("--version", dlm::kVersion);
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->capture_default_str();

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a labeled dataset");
  gen_cmd->add_option("--n", gen.n, "Number of samples")->required();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--noise-profile", gen.noise)
      ->check(CLI::IsMember({"default", "none", "high"}))
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out)->required();

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment", "Add paraphrases per command");
  aug_cmd->add_option("--in", aug.in)->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("--out", aug.out)->required();
  aug_cmd->add_option("--k", aug.k)->capture_default_str();
  aug_cmd->add_option("--seed", aug.seed)->capture_default_str();
  aug_cmd->add_option("--external-endpoint", aug.endpoint,
                      "http://host:port/path of a paraphrase generator");
  aug_cmd->add_option("--rejects", aug.rejects, "Write rejects to this file");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a policy");
  train_cmd->add_option("--data", tr.data)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out-checkpoint", tr.out)->required();
  train_cmd->add_option("--history", tr.history,
                        "History JSON (default <checkpoint>.history.json)");
  train_cmd->add_option("--epochs", tr.epochs)->capture_default_str();
  train_cmd->add_option("--seed", tr.seed)->capture_default_str();
  train_cmd->add_option("--config", tr.config, "INI file; overrides flags")
      ->check(CLI::ExistingFile);
  train_cmd->add_flag("--no-standardize", tr.no_standardize);
  train_cmd->add_flag("--no-augment-use", tr.no_augment_use);
  train_cmd->add_flag("--no-atld", tr.no_atld);
  train_cmd->add_option("--encoder", tr.encoder)
      ->check(CLI::IsMember({"trained", "bag-of-words"}))
      ->capture_default_str();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  EvalArgs cev;
  auto* corrupt_cmd =
      app.add_subcommand("corrupt-eval", "Evaluate on corrupted commands");
  for (auto [cmd, args] : {std::pair{eval_cmd, &ev}, std::pair{corrupt_cmd, &cev}}) {
    cmd->add_option("--checkpoint", args->checkpoint)
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--test-data", args->test_data)
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seeds", args->seeds, "Sampling passes per command")
        ->capture_default_str();
    cmd->add_option("--seed", args->seed)->capture_default_str();
    cmd->add_option("--threshold", args->threshold, "Success radius, meters")
        ->capture_default_str();
    cmd->add_flag("--ideal-reference", args->ideal,
                  "Score against noise-free executions of each command");
    cmd->add_option("--report", args->report, "JSON report path");
  }
  corrupt_cmd->add_option("--mode", cev.mode)
      ->check(CLI::IsMember({"dropout", "truncate", "mixed", "word_dropout",
                             "truncation", "mixed_speaker"}))
      ->capture_default_str();
  corrupt_cmd->add_option("--n", cev.n)->capture_default_str();
  corrupt_cmd->add_option("--emit-corrupted", cev.emit_corrupted,
                          "Write the corrupted test set here");

  SampleArgs sa;
  auto* sample_cmd = app.add_subcommand("sample", "Generate a trajectory");
  sample_cmd->add_option("--checkpoint", sa.checkpoint)
      ->required()
      ->check(CLI::ExistingFile);
  sample_cmd->add_option("--command", sa.command)->required();
  sample_cmd->add_option("--seed", sa.seed)->capture_default_str();
  sample_cmd->add_option("--seeds", sa.seeds,
                         "Consecutive seeds; > 1 adds a mean +- std band")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample_cmd->add_option("--emit", sa.emit)
      ->check(CLI::IsMember({"json", "svg"}))
      ->capture_default_str();
  sample_cmd->add_option("--out", sa.out, "Output file (default stdout)");

  ServeArgs sv;
  auto* serve_cmd = app.add_subcommand("serve", "Run the guidance service");
  serve_cmd->add_option("--checkpoint", sv.checkpoint)
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--bind", sv.bind)->capture_default_str();

  std::string inspect_path;
  auto* inspect_cmd =
      app.add_subcommand("inspect", "Print a checkpoint header");
  inspect_cmd->add_option("checkpoint", inspect_path)->required();

  auto* config_cmd =
      app.add_subcommand("config", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*gen_cmd) return GenData(gen);
    if (*aug_cmd) return Augment(aug);
    if (*train_cmd) return Train(tr);
    if (*eval_cmd) return Eval(ev);
    if (*corrupt_cmd) return CorruptEval(cev);
    if (*sample_cmd) return Sample(sa);
    if (*serve_cmd) return Serve(sv);
    if (*inspect_cmd) return Inspect(inspect_path);
    if (*config_cmd) {
      std::cout << dlm::ConfigToIni(dlm::RunConfig{});
      return 0;
    }
  } catch (const dlm::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n",
                 std::string(dlm::ErrorCodeName(e.code())).c_str(), e.what());
    return ExitCode(e.code());
  }
  return kExitUsage;
}
