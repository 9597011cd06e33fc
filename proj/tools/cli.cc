/*
 * Copyright 2026 The dynbps Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "dynbps/bench.h"
#include "dynbps/errors.h"
#include "dynbps/gradients.h"
#include "dynbps/mesh_io.h"
#include "dynbps/serialization.h"

namespace dynbps::cli {
namespace {

constexpr const char* kThreadsEnv = "DYNBPS_THREADS";

// Failures that carry their own exit code.
class CliFailure : public std::runtime_error {
 public:
  CliFailure(ExitCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct Emitter {
  std::ostream& out;
  std::string path;

  void Emit(const std::string& text) const {
    if (path.empty()) {
      out << text;
      out.flush();
      return;
    }
    try {
      WriteFile(path, text);
    } catch (const IoError& e) {
      throw CliFailure(kUnwritableOutput, e.what());
    }
  }
};

std::string JsonText(const Json& json) { return json.dump(2) + "\n"; }

std::string ReadInput(const std::string& path) {
  try {
    return ReadFile(path);
  } catch (const IoError& e) {
    throw CliFailure(kInputData, e.what());
  }
}

Json ParseJsonFile(const std::string& path) {
  const std::string text = ReadInput(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
}

IndexedMesh LoadIndexedMesh(const std::string& path, std::ostream& err) {
  TriangleMesh mesh;
  try {
    mesh = LoadMesh(path);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  IndexedMesh indexed(std::move(mesh));
  const ValidationReport& report = indexed.validation();
  if (report.num_removed() > 0) {
    err << "warning: " << path << ": removed " << report.num_removed()
        << " invalid or degenerate triangles\n";
  }
  if (!report.watertight) {
    err << "warning: " << path << " is not watertight ("
        << report.boundary_edges.size() << " boundary, "
        << report.nonmanifold_edges.size() << " non-manifold, "
        << report.inconsistent_edges.size() << " inconsistent edges)\n";
  }
  return indexed;
}

Pose PoseArgument(const std::string& text) {
  try {
    return ParsePoseArgument(text);
  } catch (const ParseError& e) {
    throw CliFailure(kUsage, std::string("invalid pose: ") + e.what());
  }
}

void WarnPolicy(InteriorPolicy policy, std::ostream& err) {
  if (policy == InteriorPolicy::kSkip) {
    err << "warning: interior policy 'skip' treats every basis point as "
           "exterior; points inside the object get surface vectors\n";
  }
}

std::vector<std::string> PolicyNames() { return {"zero", "skip"}; }

struct GridFlags {
  int points_per_axis = kDefaultPointsPerAxis;
  double half_extent = kDefaultHalfExtent;

  void Add(CLI::App* cmd) {
    cmd->add_option("--grid", points_per_axis, "Basis points per axis")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    cmd->add_option("--half-extent", half_extent,
                    "Half side length of the basis point cube (m)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
};

// ---------------------------------------------------------------------------

struct EncodeFlags {
  std::string mesh;
  std::string pose;
  GridFlags grid;
  std::string format = "json";
  std::string out;
  std::string interior = "zero";
  bool gradients = false;
};

void RunEncode(const EncodeFlags& flags, std::ostream& out,
               std::ostream& err) {
  if (flags.gradients && flags.format != "json") {
    throw CliFailure(kUsage, "--gradients requires --format json");
  }
  const Pose pose = flags.pose.empty() ? Pose::Identity()
                                       : PoseArgument(flags.pose);
  const IndexedMesh mesh = LoadIndexedMesh(flags.mesh, err);
  const BasisPointSet bps =
      MakeGrid(flags.grid.points_per_axis, flags.grid.half_extent);
  EncodeOptions options;
  options.interior = ParseInteriorPolicy(flags.interior);
  WarnPolicy(options.interior, err);

  const BpsEncoding encoding = EncodeDynamic(bps, pose, mesh, options);
  const Emitter emitter{out, flags.out};
  if (flags.format == "csv") {
    emitter.Emit(EncodingToCsv(bps, encoding));
    return;
  }
  std::unique_ptr<PoseJacobian> jacobian;
  if (flags.gradients) {
    jacobian = std::make_unique<PoseJacobian>(
        GradMagnitudes(bps, pose, mesh, options));
  }
  emitter.Emit(JsonText(
      EncodingToJson(bps, pose, encoding, options.interior, jacobian.get())));
}

// ---------------------------------------------------------------------------

struct RecoverFlags {
  std::string mesh;
  std::string observed;
  std::string init_pose;
  int trials = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string config;
  GridFlags grid;
  int threads = 1;
  std::string out;
};

void CheckGrid(const EncodingFile& observed, const BasisPointSet& bps,
               const std::string& path) {
  const std::size_t expected = bps.size();
  const std::size_t actual = observed.encoding.size();
  if (actual != expected || observed.points_per_axis != bps.points_per_axis) {
    throw ParseError(path + ": observed encoding has N_b=" +
                     std::to_string(actual) + " (grid " +
                     std::to_string(observed.points_per_axis) +
                     ") but the basis point set has N_b=" +
                     std::to_string(expected) + " (grid " +
                     std::to_string(bps.points_per_axis) + ")");
  }
  const double tol = 1e-9 * bps.half_extent;
  if (std::abs(observed.half_extent - bps.half_extent) > tol) {
    throw ParseError(path + ": observed encoding has half extent " +
                     FormatDouble(observed.half_extent) +
                     " but the basis point set uses " +
                     FormatDouble(bps.half_extent));
  }
}

void RunRecover(const RecoverFlags& flags, std::ostream& out,
                std::ostream& err) {
  const Pose init = PoseArgument(flags.init_pose);
  const IndexedMesh mesh = LoadIndexedMesh(flags.mesh, err);
  const BasisPointSet bps =
      MakeGrid(flags.grid.points_per_axis, flags.grid.half_extent);

  EncodingFile observed;
  try {
    observed = ParseEncoding(ReadInput(flags.observed));
  } catch (const ParseError& e) {
    throw ParseError(flags.observed + ": " + e.what());
  }
  CheckGrid(observed, bps, flags.observed);

  RecoveryConfig config;
  TrialSettings settings;
  if (!flags.config.empty()) {
    ApplyRecoveryJson(ParseJsonFile(flags.config), mesh.mesh(), config,
                      settings);
  }
  if (flags.seed_given) config.seed = flags.seed;
  settings.trials = flags.trials;
  settings.threads = flags.threads;
  WarnPolicy(config.encode.interior, err);

  const Pose* reference = observed.pose ? &*observed.pose : nullptr;
  if (reference == nullptr) {
    err << "note: observed encoding carries no pose; trials are scored on "
           "d_v only\n";
  }
  const TrialBatch batch =
      RunRecoveryTrials(observed.encoding.magnitudes, bps, mesh, init, config,
                        settings, reference);
  err << "recover: " << batch.outcomes.size() << " trials, success fraction "
      << batch.success_fraction() << ", mean iterations "
      << batch.mean_iterations() << "\n";
  Emitter{out, flags.out}.Emit(JsonText(TrialBatchToJson(batch, config, settings)));
}

// ---------------------------------------------------------------------------

struct BenchFlags {
  std::string mesh;
  BenchOptions options;
  GridFlags grid;
  std::string interior = "zero";
  std::string out;
};

const char* BackendName(QueryBackend backend) {
  return backend == QueryBackend::kBvh ? "bvh" : "brute_force";
}

void RunBenchCommand(BenchFlags flags, std::ostream& out, std::ostream& err) {
  const IndexedMesh mesh = LoadIndexedMesh(flags.mesh, err);
  const BasisPointSet bps =
      MakeGrid(flags.grid.points_per_axis, flags.grid.half_extent);
  flags.options.interior = ParseInteriorPolicy(flags.interior);
  WarnPolicy(flags.options.interior, err);
  const std::string id = std::filesystem::path(flags.mesh).stem().string();

  const BenchReport report = RunBench(bps, mesh, id, flags.options);
  if (!report.checksums_match) {
    for (const BenchRun& run : report.runs) {
      err << BackendName(run.backend) << " threads=" << run.threads
          << " checksum " << run.checksum << "\n";
    }
    throw CliFailure(kNumerical,
                     "checksum mismatch between backends or thread counts");
  }
  Json runs = Json::array();
  for (const BenchRun& run : report.runs) {
    runs.push_back({{"backend", BackendName(run.backend)},
                    {"threads", run.threads},
                    {"seconds", run.seconds},
                    {"queries_per_second", run.queries_per_second},
                    {"encodings_per_second",
                     run.seconds > 0.0 ? flags.options.poses / run.seconds
                                       : 0.0}});
  }
  char checksum[17];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(report.runs[0].checksum));
  const Json json{{"mesh_id", report.mesh_id},
                  {"triangles", report.triangles},
                  {"poses", flags.options.poses},
                  {"basis_points", bps.size()},
                  {"queries", report.queries},
                  {"seed", flags.options.seed},
                  {"runs", runs},
                  {"speedup", report.speedup},
                  {"checksum", checksum},
                  {"checksums_match", report.checksums_match}};
  err << "bench: " << report.triangles << " triangles, BVH speedup "
      << report.speedup << "x, checksums match\n";
  Emitter{out, flags.out}.Emit(JsonText(json));
}

// ---------------------------------------------------------------------------

struct RewardFlags {
  std::string trajectory;
  std::string params;
  std::string out;
};

void RunReward(const RewardFlags& flags, std::ostream& out) {
  RewardParams params;
  if (!flags.params.empty()) {
    try {
      params = RewardParamsFromJson(ParseJsonFile(flags.params));
    } catch (const ParseError& e) {
      throw ParseError(flags.params + ": " + e.what());
    }
  }
  std::vector<TrajectoryStep> steps;
  try {
    steps = ParseTrajectoryCsv(ReadInput(flags.trajectory));
  } catch (const ParseError& e) {
    throw ParseError(flags.trajectory + ": " + e.what());
  }
  if (steps.size() < 2) {
    throw ParseError(flags.trajectory +
                     ": trajectory needs at least 2 steps, got " +
                     std::to_string(steps.size()));
  }
  Emitter{out, flags.out}.Emit(
      RewardRowsToCsv(EvaluateTrajectory(steps, params)));
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Dynamic basis point set encoding of posed triangle meshes",
               "dynbps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dynbps 1.0.0");

  EncodeFlags encode;
  CLI::App* encode_cmd = app.add_subcommand("encode", "Encode a posed mesh");
  encode_cmd->add_option("--mesh", encode.mesh, "OBJ or STL mesh")->required();
  encode_cmd->add_option(
      "--pose", encode.pose,
      "Pose as JSON, 'w,x,y,z,tx,ty,tz', or a JSON file (default identity)");
  encode.grid.Add(encode_cmd);
  encode_cmd->add_option("--format", encode.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  encode_cmd->add_option("--out", encode.out, "Output path (default stdout)");
  encode_cmd->add_option("--interior", encode.interior, "Interior policy")
      ->check(CLI::IsMember(PolicyNames()))
      ->capture_default_str();
  encode_cmd->add_flag("--gradients", encode.gradients,
                       "Include per-basis-point pose gradients");

  RecoverFlags recover;
  CLI::App* recover_cmd =
      app.add_subcommand("recover", "Recover a pose from observed magnitudes");
  recover_cmd->add_option("--mesh", recover.mesh, "OBJ or STL mesh")
      ->required();
  recover_cmd->add_option("--observed", recover.observed,
                          "Encoding file (JSON or CSV)")
      ->required();
  recover_cmd->add_option("--init-pose", recover.init_pose, "Initial pose")
      ->required();
  recover_cmd->add_option("--trials", recover.trials,
                          "Trials; trial 0 starts at the initial pose, the "
                          "rest from seeded perturbations of it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::Option* seed_opt =
      recover_cmd->add_option("--seed", recover.seed, "Random seed");
  recover_cmd->add_option("--config", recover.config, "Recovery JSON config");
  recover.grid.Add(recover_cmd);
  recover_cmd->add_option("--threads", recover.threads, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->envname(kThreadsEnv)
      ->capture_default_str();
  recover_cmd->add_option("--out", recover.out, "Output path (default stdout)");

  BenchFlags bench;
  bench.options.threads = 1;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Time brute-force and BVH encoding");
  bench_cmd->add_option("--mesh", bench.mesh, "OBJ or STL mesh")->required();
  bench_cmd->add_option("--poses", bench.options.poses, "Random poses")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.options.threads,
                        "Threads for the parallel runs")
      ->check(CLI::Range(1, 1024))
      ->envname(kThreadsEnv)
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.options.seed, "Random seed")
      ->capture_default_str();
  bench.grid.Add(bench_cmd);
  bench_cmd->add_option("--interior", bench.interior, "Interior policy")
      ->check(CLI::IsMember(PolicyNames()))
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output path (default stdout)");

  std::string group_format = "json";
  std::string group_out;
  CLI::App* group_cmd =
      app.add_subcommand("group", "Print the 24 octahedral rotations");
  group_cmd->add_option("--format", group_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  group_cmd->add_option("--out", group_out, "Output path (default stdout)");

  RewardFlags reward;
  CLI::App* reward_cmd =
      app.add_subcommand("reward", "Per-step reward decomposition");
  reward_cmd->add_option("--trajectory", reward.trajectory,
                         "CSV rows of theta,x,y,z,q0..q11")
      ->required();
  reward_cmd->add_option("--params", reward.params, "Reward parameter JSON");
  reward_cmd->add_option("--out", reward.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*encode_cmd) {
      RunEncode(encode, out, err);
    } else if (*recover_cmd) {
      recover.seed_given = seed_opt->count() > 0;
      RunRecover(recover, out, err);
    } else if (*bench_cmd) {
      RunBenchCommand(bench, out, err);
    } else if (*group_cmd) {
      Emitter{out, group_out}.Emit(group_format == "csv" ? GroupToCsv()
                                                         : JsonText(GroupToJson()));
    } else if (*reward_cmd) {
      RunReward(reward, out);
    }
  } catch (const CliFailure& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const InvalidRotationError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const ContainmentUnavailableError& e) {
    err << "error: " << e.what()
        << " (use --interior skip for open meshes)\n";
    return kInputData;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputData;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kInputData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}

}  // namespace dynbps::cli
