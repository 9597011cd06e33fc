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

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "dynbps/errors.h"
#include "dynbps/mesh_io.h"
#include "dynbps/serialization.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace dynbps {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dynbps");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  CliRun run;
  run.code = cli::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dynbps_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    cube_ = Path("cube.obj");
    WriteFile(cube_, testing::kCubeObj);
    unsetenv("DYNBPS_THREADS");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
  std::string cube_;
};

TEST_F(CliTest, EncodeCubeCsvHas64Rows) {
  const CliRun run = Cli({"encode", "--mesh", cube_, "--format", "csv"});
  ASSERT_EQ(run.code, 0) << run.err;
  const auto lines = Lines(run.out);
  ASSERT_EQ(lines.size(), 65u);
  EXPECT_EQ(lines[0], "k,px,py,pz,vx,vy,vz,mag,interior");
  const EncodingFile parsed = ParseEncodingCsv(run.out);
  EXPECT_EQ(parsed.points_per_axis, 4);
  EXPECT_EQ(parsed.half_extent, 0.07);
  int interior = 0;
  for (bool b : parsed.encoding.interior_mask) interior += b;
  EXPECT_EQ(interior, 8);
}

TEST_F(CliTest, EncodeMissingMeshIsUsageError) {
  EXPECT_EQ(Cli({"encode"}).code, cli::kUsage);
  EXPECT_EQ(Cli({}).code, cli::kUsage);
  EXPECT_EQ(Cli({"encode", "--mesh", cube_, "--format", "xml"}).code,
            cli::kUsage);
  EXPECT_EQ(Cli({"encode", "--mesh", cube_, "--pose", "1,0,0"}).code,
            cli::kUsage);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST_F(CliTest, EncodeIsByteIdenticalAcrossRuns) {
  const std::vector<std::string> args{
      "encode", "--mesh", cube_, "--pose",
      R"({"t": [0.01, 0, 0.002], "q": [0.9238795325112867, 0, 0.3826834323650898, 0]})",
      "--gradients"};
  auto with_out = [&](const std::string& name) {
    auto a = args;
    a.insert(a.end(), {"--out", Path(name)});
    return a;
  };
  ASSERT_EQ(Cli(with_out("a.json")).code, 0);
  ASSERT_EQ(Cli(with_out("b.json")).code, 0);
  EXPECT_EQ(ReadFile(Path("a.json")), ReadFile(Path("b.json")));
  const Json json = Json::parse(ReadFile(Path("a.json")));
  EXPECT_EQ(json["grid"]["count"], 64);
  EXPECT_EQ(json["interior_policy"], "zero");
  EXPECT_EQ(json["gradients"]["d_translation"].size(), 64u);
}

TEST_F(CliTest, EncodeErrorsHaveDistinctCodes) {
  EXPECT_EQ(Cli({"encode", "--mesh", Path("missing.obj")}).code,
            cli::kInputData);
  WriteFile(Path("bad.obj"), "v 0 0 0\nf 1 2 3\n");
  EXPECT_EQ(Cli({"encode", "--mesh", Path("bad.obj")}).code, cli::kInputData);
  EXPECT_EQ(Cli({"encode", "--mesh", cube_, "--pose", "0.9,0.1,0,0,0,0,0"}).code,
            cli::kNumerical);
  EXPECT_EQ(Cli({"encode", "--mesh", cube_, "--pose",
                 R"({"R": [[1,0,0],[0,1,0],[0,0.1,1]]})"})
                .code,
            cli::kNumerical);
  EXPECT_EQ(Cli({"encode", "--mesh", cube_, "--out",
                 Path("no/such/dir/out.json")})
                .code,
            cli::kUnwritableOutput);
}

TEST_F(CliTest, EncodeOpenMeshNeedsSkip) {
  TriangleMesh open = MakeBox(Vec3::Constant(0.05));
  open.triangles.pop_back();
  WriteFile(Path("open.stl"), WriteBinaryStl(open));
  const CliRun zero = Cli({"encode", "--mesh", Path("open.stl")});
  EXPECT_EQ(zero.code, cli::kInputData);
  EXPECT_NE(zero.err.find("--interior skip"), std::string::npos);
  const CliRun skip =
      Cli({"encode", "--mesh", Path("open.stl"), "--interior", "skip"});
  EXPECT_EQ(skip.code, 0);
  EXPECT_NE(skip.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, PoseFromFileAndMatrix) {
  WriteFile(Path("pose.json"),
            R"({"t": [0.01, 0, 0], "R": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})");
  const CliRun run = Cli({"encode", "--mesh", cube_, "--pose", Path("pose.json"),
                       "--format", "csv"});
  ASSERT_EQ(run.code, 0) << run.err;
  const EncodingFile parsed = ParseEncodingCsv(run.out);
  // Basis point 0 sits at (-0.07,-0.07,-0.07); the cube spans -0.04..0.06 in x.
  EXPECT_NEAR(parsed.encoding.vectors[0].x(), 0.03, 1e-15);
}

TEST_F(CliTest, RecoverAtGeneratingPoseTakesNoSteps) {
  const std::string pose = "1,0,0,0,0.004,0,-0.002";
  ASSERT_EQ(Cli({"encode", "--mesh", cube_, "--pose", pose, "--out",
                 Path("obs.json")})
                .code,
            0);
  const CliRun run = Cli({"recover", "--mesh", cube_, "--observed",
                       Path("obs.json"), "--init-pose", pose});
  ASSERT_EQ(run.code, 0) << run.err;
  const Json report = Json::parse(run.out);
  EXPECT_EQ(report["trials"][0]["iterations"], 0);
  EXPECT_EQ(report["trials"][0]["final_dv"], 0.0);
  EXPECT_EQ(report["aggregate"]["success_fraction"], 1.0);
}

TEST_F(CliTest, RecoverGridMismatchNamesBothSizes) {
  ASSERT_EQ(Cli({"encode", "--mesh", cube_, "--grid", "3", "--out",
                 Path("obs27.json")})
                .code,
            0);
  const CliRun run = Cli({"recover", "--mesh", cube_, "--observed",
                       Path("obs27.json"), "--init-pose", "1,0,0,0,0,0,0"});
  EXPECT_EQ(run.code, cli::kInputData);
  EXPECT_NE(run.err.find("27"), std::string::npos) << run.err;
  EXPECT_NE(run.err.find("64"), std::string::npos) << run.err;
}

TEST_F(CliTest, RecoverTrialsAreDeterministic) {
  WriteFile(Path("cuboid.obj"), WriteObj(MakeBox(Vec3(0.025, 0.025, 0.04))));
  ASSERT_EQ(Cli({"encode", "--mesh", Path("cuboid.obj"), "--pose",
                 "0.9950041652780258,0.09983341664682815,0,0,0.002,0,0",
                 "--format", "csv", "--out", Path("obs.csv")})
                .code,
            0);
  WriteFile(Path("config.json"), R"({"symmetry": "auto", "max_iters": 300})");
  auto run = [&](const std::string& threads) {
    return Cli({"recover", "--mesh", Path("cuboid.obj"), "--observed",
                Path("obs.csv"), "--init-pose", "1,0,0,0,0,0,0", "--trials",
                "20", "--seed", "7", "--config", Path("config.json"),
                "--threads", threads});
  };
  const CliRun a = run("1");
  const CliRun b = run("3");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json report = Json::parse(a.out);
  EXPECT_EQ(report["config"]["seed"], 7);
  EXPECT_EQ(report["config"]["max_iters"], 300);
  EXPECT_EQ(report["config"]["symmetry"].size(), 8u);
  EXPECT_EQ(report["trials"].size(), 20u);
  EXPECT_EQ(report["aggregate"]["monotone_fraction"], 1.0);
}

TEST_F(CliTest, BenchChecksumsMatchAcrossThreadCounts) {
  const CliRun one = Cli({"bench", "--mesh", cube_, "--poses", "3", "--threads",
                       "1", "--seed", "4"});
  ASSERT_EQ(one.code, 0) << one.err;
  setenv("DYNBPS_THREADS", "8", 1);
  const CliRun eight = Cli({"bench", "--mesh", cube_, "--poses", "3", "--seed", "4"});
  unsetenv("DYNBPS_THREADS");
  ASSERT_EQ(eight.code, 0) << eight.err;
  const Json a = Json::parse(one.out);
  const Json b = Json::parse(eight.out);
  EXPECT_EQ(a["checksum"], b["checksum"]);
  EXPECT_TRUE(a["checksums_match"].get<bool>());
  EXPECT_EQ(b["runs"][1]["threads"], 8);
  EXPECT_EQ(a["queries"], 192);
  EXPECT_GT(a["speedup"].get<double>(), 0.0);
}

TEST_F(CliTest, BenchSinglePose) {
  const CliRun run = Cli({"bench", "--mesh", cube_, "--poses", "1"});
  ASSERT_EQ(run.code, 0) << run.err;
  const Json report = Json::parse(run.out);
  EXPECT_EQ(report["runs"].size(), 4u);
  EXPECT_TRUE(report.contains("speedup"));
}

TEST_F(CliTest, GroupFormats) {
  const CliRun json = Cli({"group"});
  ASSERT_EQ(json.code, 0);
  const Json parsed = Json::parse(json.out);
  EXPECT_EQ(parsed["rotations"].size(), 24u);

  const CliRun csv = Cli({"group", "--format", "csv"});
  const auto lines = Lines(csv.out);
  ASSERT_EQ(lines.size(), 25u);
  EXPECT_EQ(lines[0], "w,x,y,z");
  const auto group = OctahedralGroup();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Pose pose = ParsePoseArgument(lines[i] + ",0,0,0");
    const Eigen::Matrix3i rounded = pose.rotation.array().round().cast<int>();
    EXPECT_EQ(rounded, group[i - 1]);
    EXPECT_LT((pose.rotation - rounded.cast<double>()).cwiseAbs().maxCoeff(),
              1e-15);
  }
}

TEST_F(CliTest, RewardTwoStepTrajectory) {
  const std::string statics = ",0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n";
  WriteFile(Path("traj.csv"), "theta,x,y,z,q0,q1,q2,q3,q4,q5,q6,q7,q8,q9,q10,q11\n"
                              "0.5" + statics + "0.3" + statics);
  const CliRun run = Cli({"reward", "--trajectory", Path("traj.csv")});
  ASSERT_EQ(run.code, 0) << run.err;
  const auto lines = Lines(run.out);
  ASSERT_EQ(lines.size(), 2u);
  const auto fields = Lines([&] {
    std::string s = lines[1];
    for (char& c : s) c = c == ',' ? '\n' : c;
    return s;
  }());
  EXPECT_NEAR(std::stod(fields[7]), 0.1, 1e-12);
}

TEST_F(CliTest, RewardCustomParams) {
  WriteFile(Path("traj.csv"), "0.3,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
                              "0.3,0.01,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  WriteFile(Path("params.json"), R"({"lambda_x": 0})");
  const CliRun run = Cli({"reward", "--trajectory", Path("traj.csv"), "--params",
                       Path("params.json")});
  ASSERT_EQ(run.code, 0) << run.err;
  const auto row = Lines(run.out)[1];
  EXPECT_EQ(row, "1,0.3,0.01,0,0,0,0,0,0");
}

TEST_F(CliTest, RewardRejectsBadTrajectories) {
  WriteFile(Path("empty.csv"), "");
  CliRun run = Cli({"reward", "--trajectory", Path("empty.csv")});
  EXPECT_EQ(run.code, cli::kInputData);
  EXPECT_NE(run.err.find("empty"), std::string::npos);

  WriteFile(Path("short.csv"), "0.3,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n0.2,0,0\n");
  run = Cli({"reward", "--trajectory", Path("short.csv")});
  EXPECT_EQ(run.code, cli::kInputData);
  EXPECT_NE(run.err.find("line 2"), std::string::npos) << run.err;

  WriteFile(Path("one.csv"), "0.3,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  EXPECT_EQ(Cli({"reward", "--trajectory", Path("one.csv")}).code,
            cli::kInputData);
  WriteFile(Path("params.json"), R"({"lambda_z": 1})");
  EXPECT_EQ(Cli({"reward", "--trajectory", Path("one.csv"), "--params",
                 Path("params.json")})
                .code,
            cli::kInputData);
}

TEST(SerializationTest, PoseRoundTrip) {
  Rng rng(1);
  const Pose pose = testing::RandomPose(0.05, rng);
  const Pose back = PoseFromJson(Json::parse(PoseToJson(pose).dump()));
  EXPECT_LT((back.rotation - pose.rotation).norm(), 1e-14);
  EXPECT_EQ(back.position, pose.position);
  EXPECT_THROW(PoseFromJson(Json::parse(R"({"q": [1, 0, 0]})")), ParseError);
  EXPECT_THROW(PoseFromJson(Json::parse(R"([1, 2])")), ParseError);
}

TEST(SerializationTest, EncodingJsonRoundTrip) {
  const IndexedMesh cube(MakeBox(Vec3::Constant(0.05)));
  const BasisPointSet bps = MakeGrid(3, 0.06);
  Pose pose;
  pose.position = Vec3(0.001, 0.002, 0.003);
  const BpsEncoding e = EncodeDynamic(bps, pose, cube);
  const EncodingFile back = ParseEncoding(
      EncodingToJson(bps, pose, e, InteriorPolicy::kZero).dump());
  EXPECT_EQ(back.points_per_axis, 3);
  EXPECT_EQ(back.half_extent, 0.06);
  EXPECT_EQ(back.encoding.vectors, e.vectors);
  EXPECT_EQ(back.encoding.magnitudes, e.magnitudes);
  EXPECT_EQ(back.encoding.interior_mask, e.interior_mask);
  ASSERT_TRUE(back.pose.has_value());
  EXPECT_EQ(back.pose->position, pose.position);

  const EncodingFile csv = ParseEncoding(EncodingToCsv(bps, e));
  EXPECT_EQ(csv.encoding.magnitudes, e.magnitudes);
  EXPECT_FALSE(csv.pose.has_value());
}

TEST(SerializationTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, -0.07, 1.0 / 3.0, 1e-300, 0.0, 12345.678}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
}

TEST(SerializationTest, InteriorPolicyNames) {
  EXPECT_EQ(ParseInteriorPolicy(InteriorPolicyName(InteriorPolicy::kSkip)),
            InteriorPolicy::kSkip);
  EXPECT_THROW(ParseInteriorPolicy("maybe"), ParseError);
}

}  // namespace
}  // namespace dynbps
