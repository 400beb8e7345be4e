// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "inml/wire.h"

namespace inml::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("inml_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  void write(const std::string &name, const std::string &content) const {
    std::ofstream(path(name), std::ios::binary) << content;
  }

  std::string read(const std::string &name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "inml");
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  // Only regular files the test itself created, plus outputs.
  std::vector<std::string> listing() const {
    std::vector<std::string> names;
    for (const auto &e : fs::directory_iterator(dir_)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

constexpr const char *kDataset =
    "x0,x1,y0\n"
    "0.1,0.2,0.35\n"
    "-0.4,0.5,-0.2\n"
    "0.9,-0.3,0.6\n"
    "0.0,0.7,0.45\n"
    "-0.8,-0.6,-0.95\n";

TEST_F(CliTest, EndToEndWorkflow) {
  write("d.csv", kDataset);
  ASSERT_EQ(run({"fit", "--data", path("d.csv"), "--out", path("m.model"), "--ridge", "0.001"}), kExitOk)
      << err_.str();
  ASSERT_EQ(run({"quantize", "--model", path("m.model"), "--scale", "16", "--out", path("m.tbl")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(read("m.tbl").rfind("M 1 16 1 2 1 linear\n", 0), 0u) << read("m.tbl");
  ASSERT_EQ(run({"--seed", "7", "gen-traffic", "--model", path("m.model"), "--count", "50",
                 "--payload", "16", "--out", path("traffic.inml")}),
            kExitOk)
      << err_.str();
  ASSERT_EQ(run({"run", "--tables", path("m.tbl"), "--in", path("traffic.inml"), "--out",
                 path("results.inml"), "--stats", path("stats.csv"), "--trace"}),
            kExitOk)
      << err_.str();
  const std::string stats = read("stats.csv");
  EXPECT_EQ(stats.rfind("packets_in,packets_out,", 0), 0u);
  EXPECT_NE(stats.find("\n50,50,0,0,0,0,"), std::string::npos) << stats;
  std::istringstream results(read("results.inml"));
  const auto frames = read_frames(results);
  ASSERT_EQ(frames.size(), 50u);
  EXPECT_TRUE(std::holds_alternative<InferenceResult>(decode_header(frames[0]).header));

  ASSERT_EQ(run({"run", "--tables", path("m.tbl"), "--in", path("traffic.inml"), "--out",
                 path("results2.inml")}),
            kExitOk);
  EXPECT_NE(out_.str().find("packets_out=50\n"), std::string::npos) << out_.str();

  ASSERT_EQ(run({"trace", "--tables", path("m.tbl"), "--in", path("traffic.inml"), "--index", "3"}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(out_.str().rfind("TABLE_LOOKUP\n", 0), 0u) << out_.str();
  EXPECT_NE(out_.str().find("TABLE_LOOKUP=4"), std::string::npos) << out_.str();

  ASSERT_EQ(run({"emit-tables", "--tables", path("m.tbl")}), kExitOk);
  EXPECT_EQ(out_.str(), read("m.tbl"));

  ASSERT_EQ(run({"eval", "mse-vs-bits", "--model", path("m.model"), "--data", path("d.csv"),
                 "--bits", "4,8,12,16", "--out", path("mse.csv")}),
            kExitOk)
      << err_.str();
  const std::string mse = read("mse.csv");
  EXPECT_EQ(std::count(mse.begin(), mse.end(), '\n'), 5) << mse;
}

TEST_F(CliTest, EvalDefaultsAreDeterministic) {
  for (const std::string name : {"a", "b"}) {
    ASSERT_EQ(run({"eval", "mse-vs-bits", "--out", path(name + "_bits.csv")}), kExitOk) << err_.str();
    ASSERT_EQ(run({"eval", "mse-vs-order", "--out", path(name + "_order.csv")}), kExitOk) << err_.str();
    ASSERT_EQ(run({"eval", "throughput", "--out", path(name + "_tp.csv")}), kExitOk) << err_.str();
  }
  EXPECT_EQ(read("a_bits.csv"), read("b_bits.csv"));
  EXPECT_EQ(read("a_order.csv"), read("b_order.csv"));
  EXPECT_EQ(read("a_tp.csv"), read("b_tp.csv"));
  EXPECT_EQ(read("a_order.csv").rfind("taylor_order,normalized_mse,n,seed\n1,", 0), 0u);
  const std::string tp = read("a_tp.csv");
  EXPECT_EQ(std::count(tp.begin(), tp.end(), '\n'), 10) << tp;
}

TEST_F(CliTest, GenTrafficSeedControlsBytes) {
  write("d.csv", kDataset);
  ASSERT_EQ(run({"fit", "--data", path("d.csv"), "--out", path("m.model")}), kExitOk);
  ASSERT_EQ(run({"--seed", "1", "gen-traffic", "--model", path("m.model"), "--out", path("a.inml")}), kExitOk);
  ASSERT_EQ(run({"--seed", "1", "gen-traffic", "--model", path("m.model"), "--out", path("b.inml")}), kExitOk);
  ASSERT_EQ(run({"--seed", "2", "gen-traffic", "--model", path("m.model"), "--out", path("c.inml")}), kExitOk);
  EXPECT_EQ(read("a.inml"), read("b.inml"));
  EXPECT_NE(read("a.inml"), read("c.inml"));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"quantize", "--out", path("x.tbl")}), kExitUsage);
  EXPECT_EQ(run({"quantize", "--model", path("missing.model"), "--out", path("x.tbl")}), kExitUsage);
  write("m.model", "model 1 scale=16\nlayer 0 in=1 out=1 act=linear\nw 0 0 1\nb 0 0\n");
  EXPECT_EQ(run({"quantize", "--model", path("m.model"), "--out", path("nodir/x.tbl")}), kExitUsage);
  EXPECT_EQ(run({"--scale", "40", "quantize", "--model", path("m.model"), "--out", path("x.tbl")}),
            kExitUsage);
  EXPECT_EQ(run({"eval", "mse-vs-order", "--orders", "2", "--out", path("o.csv")}), kExitUsage);
  EXPECT_EQ(run({"eval"}), kExitUsage);
  EXPECT_NE(err_.str().find("mse-vs-bits"), std::string::npos) << err_.str();
  EXPECT_EQ(listing(), std::vector<std::string>{"m.model"});
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("gen-traffic"), std::string::npos);
  EXPECT_EQ(run({"run", "--help"}), kExitOk);
  EXPECT_NE(out_.str().find("--stats"), std::string::npos);
}

TEST_F(CliTest, DataErrorsCarryFileAndLine) {
  write("bad.model", "model 1 scale=16\nlayer 0 in=1 out=1 act=tanh\n");
  EXPECT_EQ(run({"quantize", "--model", path("bad.model"), "--out", path("x.tbl")}), kExitData);
  EXPECT_NE(err_.str().find("bad.model:2: unknown-activation"), std::string::npos) << err_.str();

  write("huge.model", "model 1 scale=16\nlayer 0 in=1 out=1 act=linear\nw 0 0 40000\nb 0 0\n");
  EXPECT_EQ(run({"quantize", "--model", path("huge.model"), "--out", path("x.tbl")}), kExitData);
  EXPECT_NE(err_.str().find("weight-saturation"), std::string::npos) << err_.str();

  write("bad.inml", "XXXX\x01");
  write("t.tbl", "M 1 16 1 1 1 linear\nW 1 0 0 0 65536\nB 1 0 0 0\n");
  EXPECT_EQ(run({"run", "--tables", path("t.tbl"), "--in", path("bad.inml"), "--out", path("r.inml"),
                 "--stats", path("s.txt")}),
            kExitData);
  EXPECT_NE(err_.str().find("bad-magic"), std::string::npos) << err_.str();

  write("incomplete.tbl", "W 1 0 0 0 65536\n");
  EXPECT_EQ(run({"trace", "--tables", path("incomplete.tbl"), "--in", path("bad.inml")}), kExitData);

  write("d.csv", "x0,x1,y0\n1,2,1\n2,4,2\n3,6,3\n");
  EXPECT_EQ(run({"fit", "--data", path("d.csv"), "--out", path("m.model")}), kExitData);
  EXPECT_NE(err_.str().find("ill-conditioned"), std::string::npos) << err_.str();

  // No output or temporary file was left behind by any failure.
  EXPECT_EQ(listing(), (std::vector<std::string>{"bad.inml", "bad.model", "d.csv", "huge.model",
                                                 "incomplete.tbl", "t.tbl"}));
}

TEST_F(CliTest, TraceIndexOutOfRange) {
  write("t.tbl", "M 1 16 1 1 1 linear\nW 1 0 0 0 65536\nB 1 0 0 0\n");
  std::ostringstream frames;
  write_frames(frames, {});
  write("empty.inml", frames.str());
  EXPECT_EQ(run({"trace", "--tables", path("t.tbl"), "--in", path("empty.inml")}), kExitData);
  EXPECT_NE(err_.str().find("out of range"), std::string::npos);
}

TEST_F(CliTest, EmitTablesMergesLaterWins) {
  write("a.tbl", "M 1 16 1 1 1 linear\nW 1 0 0 0 65536\nB 1 0 0 0\n");
  write("b.tbl", "B 1 0 0 7\nW 1 0 0 0 1\nM 1 8 1 1 1 relu\n");
  write("c.tbl", "M 2 16 1 1 1 linear\nW 2 0 0 0 3\nB 2 0 0 4\n");
  ASSERT_EQ(run({"emit-tables", "--tables", path("a.tbl"), path("c.tbl"), path("b.tbl"), "--out",
                 path("all.tbl")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(read("all.tbl"),
            "M 1 8 1 1 1 relu\nW 1 0 0 0 1\nB 1 0 0 7\n"
            "M 2 16 1 1 1 linear\nW 2 0 0 0 3\nB 2 0 0 4\n");
}

}  // namespace
}  // namespace inml::cli
