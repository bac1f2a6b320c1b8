#ifdef LEVELBLEND_HAVE_CLI

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "levelblend/io.hpp"

namespace levelblend {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("levelblend-cli-") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string p(const std::string& rel) const { return (dir_ / rel).string(); }
  std::string data() const { return fixture::data_dir().string(); }

  fs::path dir_;
};

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return files;
}

TEST_F(CliTest, MissingSubcommandIsAUsageError) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"train", "--latent", "7", "--dry-run"}).code, 2);
}

TEST_F(CliTest, DryRunEchoesPresets) {
  const CliResult lin = run({"train", "--preset", "linear-paper", "--dry-run"});
  ASSERT_EQ(lin.code, 0) << lin.err;
  EXPECT_NE(lin.out.find("epochs: 5000\n"), std::string::npos);
  EXPECT_NE(lin.out.find("learning rate: 0.001\n"), std::string::npos);
  const CliResult gru = run({"train", "--preset", "gru-paper", "--dry-run", "--latent", "64"});
  ASSERT_EQ(gru.code, 0) << gru.err;
  EXPECT_NE(gru.out.find("epochs: 50\n"), std::string::npos);
  EXPECT_NE(gru.out.find("learning rate: 1e-05\n"), std::string::npos);
  EXPECT_NE(gru.out.find("latent: 64\n"), std::string::npos);
  EXPECT_EQ(run({"train", "--preset", "huge", "--dry-run"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, MissingInputsAreErrors) {
  const CliResult r = run({"generate", "--checkpoint", p("nope.lvb"), "--out", p("g")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, IngestTrainGenerateIsDeterministic) {
  for (const std::string run_id : {"a", "b"}) {
    const CliResult ingest = run({"ingest", "--data", data(), "--game", "CV", "--game", "NG", "--seed", "3", "--out",
                            p(run_id + "/corpus")});
    ASSERT_EQ(ingest.code, 0) << ingest.err;
    EXPECT_NE(ingest.out.find("CV"), std::string::npos);
    const CliResult train = run({"train", "--corpus", p(run_id + "/corpus"), "--preset", "desk", "--model", "linear",
                           "--epochs", "2", "--seed", "4", "--out", p(run_id + "/run")});
    ASSERT_EQ(train.code, 0) << train.err;
    const CliResult gen = run({"generate", "--checkpoint", p(run_id + "/run/checkpoint.lvb"), "-n", "3", "--seed", "5",
                         "--out", p(run_id + "/gen")});
    ASSERT_EQ(gen.code, 0) << gen.err;
  }
  const auto a = snapshot(dir_ / "a");
  const auto b = snapshot(dir_ / "b");
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [name, content] : a) {
    if (name.ends_with("run.json")) continue;  // records the output paths
    ASSERT_TRUE(b.contains(name)) << name;
    EXPECT_EQ(content, b.at(name)) << name;
  }
  EXPECT_TRUE(a.contains("run/checkpoint.lvb"));
  EXPECT_TRUE(a.contains("run/loss.csv"));
  EXPECT_TRUE(a.contains("gen/segments/00000.txt"));
  EXPECT_TRUE(a.contains("gen/manifest.csv"));

  const CliResult mismatch = run({"generate", "--checkpoint", p("a/run/checkpoint.lvb"), "--model", "gru", "-n", "1",
                            "--out", p("c")});
  EXPECT_EQ(mismatch.code, 1);
  EXPECT_NE(mismatch.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, RenderWritesAsciiAndPpm) {
  Segment s;
  s.grid.at(14, 0) = 'X';
  write_file(p("s.txt"), to_text(s.grid));
  const CliResult r = run({"render", p("s.txt"), "--scale", "1", "--out", p("png")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("X-------------------------------"), std::string::npos);
  bool wrote_ppm = false;
  for (const auto& e : fs::recursive_directory_iterator(dir_ / "png")) wrote_ppm |= e.path().extension() == ".ppm";
  EXPECT_TRUE(wrote_ppm);
}

}  // namespace
}  // namespace levelblend

#endif
