#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "../tools/commands.hpp"
#include "hbs/io.hpp"
#include "hbs/reconstruct.hpp"
#include "support.hpp"

using namespace hbs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

double value_after(const std::string& text, const std::string& key) {
  const auto p = text.find(key + " ");
  if (p == std::string::npos) return std::nan("");
  return std::stod(text.substr(p + key.size() + 1));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = test::temp_dir("cli");
    write_contour(dir + "/circle.txt", test::circle(300));
    write_contour(dir + "/blob.txt", test::blob());
  }
  std::string dir;
};

}  // namespace

TEST_F(Cli, ComputeCircle) {
  const Outcome r = run({"compute", dir + "/circle.txt", "-o", dir + "/circle.sig", "--grid-m", "30"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(value_after(r.out, "sup_norm"), 0.05);
  EXPECT_EQ(parse_signature(read_text(dir + "/circle.sig")).field.grid->resolution, 30);
}

TEST_F(Cli, MalformedContourIsAParseError) {
  write_text(dir + "/bad.txt", "0 0\n1 0\n1 x\n0 1\n");
  const Outcome r = run({"compute", dir + "/bad.txt", "-o", dir + "/bad.sig"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.txt:3"), std::string::npos) << r.err;
  EXPECT_EQ(run({"compute", dir + "/missing.txt", "-o", dir + "/x.sig"}).code, 2);
  EXPECT_EQ(run({"compute", "--no-such-flag"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST_F(Cli, MaskInput) {
  std::string pgm = "P2\n40 40\n1\n";
  for (int r = 0; r < 40; ++r)
    for (int c = 0; c < 40; ++c) pgm += (std::hypot(r - 19.5, (c - 19.5) * 0.7) < 14.0) ? "1 " : "0 ";
  write_text(dir + "/disk.pgm", pgm);
  const Outcome r = run({"compute", dir + "/disk.pgm", "-o", dir + "/disk.sig", "--grid-m", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir + "/disk.sig"));
}

TEST_F(Cli, DistanceAndGridMismatch) {
  ASSERT_EQ(run({"compute", dir + "/blob.txt", "-o", dir + "/a.sig", "--grid-m", "30"}).code, 0);
  ASSERT_EQ(run({"compute", dir + "/blob.txt", "-o", dir + "/b.sig", "--grid-m", "20"}).code, 0);
  const Outcome same = run({"distance", dir + "/a.sig", dir + "/a.sig"});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(same.out, "0\n");
  EXPECT_EQ(run({"distance", dir + "/a.sig", dir + "/b.sig"}).code, 3);
  const Outcome welding = run({"distance", dir + "/blob.txt", dir + "/blob.txt", "--metric", "welding"});
  ASSERT_EQ(welding.code, 0) << welding.err;
  EXPECT_EQ(welding.out, "0\n");
  EXPECT_EQ(run({"distance", dir + "/a.sig", dir + "/a.sig", "--metric", "cosine"}).code, 2);
}

TEST_F(Cli, ReconstructAndSolverFailure) {
  ASSERT_EQ(run({"compute", dir + "/circle.txt", "-o", dir + "/c.sig", "--grid-m", "30"}).code, 0);
  const Outcome r = run({"reconstruct", dir + "/c.sig", "-o", dir + "/c.txt", "--recon-n", "300", "--svg", dir + "/c.svg"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_after(r.out, "points"), 300.0);
  const Contour c = read_contour(dir + "/c.txt");
  EXPECT_LE(aligned_shape_distance(test::circle(1000), c), 0.05);
  EXPECT_TRUE(fs::exists(dir + "/c.svg"));
  EXPECT_EQ(run({"reconstruct", dir + "/c.sig", "-o", dir + "/c2.txt", "--grid-m", "40"}).code, 3);

  HbsField bad = read_signature(dir + "/c.sig");
  bad.field.values[0] = 1.2;
  write_signature(dir + "/bad.sig", bad);
  const Outcome fail = run({"reconstruct", dir + "/bad.sig", "-o", dir + "/bad.txt"});
  EXPECT_EQ(fail.code, 4);
  EXPECT_NE(fail.err.find("reconstruct"), std::string::npos) << fail.err;
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  write_text(dir + "/run.cfg", "grid_m = 20\nn = 150\n");
  ASSERT_EQ(run({"compute", dir + "/blob.txt", "-o", dir + "/cfg.sig", "--config", dir + "/run.cfg"}).code, 0);
  EXPECT_EQ(read_signature(dir + "/cfg.sig").field.grid->resolution, 20);
  ASSERT_EQ(run({"compute", dir + "/blob.txt", "-o", dir + "/flag.sig", "--config", dir + "/run.cfg", "--grid-m", "25"}).code, 0);
  EXPECT_EQ(read_signature(dir + "/flag.sig").field.grid->resolution, 25);
  write_text(dir + "/broken.cfg", "grid_m = many\n");
  EXPECT_EQ(run({"compute", dir + "/blob.txt", "-o", dir + "/x.sig", "--config", dir + "/broken.cfg"}).code, 2);
  EXPECT_EQ(run({"compute", dir + "/blob.txt", "-o", dir + "/x.sig", "--grid-m", "1"}).code, 2);
}

TEST_F(Cli, ClassifyAndDeterminism) {
  const std::string data = dir + "/data";
  const auto specs = default_classes();
  const auto shapes = synth_dataset({specs[0], specs[2]}, 2, 5);
  for (const auto& s : shapes) {
    fs::create_directories(data + "/" + s.label.substr(0, s.label.find('/')));
    write_contour(data + "/" + s.label + ".txt", s.contour);
  }
  const std::vector<std::string> base{"classify", data, "--grid-m", "20", "--seed", "3"};
  auto with_out = [&](const std::string& out) {
    auto a = base;
    a.insert(a.end(), {"--out-dir", out});
    return a;
  };
  const Outcome first = run(with_out(dir + "/out1"));
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_GE(value_after(first.out, "accuracy"), 0.0);
  ASSERT_EQ(run(with_out(dir + "/out2")).code, 0);
  for (const char* f : {"distance.csv", "embedding.csv", "confusion.csv", "labels.csv"})
    EXPECT_EQ(read_text(dir + "/out1/" + f), read_text(dir + "/out2/" + f)) << f;

  auto too_many = with_out(dir + "/out3");
  too_many.insert(too_many.end(), {"--k", "3"});
  EXPECT_EQ(run(too_many).code, 5);
}

TEST(CliExitCodes, Mapping) {
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::ParseError, "")), 2);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::IoError, "")), 2);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::GridMismatch, "")), 3);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::NonConvergence, "")), 4);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::NonAdmissible, "")), 4);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::KTooLarge, "")), 5);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::MixedKinds, "")), 5);
  EXPECT_EQ(cli::exit_code_for(Error(ErrorCode::DomainViolation, "", "config")), 2);
}
