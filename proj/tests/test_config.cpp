#include <gtest/gtest.h>

#include "hbs/config.hpp"
#include "hbs/error.hpp"
#include "hbs/io.hpp"
#include "support.hpp"

using namespace hbs;

TEST(Config, Defaults) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.samples, 200u);
  EXPECT_EQ(cfg.grid_resolution, 100);
  EXPECT_EQ(cfg.centering_eps, 1e-5);
  EXPECT_EQ(cfg.recon_samples, 1000u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, AppliesEveryKey) {
  RunConfig cfg;
  apply_config_text(cfg,
                    "# overrides\n"
                    "n = 120\n grid_m=40\neps = 1e-7  # tighter\nrecon_n = 300\nwelding_n = 64\n"
                    "seed = 99\njobs = 2\nbeltrami_tol = 0.1\nweld_tol = 0.01\n\n");
  EXPECT_EQ(cfg.samples, 120u);
  EXPECT_EQ(cfg.grid_resolution, 40);
  EXPECT_EQ(cfg.centering_eps, 1e-7);
  EXPECT_EQ(cfg.recon_samples, 300u);
  EXPECT_EQ(cfg.welding_samples, 64u);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.jobs, 2u);
  EXPECT_EQ(cfg.beltrami_tolerance, 0.1);
  EXPECT_EQ(cfg.weld_tolerance, 0.01);
}

TEST(Config, ErrorsNameTheLine) {
  RunConfig cfg;
  for (const char* text : {"n = 10\ncolour = red\n", "n = 10\ngrid_m = ten\n", "n = 10\njust words\n"}) {
    try {
      apply_config_text(cfg, text, "run.cfg");
      FAIL() << "expected ParseError for " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      EXPECT_NE(std::string(e.what()).find("run.cfg:2"), std::string::npos) << e.what();
    }
  }
}

TEST(Config, ValidateRanges) {
  const auto rejects = [](auto mutate) {
    RunConfig cfg;
    mutate(cfg);
    EXPECT_THROW(cfg.validate(), Error);
  };
  rejects([](RunConfig& c) { c.samples = 2; });
  rejects([](RunConfig& c) { c.grid_resolution = 1; });
  rejects([](RunConfig& c) { c.centering_eps = 0.0; });
  rejects([](RunConfig& c) { c.recon_samples = 99; });
}

TEST(Config, ReadsFiles) {
  const std::string dir = test::temp_dir("config");
  write_text(dir + "/a.cfg", "grid_m = 30\n");
  RunConfig cfg;
  apply_config_file(cfg, dir + "/a.cfg");
  EXPECT_EQ(cfg.grid_resolution, 30);
  try {
    apply_config_file(cfg, dir + "/missing.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}
