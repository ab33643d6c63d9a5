#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SEMCOM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("semcom_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, HelpSucceeds) { EXPECT_EQ(run("--help"), 0); }

TEST(Cli, UnknownOptionIsConfigError) { EXPECT_EQ(run("--bogus"), 2); }

TEST(Cli, MissingConfigFileIsConfigError) { EXPECT_EQ(run("--config /nonexistent.json exp pareto"), 2); }

TEST(Cli, InvalidConfigValueIsConfigError) {
  const auto dir = scratch("badcfg");
  std::ofstream(dir / "cfg.json") << R"({"encoder": {"rho": 3}})";
  EXPECT_EQ(run("--config " + (dir / "cfg.json").string() + " exp critic-sweep --out-dir " + dir.string()), 2);
}

TEST(Cli, DivergentTrainingIsNumericalError) {
  const auto dir = scratch("diverge");
  EXPECT_EQ(run("codec train --epochs 2 --lr 1e308 --out " + (dir / "c.json").string()), 3);
}

TEST(Cli, TaxonomyExport) {
  const auto dir = scratch("taxonomy");
  ASSERT_EQ(run("taxonomy export --out " + (dir / "tax.json").string()), 0);
  const auto j = nlohmann::json::parse(slurp(dir / "tax.json"));
  EXPECT_EQ(j["labels"].size(), 80u);
  EXPECT_EQ(j["ood"].size(), 10u);
}

TEST(Cli, DatasetThenEncode) {
  const auto dir = scratch("encode");
  const auto scenes = (dir / "scenes.json").string();
  ASSERT_EQ(run("--seed 5 dataset gen --scenes 20 --ood-fraction 0.2 --out " + scenes), 0);
  ASSERT_EQ(run("--seed 5 encode --scenes " + scenes + " --out " + (dir / "sem.json").string()), 0);
  const auto in = nlohmann::json::parse(slurp(scenes));
  const auto out = nlohmann::json::parse(slurp(dir / "sem.json"));
  ASSERT_EQ(out["scenes"].size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(out["scenes"][i]["S"].size(), in["scenes"][i]["objects"].size());
    EXPECT_EQ(out["scenes"][i]["provenance"].size(), in["scenes"][i]["objects"].size());
  }
}

TEST(Cli, EmbedInspect) {
  EXPECT_EQ(run("embed inspect --word person"), 0);
  EXPECT_EQ(run("embed inspect --word unicorn"), 2);
  const auto dir = scratch("embed");
  std::ofstream(dir / "v.txt") << "person 1 0\ndog 0 1\n";
  EXPECT_EQ(run("embed inspect --provider file --path " + (dir / "v.txt").string() + " --word dog"), 0);
}

TEST(Cli, CriticSweepWritesCsv) {
  const auto dir = scratch("critic");
  ASSERT_EQ(run("--seed 3 critic sweep --q 0.78 --fa 0 --fr 0 --k-max 4 --trials 2000 --out " +
                (dir / "critic.csv").string()),
            0);
  const auto text = slurp(dir / "critic.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "k,mc_accuracy,analytic_accuracy,ci95_half_width");
}

TEST(Cli, CodecTrainThenChannelSweep) {
  const auto dir = scratch("codec");
  const auto codec = (dir / "codec.json").string();
  ASSERT_EQ(run("--seed 7 codec train --snr 10 --d 20 --epochs 30 --out " + codec), 0);
  ASSERT_EQ(run("--out-dir " + dir.string() + " channel sweep --codec " + codec +
                " --snr-from -10 --snr-to 0 --step 5 --tokens 500"),
            0);
  EXPECT_TRUE(fs::exists(dir / "channel_sweep.csv"));
}

TEST(Cli, ParetoRunsAreByteIdentical) {
  const auto a = scratch("pareto_a"), b = scratch("pareto_b");
  ASSERT_EQ(run("exp pareto --quick --seed 42 --out-dir " + a.string()), 0);
  ASSERT_EQ(run("exp pareto --quick --seed 42 --out-dir " + b.string()), 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name.extension() != ".csv") continue;
    ASSERT_TRUE(fs::exists(b / name)) << name;
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
    ++compared;
  }
  EXPECT_GE(compared, 4);
  EXPECT_TRUE(fs::exists(a / "pareto.csv"));
  EXPECT_TRUE(fs::exists(a / "frontier.csv"));
  EXPECT_TRUE(fs::exists(a / "optimum.json"));
  ASSERT_EQ(run("plot " + (a / "pareto.csv").string()), 0);
  EXPECT_TRUE(fs::exists(a / "pareto.svg"));
}
