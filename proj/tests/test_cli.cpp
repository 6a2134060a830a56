#include "cvqkd/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace cvqkd;
using namespace cvqkd::cli;

namespace {

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cvqkd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("cvqkd_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(Preset, Parameters) {
  const auto a = preset("fig2a");
  EXPECT_EQ(a.V, 20.0);
  EXPECT_EQ(a.epsilon, 0.04);
  EXPECT_EQ(a.epsilon_A, 0.1);
  EXPECT_EQ(a.T_A, 0.9);
  EXPECT_EQ(a.recon, Reconciliation::Reverse);
  EXPECT_EQ(a.models.size(), 3u);
  EXPECT_EQ(a.t_grid().size(), 100u);
  EXPECT_EQ(a.output, "fig2a.csv");
  EXPECT_EQ(preset("fig2b").T_A, 1.1);
  EXPECT_EQ(preset("fig3a").recon, Reconciliation::Direct);
  EXPECT_EQ(preset("fig3b").T_A, 1.1);
  EXPECT_THROW(preset("fig4"), UsageError);
}

TEST(ModelList, Parsing) {
  EXPECT_EQ(parse_model_list("neutral,untrusted"),
            (std::vector{ModelKind::NeutralParty, ModelKind::UntrustedSource}));
  EXPECT_EQ(parse_model_list("all").size(), 3u);
  EXPECT_EQ(parse_model_list("bs, bs").size(), 1u);
  EXPECT_TRUE(parse_model_list("").empty());
  EXPECT_THROW(parse_model_list("eve"), UsageError);
}

TEST(RunConfigValidation, Constraints) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.models.clear();
  EXPECT_THROW(c.validate(), UsageError);
  c = RunConfig{};
  c.t_min = 0.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = RunConfig{};
  c.beta = 1.5;
  EXPECT_THROW(c.validate(), UsageError);
  c = RunConfig{};
  c.T_A = 1.2;  // eps_A = 0.1 below the gain-implied minimum
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(ConfigText, OverridesAndErrors) {
  RunConfig c;
  apply_config_text(c, "# comment\nV = 30\n eps=0.05 # trailing\nmodel = neutral\nrecon = dr\n"
                       "clamp-zero = true\nformat = both\n");
  EXPECT_EQ(c.V, 30.0);
  EXPECT_EQ(c.epsilon, 0.05);
  EXPECT_EQ(c.models, std::vector{ModelKind::NeutralParty});
  EXPECT_EQ(c.recon, Reconciliation::Direct);
  EXPECT_TRUE(c.clamp_zero);
  EXPECT_EQ(c.format, OutputFormat::Both);
  EXPECT_THROW(apply_config_text(c, "colour = red\n"), UsageError);
  EXPECT_THROW(apply_config_text(c, "V = twenty\n"), UsageError);
  EXPECT_THROW(apply_config_text(c, "V\n"), UsageError);
}

TEST(CsvFormat, HeaderDigitsAndClamp) {
  KeyRatePoint p;
  p.T = 0.5;
  p.i_ab = 2.3479233034203068;
  p.holevo = 2.1034105078730799;
  p.key_rate = -0.25;
  const auto raw = format_csv({p}, false);
  EXPECT_EQ(raw,
            "model,recon,T,i_ab,holevo,key_rate,feasible\n"
            "neutral,reverse,0.5,2.34792330342,2.10341050787,-0.25,true\n");
  EXPECT_NE(format_csv({p}, true).find(",0,true\n"), std::string::npos);
  EXPECT_EQ(raw.find('\r'), std::string::npos);
}

TEST(SvgFormat, Viewport) {
  const auto c = preset("fig2a");
  const auto svg = format_svg(sweep(c.models, c.recon, c.source(), c.epsilon, c.t_grid()), c);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("untrusted"), std::string::npos);
}

TEST(Point, NeutralDefault) {
  const auto r = invoke({"point", "--T", "0.5"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            "model=neutral recon=reverse T=0.5 i_ab=2.34792330342 holevo=2.10341050787 "
            "key_rate=0.244512795547 beta=1 feasible=true\n");
}

TEST(Point, PerfectChannel) {
  const auto r = invoke({"point", "--T", "1", "--TA", "1", "--epsA", "0", "--eps", "0"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("key_rate=3.39231742"), std::string::npos) << r.out;
}

TEST(Point, UsageErrors) {
  EXPECT_EQ(invoke({"point"}).code, kExitUsage);
  EXPECT_EQ(invoke({"point", "--T", "1.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"point", "--T", "0.5", "--model", "bs", "--TA", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"point", "--T", "0.5", "--recon", "sideways"}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST(Sweep, StdoutCsv) {
  const auto r = invoke({"sweep", "--preset", "fig2a", "--t-min", "0.25", "--t-max", "0.75",
                         "--t-step", "0.25", "--out", "-"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 10);
  EXPECT_EQ(r.out.rfind("model,recon,T,i_ab,holevo,key_rate,feasible\n", 0), 0u);
}

TEST(Sweep, EmptyModelListIsUsageError) {
  EXPECT_EQ(invoke({"sweep", "--model", "", "--out", "-"}).code, kExitUsage);
}

TEST(Sweep, FilesDeterministic) {
  TempDir dir;
  const auto a = dir.path() / "a.csv";
  const auto b = dir.path() / "b.csv";
  ASSERT_EQ(invoke({"sweep", "--preset", "fig2a", "--out", a.string()}).code, kExitOk);
  ASSERT_EQ(invoke({"sweep", "--preset", "fig2a", "--out", b.string(), "--threads", "3"}).code,
            kExitOk);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 301);
}

TEST(Sweep, BothFormats) {
  TempDir dir;
  const auto base = dir.path() / "fig";
  const auto r = invoke({"sweep", "--preset", "fig3a", "--format", "both", "--out", base.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "fig.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "fig.svg"));
}

TEST(Sweep, AmplificationPresetWarnsAndMarksRows) {
  const auto r = invoke({"sweep", "--preset", "fig2b", "--t-min", "0.5", "--t-max", "0.5",
                         "--out", "-"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("beamsplitter,reverse,0.5,nan,nan,nan,false"), std::string::npos) << r.out;
}

TEST(Sweep, ConfigFileThenFlags) {
  TempDir dir;
  const auto cfg = dir.path() / "run.cfg";
  std::ofstream(cfg) << "model = untrusted\nt-min = 0.5\nt-max = 0.5\nV = 10\n";
  const auto r = invoke({"sweep", "--config", cfg.string(), "--V", "20", "--out", "-"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto direct = invoke({"sweep", "--model", "untrusted", "--t-min", "0.5", "--t-max", "0.5",
                              "--out", "-"});
  EXPECT_EQ(r.out, direct.out);
  EXPECT_EQ(invoke({"sweep", "--config", (dir.path() / "missing.cfg").string()}).code, kExitUsage);
}

TEST(Verify, PassesAtAttenuation) {
  const auto r = invoke({"verify", "--preset", "fig2a", "--t-min", "0.05", "--t-step", "0.05"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("summary PASS"), std::string::npos);
}

TEST(Verify, CorruptedToleranceFails) {
  const auto r = invoke({"verify", "--preset", "fig2a", "--t-min", "0.5", "--t-max", "0.5",
                         "--lemma1-tol", "-1"});
  EXPECT_EQ(r.code, kExitVerifyFailed);
  EXPECT_NE(r.out.find("summary FAIL"), std::string::npos);
}

TEST(Verify, AmplificationSkipsUndefinedPoints) {
  const auto r = invoke({"verify", "--preset", "fig2b", "--t-min", "0.5", "--t-max", "0.5"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find(" SKIP "), std::string::npos);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}
