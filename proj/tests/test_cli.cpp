#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavid/cli.hpp"

namespace fs = std::filesystem;
using wavid::cli::run;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path()
            / ("wavid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    int call(std::vector<std::string> args)
    {
        out.str("");
        err.str("");
        return run(args, out, err);
    }

    static std::string slurp(const std::string& p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    void write(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

    fs::path dir;
    std::ostringstream out, err;
};

} // namespace

TEST_F(Cli, HelpExitsZero)
{
    EXPECT_EQ(call({"--help"}), 0);
    EXPECT_NE(out.str().find("identify"), std::string::npos);
    EXPECT_EQ(call({"gen", "--help"}), 0);
}

TEST_F(Cli, NoSubcommandOrUnknownFlagIsUsageError)
{
    EXPECT_EQ(call({}), 1);
    EXPECT_EQ(call({"gen", "--bogus", "1"}), 1);
    EXPECT_EQ(call({"frobnicate"}), 1);
}

TEST_F(Cli, GenIsDeterministic)
{
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "256", "--dt", "0.001", "--seed", "9", "-o", path("a.csv")}), 0);
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "256", "--dt", "0.001", "--seed", "9", "-o", path("b.csv")}), 0);
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "256", "--dt", "0.001", "--seed", "10", "-o", path("c.csv")}), 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
    EXPECT_EQ(slurp(path("a.csv")).rfind("t,value\n", 0), 0u);
}

TEST_F(Cli, ErrorOfIdenticalFilesIsZero)
{
    ASSERT_EQ(call({"gen", "--dist", "uniform:-1,1", "--n", "100", "--dt", "0.01", "--seed", "1", "-o", path("a.csv")}), 0);
    ASSERT_EQ(call({"error", path("a.csv"), path("a.csv")}), 0);
    EXPECT_NE(out.str().find("epsilon_rel=0\n"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("epsilon_rms=0\n"), std::string::npos) << out.str();
}

TEST_F(Cli, ErrorAgainstZeroReferenceIsUndefined)
{
    write(path("z.csv"), "t,value\n0,0\n1,0\n");
    write(path("o.csv"), "t,value\n0,1\n1,1\n");
    ASSERT_EQ(call({"error", path("z.csv"), path("o.csv")}), 0);
    EXPECT_NE(out.str().find("epsilon_rel=undefined"), std::string::npos) << out.str();
}

TEST_F(Cli, MalformedCsvFailsWithoutOutput)
{
    write(path("bad.csv"), "t,value\n0,1\n1,oops\n2,3\n");
    EXPECT_EQ(call({"sim", path("bad.csv"), "--model", "fo:T=10", "-o", path("y.csv")}), 1);
    EXPECT_FALSE(fs::exists(path("y.csv")));
    EXPECT_FALSE(err.str().empty());
    EXPECT_EQ(call({"cwt", path("missing.csv"), "-o", path("w.wcs")}), 1);
    EXPECT_FALSE(fs::exists(path("w.wcs")));
}

TEST_F(Cli, NumericalFailureExitsTwo)
{
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "64", "--dt", "0.01", "--seed", "2", "-o", path("x.csv")}), 0);
    EXPECT_EQ(call({"sim", path("x.csv"), "--model", "fo:T=0.015", "-o", path("y.csv")}), 2);
    EXPECT_FALSE(fs::exists(path("y.csv")));
    EXPECT_EQ(call({"cwt", path("x.csv"), "--scales", "0.01:0.1:8:log", "-o", path("w.wcs")}), 2);
    EXPECT_FALSE(fs::exists(path("w.wcs")));
}

TEST_F(Cli, BadParametersAreUsageErrors)
{
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "64", "--dt", "0.01", "--seed", "2", "-o", path("x.csv")}), 0);
    EXPECT_EQ(call({"sim", path("x.csv"), "--model", "fo:T=-1", "-o", path("y.csv")}), 1);
    EXPECT_EQ(call({"sim", path("x.csv"), "--model", "nonsense", "-o", path("y.csv")}), 1);
    EXPECT_EQ(call({"cwt", path("x.csv"), "--wavelet", "haar", "-o", path("w.wcs")}), 1);
    EXPECT_EQ(call({"gen", "--dist", "gauss:0", "--n", "8", "-o", path("g.csv")}), 1);
}

TEST_F(Cli, ConfigFileFillsMissingFlagsOnly)
{
    write(path("gen.cfg"), "# generator settings\ndist = \"uniform:0,1\"\nn = 50\ndt = 0.5\nseed = 4\n");
    ASSERT_EQ(call({"gen", "--config", path("gen.cfg"), "-o", path("a.csv")}), 0);
    ASSERT_EQ(call({"gen", "--dist", "uniform:0,1", "--n", "50", "--dt", "0.5", "--seed", "4", "-o", path("b.csv")}), 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    // command-line flags win over the file
    ASSERT_EQ(call({"gen", "--config", path("gen.cfg"), "--seed", "5", "-o", path("c.csv")}), 0);
    ASSERT_EQ(call({"gen", "--dist", "uniform:0,1", "--n", "50", "--dt", "0.5", "--seed", "5", "-o", path("d.csv")}), 0);
    EXPECT_EQ(slurp(path("c.csv")), slurp(path("d.csv")));
    EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(Cli, ConfigFileWithUnknownKeyIsRejected)
{
    write(path("bad.cfg"), "n = 10\ncolour = blue\n");
    EXPECT_EQ(call({"gen", "--config", path("bad.cfg"), "-o", path("a.csv")}), 1);
    EXPECT_FALSE(fs::exists(path("a.csv")));
    EXPECT_EQ(call({"gen", "--config", path("nope.cfg"), "-o", path("a.csv")}), 1);
}

TEST_F(Cli, IdentifyReconstructPipeline)
{
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "2048", "--dt", "0.001", "--seed", "42", "-o", path("x.csv")}), 0);
    ASSERT_EQ(call({"sim", path("x.csv"), "--model", "so:wn=50,zeta=0.2", "-o", path("y.csv")}), 0);
    ASSERT_EQ(call({"identify", path("x.csv"), path("y.csv"), "--lags", "512", "-o", path("h.itf")}), 0);
    EXPECT_NE(out.str().find("n_lags=512"), std::string::npos) << out.str();
    EXPECT_NE(out.str().find("dispersion_median="), std::string::npos);
    ASSERT_EQ(call({"reconstruct", path("x.csv"), path("h.itf"), "--mode", "time", "-o", path("yh.csv")}), 0);
    ASSERT_EQ(call({"error", path("y.csv"), path("yh.csv")}), 0);
    const auto text = out.str();
    const auto pos = text.find("epsilon_rel=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(text.substr(pos + 12)), 0.05);
    ASSERT_EQ(call({"plot", path("h.itf"), "-o", path("h")}), 0);
    EXPECT_EQ(slurp(path("h.ppm")).rfind("P3\n", 0), 0u);
    EXPECT_EQ(slurp(path("h.csv")).rfind("scale,m0,", 0), 0u);
}

TEST_F(Cli, StatsWritesAllTables)
{
    ASSERT_EQ(call({"gen", "--dist", "gauss:0,1", "--n", "500", "--dt", "0.01", "--seed", "3", "-o", path("x.csv")}), 0);
    ASSERT_EQ(call({"stats", path("x.csv"), "--with", path("x.csv"), "--lags", "20", "-o", path("s")}), 0);
    EXPECT_NE(out.str().find("n=500"), std::string::npos) << out.str();
    EXPECT_EQ(slurp(path("s_acf.csv")).rfind("lag,tau,value\n", 0), 0u);
    EXPECT_EQ(slurp(path("s_acf.csv")), slurp(path("s_ccf.csv")));
    EXPECT_EQ(slurp(path("s_psd.csv")).rfind("frequency,power\n", 0), 0u);
    EXPECT_EQ(slurp(path("s_hist.csv")).rfind("lo,hi,count\n", 0), 0u);
}
