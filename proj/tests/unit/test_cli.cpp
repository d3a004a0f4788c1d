#include <gtest/gtest.h>
#include <sys/wait.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path work = LVAR_TEST_WORK;

int run(const std::string& args) {
    std::string cmd = std::string(LVAR_CLI) + " " + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path fresh(const std::string& name) {
    fs::path d = work / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
}

nlohmann::json manifest(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

}  // namespace

TEST(Cli, PredictWritesDegreeOneRow) {
    auto d = fresh("predict");
    // X = e^10, h = e^3
    ASSERT_EQ(run("predict --desc zeta --X 22026.465794806718 --step 20.085536923187668 --out " + d.string()), 0);
    auto rows = lines(d / "predict.csv");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "statistic,X,step,regime,formula,value,normalized");
    auto f = fields(rows[1]);
    ASSERT_EQ(f.size(), 7u);
    EXPECT_EQ(f[0], "v_tilde");
    EXPECT_EQ(f[3], "degree1");
    EXPECT_NEAR(std::stod(f[6]), 4.58491, 1e-5);
    EXPECT_EQ(f[6].size(), std::string("4.5849072686891219e+00").size());
    auto m = manifest(d / "predict.manifest.json");
    EXPECT_EQ(m["subcommand"], "predict");
    EXPECT_EQ(m["outputs"][0], "predict.csv");
}

TEST(Cli, EmptyVarianceGridGivesHeaderOnly) {
    auto d = fresh("empty-grid");
    ASSERT_EQ(run("variance --desc zeta --X 1000 --points 0 --out " + d.string()), 0);
    auto rows = lines(d / "variance.csv");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(fields(rows[0]).front(), "X");
    auto m = manifest(d / "variance.manifest.json");
    EXPECT_EQ(m["results"]["points"], 0);
    EXPECT_EQ(m["results"]["exit_status"], 0);
}

TEST(Cli, SelftestPasses) {
    auto d = fresh("selftest");
    EXPECT_EQ(run("selftest --out " + d.string()), 0);
    auto rows = lines(d / "selftest.csv");
    ASSERT_GT(rows.size(), 10u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(fields(rows[i]).back(), "1") << rows[i];
}

TEST(Cli, UsageErrorsExitTwo) {
    auto d = fresh("usage");
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("no-such-command"), 2);
    EXPECT_EQ(run("predict --desc nonsense --out " + d.string()), 2);
    EXPECT_EQ(run("predict --X -5 --out " + d.string()), 2);
    EXPECT_EQ(run("variance --X 1000 --u-max 10 --out " + d.string()), 2);
    EXPECT_EQ(run("coeffs --desc table --out " + d.string()), 2);
    EXPECT_EQ(run("coeffs --desc ec --curve 0,0,0,0,0,1 --out " + d.string()), 2);
    EXPECT_EQ(run("paircorr --zeros " + (d / "missing.txt").string() + " --out " + d.string()), 2);
}

TEST(Cli, MalformedZeroFileIsAnInputError) {
    auto d = fresh("bad-zeros");
    std::ofstream(d / "z.txt") << "14.1347\nnot-a-number\n";
    EXPECT_EQ(run("paircorr --zeros " + (d / "z.txt").string() + " --out " + d.string()), 2);
}

TEST(Cli, ReplayReproducesOutputs) {
    auto a = fresh("replay-a");
    auto b = fresh("replay-b");
    ASSERT_EQ(run("variance --desc delta --X 20000 --u-max 8 --points 6 --out " + a.string()), 0);
    EXPECT_EQ(run("replay " + (a / "variance.manifest.json").string() + " --out " + b.string()), 0);
    EXPECT_EQ(lines(a / "variance.csv"), lines(b / "variance.csv"));

    // a tampered output no longer matches
    std::ofstream(a / "variance.csv", std::ios::app) << "tampered\n";
    EXPECT_EQ(run("replay " + (a / "variance.manifest.json").string() + " --out " + b.string()), 1);
}

TEST(Cli, ExplicitFailsWhenEnvelopeIsExceeded) {
    auto d = fresh("explicit");
    // a one-zero list leaves a nonzero residual; an allowed multiple of 1e-12 cannot cover it
    std::ofstream(d / "z.txt") << "3.0\n";
    EXPECT_EQ(run("explicit --zeros " + (d / "z.txt").string() +
                  " --x 5000 --delta 0.1 --Z 3 --constant 1e-12 --out " + d.string()),
              1);
    auto m = manifest(d / "explicit.manifest.json");
    EXPECT_EQ(m["results"]["pass"], false);
}

TEST(Cli, HlAndEulerWriteTables) {
    auto d = fresh("hl");
    ASSERT_EQ(run("hl --k-max 4 --P 10000 --X 20000 --out " + d.string()), 0);
    auto rows = lines(d / "hl.csv");
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(fields(rows[3])[1], "0.0000000000000000e+00");  // k = 3
    EXPECT_NEAR(std::stod(fields(rows[2])[1]), 1.32032, 1e-4);

    auto e = fresh("euler");
    ASSERT_EQ(run("euler --desc delta --P 5000 --r 0 --eta 0.5 --out " + e.string()), 0);
    auto ab = lines(e / "euler_ab.csv");
    ASSERT_EQ(ab.size(), 2u);
    EXPECT_NEAR(std::stod(fields(ab[1])[1]), 1.0, 1e-12);
}

TEST(Cli, ConfigFileSuppliesOptions) {
    auto d = fresh("config");
    std::ofstream(d / "run.toml") << "[predict]\ndesc = \"zeta\"\nX = 22026.465794806718\nstep = [20.085536923187668]\n";
    ASSERT_EQ(run("--config " + (d / "run.toml").string() + " predict --out " + d.string()), 0);
    auto f = fields(lines(d / "predict.csv").at(1));
    EXPECT_NEAR(std::stod(f[6]), 4.58491, 1e-5);
}
