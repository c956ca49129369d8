// Runs the installed-style binary end to end and checks exit codes and files.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;

    explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("zeno_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    fs::path write(const std::string& file, const std::string& text) const {
        std::ofstream(dir / file) << text;
        return dir / file;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(ZENO_LAB_EXE) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Cli, PresetRunsSucceed) {
    Sandbox box("presets");
    const auto out = box.dir.string();
    EXPECT_EQ(run("zeno --preset fig1-left --out " + out), 0);
    EXPECT_TRUE(fs::exists(box.dir / "zeno.csv"));
    EXPECT_EQ(run("zeno --preset zeno-freeze --out " + out), 0);
    EXPECT_TRUE(fs::exists(box.dir / "zeno_freeze.csv"));
    EXPECT_EQ(run("survival --preset qm-exponential-limit --out " + out), 0);
    EXPECT_TRUE(fs::exists(box.dir / "survival.csv"));
    EXPECT_EQ(run("qft --preset qft-demo --out " + out), 0);
    EXPECT_TRUE(fs::exists(box.dir / "qft.csv"));
}

TEST(Cli, ConfigErrorsExitTwo) {
    Sandbox box("config");
    const auto empty = box.write("empty.conf", "exponential.gamma = 1\ngrid.start = 0\ngrid.stop = 1\ngrid.points = 0\n");
    EXPECT_EQ(run("survival --config " + empty.string() + " --out " + box.dir.string()), 2);
    const auto typo = box.write("typo.conf", "exponential.gama = 1\n");
    EXPECT_EQ(run("survival --config " + typo.string()), 2);
    EXPECT_EQ(run("survival --config " + (box.dir / "missing.conf").string()), 2);
    EXPECT_EQ(run("survival"), 2);
    EXPECT_EQ(run("bogus --preset fig1-left"), 2);
    EXPECT_EQ(run("zeno --preset no-such-preset"), 2);
    EXPECT_EQ(run("zeno --preset fig1-left --seed notanumber"), 2);
}

TEST(Cli, ValidationFailureExitsFour) {
    Sandbox box("tiny");
    const auto tiny = box.write("tiny.conf", "lattice.n_points = 256\nrun.trials = 0\n");
    EXPECT_EQ(run("validate --preset validate-default --config " + tiny.string() + " --out " + box.dir.string()), 4);
    const auto report = slurp(box.dir / "validate.json");
    EXPECT_NE(report.find("\"lattice_norm\""), std::string::npos);
    EXPECT_NE(report.find("\"passed\": false"), std::string::npos);
}

TEST(Cli, BlindDetectorValidates) {
    Sandbox box("blind");
    const auto conf = box.write("blind.conf", "detector.lambda = 0\nrun.trials = 1000\nlattice.n_points = 16384\n");
    EXPECT_EQ(run("validate --preset validate-default --config " + conf.string() + " --out " + box.dir.string()), 0);
}

TEST(Cli, SameSeedGivesByteIdenticalOutput) {
    Sandbox box("determinism");
    const auto conf = box.write("small.conf", "lattice.n_points = 16384\nrun.trials = 20000\n");
    const auto a = box.dir / "a";
    const auto b = box.dir / "b";
    const auto c = box.dir / "c";
    const std::string base = "validate --preset validate-default --config " + conf.string();
    ASSERT_EQ(run(base + " --seed 7 --out " + a.string()), 0);
    ASSERT_EQ(run(base + " --seed 7 --out " + b.string()), 0);
    ASSERT_EQ(run(base + " --seed 8 --out " + c.string()), 0);
    EXPECT_EQ(slurp(a / "trajectories.json"), slurp(b / "trajectories.json"));
    EXPECT_EQ(slurp(a / "validate.json"), slurp(b / "validate.json"));
    EXPECT_NE(slurp(a / "trajectories.json"), slurp(c / "trajectories.json"));
}

TEST(Cli, ThreadLimitDoesNotChangeResults) {
    Sandbox box("threads");
    const auto one = box.dir / "one";
    const auto many = box.dir / "many";
    const std::string cmd = std::string(ZENO_LAB_EXE) + " survival --preset qm-exponential-limit --out ";
    ASSERT_EQ(std::system(("ZENO_LAB_THREADS=1 " + cmd + one.string() + " > /dev/null").c_str()), 0);
    ASSERT_EQ(std::system(("ZENO_LAB_THREADS=4 " + cmd + many.string() + " > /dev/null").c_str()), 0);
    EXPECT_EQ(slurp(one / "survival.csv"), slurp(many / "survival.csv"));
}
