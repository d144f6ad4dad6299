#include "helpers.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#ifndef AMSOM_CLI
#error "AMSOM_CLI must name the command-line binary"
#endif

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + AMSOM_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string quoted(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

const std::string kIris = quoted(std::filesystem::path(AMSOM_TEST_DATA) / "iris.csv");

}  // namespace

TEST_CASE("cli: train, render and bench succeed") {
    const testutil::TempDir dir("cli");
    const auto out = dir.path() / "train";
    CHECK(run_cli("train " + kIris + " -l species -s max_epochs=40 -s smooth_max_epochs=10 --baseline -o " +
                  quoted(out)) == 0);
    for (const char* f : {"amsom.json", "amsom.svg", "epochs.csv", "som.json", "som.svg"})
        CHECK(std::filesystem::exists(out / f));

    CHECK(run_cli("render " + quoted(out / "amsom.json") + " -o " + quoted(dir.path() / "r.svg")) == 0);
    CHECK(std::filesystem::exists(dir.path() / "r.svg"));

    const auto spec = dir.write("bench.cfg", "dataset = " + std::string(AMSOM_TEST_DATA) +
                                                 "/iris.csv\nlabel_column = species\nruns = 1\nmax_epochs = 30\n"
                                                 "smooth_max_epochs = 5\nsvg = false\n");
    CHECK(run_cli("bench " + quoted(spec) + " -q -o " + quoted(dir.path() / "bench")) == 0);
    CHECK(std::filesystem::exists(dir.path() / "bench" / "summary.csv"));
}

TEST_CASE("cli: exit codes") {
    const testutil::TempDir dir("codes");
    SUBCASE("usage and config errors give 1") {
        CHECK(run_cli("") == 1);
        CHECK(run_cli("frobnicate") == 1);
        CHECK(run_cli("train " + kIris + " -s gamma=-1 -o " + quoted(dir.path() / "x")) == 1);
        CHECK(run_cli("train " + kIris + " -s colour=red -o " + quoted(dir.path() / "x")) == 1);
        CHECK(run_cli("train " + kIris + " -c " + quoted(dir.path() / "absent.cfg")) == 1);
        CHECK(run_cli("train " + kIris + " -l nosuchcolumn -o " + quoted(dir.path() / "x")) == 1);
        CHECK(run_cli("bench " + quoted(dir.write("b.cfg", "runs = 2\n"))) == 1);
        CHECK(run_cli("render " + quoted(dir.write("s.json", "{}")) + " --width 5") == 1);
    }
    SUBCASE("data errors give 2") {
        CHECK(run_cli("train " + quoted(dir.path() / "missing.csv")) == 2);
        CHECK(run_cli("train " + quoted(dir.write("bad.csv", "1,2\n3,x\n"))) == 2);
        CHECK(run_cli("render " + quoted(dir.write("s.json", "{\"format\": \"nope\"}"))) == 2);
        CHECK(run_cli("bench " + quoted(dir.write("m.cfg", "dataset = " + (dir.path() / "none.csv").string()))) ==
              2);
    }
    SUBCASE("runtime errors give 3") {
        const auto blocker = dir.write("file", "x");
        CHECK(run_cli("train cluster -s max_epochs=5 -s smooth_max_epochs=2 -o " + quoted(blocker / "sub")) == 3);
    }
}
