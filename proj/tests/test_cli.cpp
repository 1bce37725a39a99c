#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "sectorflow_cli_tests";

int run(const std::string& args, const std::string& capture = "")
{
    std::string cmd = std::string(SECTORFLOW_CLI) + " " + args;
    cmd += capture.empty() ? " >/dev/null 2>&1" : " >" + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const std::string& text)
{
    fs::create_directories(scratch);
    const auto p = scratch / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("preset listing")
{
    const auto out = (scratch / "presets.txt").string();
    fs::create_directories(scratch);
    REQUIRE(run("presets", out) == 0);
    const auto text = slurp(out);
    int count = 0;
    for (const char* name : {"two-sector-angles", "rotating-solutions", "cusp-collapse", "basin-portrait",
                             "sector-corner", "spiral-winding", "validate"}) {
        CHECK(text.find(name) != std::string::npos);
        ++count;
    }
    CHECK(count >= 6);
}

TEST_CASE("presets resolve and mismatched ones are rejected")
{
    CHECK(run("cusp --preset cusp-collapse --out " + (scratch / "cusp").string()) == 0);
    const auto cls = nlohmann::json::parse(slurp(scratch / "cusp" / "classification.json"));
    CHECK(cls["collapsing_angle"] == "zeta1");
    CHECK(std::abs(cls["rate"].get<double>() - 0.5) < 0.025);
    CHECK(run("angles --preset cusp-collapse --out " + (scratch / "mismatch").string()) == 2);
    CHECK(run("angles --preset nope --out " + (scratch / "nope").string()) == 2);
}

TEST_CASE("bad configs exit 2 and still write a manifest")
{
    const auto dir = scratch / "bad";
    fs::remove_all(dir);
    const auto unknown = write_config("unknown.json", R"({"zeta1": 0.1, "zetaa2": 0.3})");
    CHECK(run("cusp --config " + unknown.string() + " --out " + dir.string()) == 2);
    auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["exit_code"] == 2);
    CHECK(m["message"].get<std::string>().find("zetaa2") != std::string::npos);

    const auto typed = write_config("typed.json", R"({"t_end": "long"})");
    CHECK(run("cusp --config " + typed.string() + " --out " + dir.string()) == 2);
    const auto broken = write_config("broken.json", "{\"t_end\": 3,");
    CHECK(run("cusp --config " + broken.string() + " --out " + dir.string()) == 2);
    const auto sectors = write_config("sectors.json", R"({"m": 4, "sectors": [{"beta": 0, "zeta": -1}]})");
    CHECK(run("angles --config " + sectors.string() + " --out " + dir.string()) == 2);
    CHECK(run("angles --config /nonexistent.json --out " + dir.string()) == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("output directory from the environment")
{
    const auto dir = scratch / "env";
    fs::remove_all(dir);
    ::setenv("SECTORFLOW_OUT", dir.string().c_str(), 1);
    CHECK(run("equilibria --config " + write_config("eq.json", R"({"sweep_divisor": 64})").string()) == 0);
    ::unsetenv("SECTORFLOW_OUT");
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "sweep.csv"));
}

TEST_CASE("runs are byte reproducible")
{
    const auto cfg = write_config("pt.json", R"({"resolution": 16, "t_end": 100})");
    const auto a = scratch / "pa", b = scratch / "pb";
    REQUIRE(run("portrait --threads 1 --config " + cfg.string() + " --out " + a.string()) == 0);
    REQUIRE(run("portrait --threads 1 --config " + cfg.string() + " --out " + b.string()) == 0);
    for (const char* f : {"portrait.csv", "basins.csv", "portrait.svg"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto scfg = write_config("sec.json", R"({"patch": "sector", "t_end": 0.4})");
    REQUIRE(run("spiral --snapshot-every 1 --config " + scfg.string() + " --out " + a.string()) == 0);
    REQUIRE(run("spiral --snapshot-every 1 --config " + scfg.string() + " --out " + b.string()) == 0);
    for (const char* f : {"trajectory.csv", "final_contour.csv", "overlay.svg", "snapshots/contour_00001.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
}
