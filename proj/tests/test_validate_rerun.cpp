// End-to-end checks of the validate command: exit codes, manifest round
// trips, and number-for-number reproducibility when re-run from its own
// manifest.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qmem_validate_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QMEM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

json load_json(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    return json::parse(in);
}

}  // namespace

TEST_CASE("validate passes on the preset and reproduces its numbers from the manifest") {
    const fs::path v1 = fresh_dir("v1");
    CHECK(run_cli("validate --seed 5 --out " + v1.string()) == 0);
    const json r1 = load_json(v1 / "validation.json");
    CHECK(r1["all_passed"].get<bool>());
    CHECK(r1["environment"]["seed"].get<std::uint64_t>() == 5);

    // re-run on the manifest the first run wrote
    const fs::path v2 = fresh_dir("v2");
    CHECK(run_cli("validate --config " + (v1 / "manifest.json").string() + " --out " +
                  v2.string()) == 0);
    const json r2 = load_json(v2 / "validation.json");

    REQUIRE(r1["checks"].size() == r2["checks"].size());
    for (std::size_t i = 0; i < r1["checks"].size(); ++i) {
        const json& a = r1["checks"][i];
        const json& b = r2["checks"][i];
        CHECK(a["check_name"] == b["check_name"]);
        CHECK(a["status"] == b["status"]);
        // bitwise identical measurements; only runtimes may differ
        CHECK(a["measured"].get<double>() == b["measured"].get<double>());
        CHECK(a["predicted"].get<double>() == b["predicted"].get<double>());
    }
}

TEST_CASE("validate exits 1 when a criterion goes red") {
    const fs::path out = fresh_dir("red");
    // a step far beyond the stability guard breaks the bare-cavity criterion;
    // "run validate" is the scenario-name alias of the subcommand
    CHECK(run_cli("run validate --set engine.dt_max=0.04 --out " + out.string()) == 1);
    const json r = load_json(out / "validation.json");
    CHECK_FALSE(r["all_passed"].get<bool>());
    bool saw_failed_acc01 = false;
    for (const json& c : r["checks"])
        if (c["check_name"] == "acc01_bare_cavity_closed_form")
            saw_failed_acc01 = c["status"] == "fail";
    CHECK(saw_failed_acc01);
}
