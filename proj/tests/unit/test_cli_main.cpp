#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
    int code = -1;
    std::string output;
};

const std::string& cli_path() {
    static const std::string path = [] {
        const char* env = std::getenv("STARKHOLE_CLI");
        return env ? std::string(env) : std::string();
    }();
    return path;
}

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "starkhole_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CmdResult run_cli(const std::string& args) {
    static int call = 0;
    const fs::path capture = work_dir() / ("out_" + std::to_string(call++) + ".txt");
    const std::string cmd = cli_path() + " " + args + " > " + capture.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());

    CmdResult result;
    result.code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return json::parse(in);
}

}  // namespace

TEST_CASE("binary path is provided") {
    REQUIRE_FALSE(cli_path().empty());
    REQUIRE(fs::exists(cli_path()));
}

TEST_CASE("version flag") {
    const auto r = run_cli("--version");
    CHECK(r.code == 0);
    CHECK(r.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("bare invocation is a usage error") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("shape prints the Lorentzian limit value") {
    const auto r = run_cli("shape --fbar 0 --xmin 0 --xmax 0 --points 1");
    CHECK(r.code == 0);
    // 1/pi at 17 significant digits
    CHECK(r.output.find("0.31830988618379") != std::string::npos);
}

TEST_CASE("shape rejects negative broadening as a usage error") {
    CHECK(run_cli("shape --fbar=-1").code == 2);
}

TEST_CASE("plan emits the gradient field and schedule") {
    const fs::path manifest = work_dir() / "plan.json";
    const auto r =
        run_cli("plan --kappa 25 --bandwidth 100 --manifest " + manifest.string());
    CHECK(r.code == 0);
    const json m = read_json(manifest);
    CHECK(m["command"] == "plan");
    CHECK(m["plan"]["type"] == "gradient");
    CHECK(m["plan"]["e_max_v_per_cm"].get<double>() == 2000.0);
    REQUIRE(m["schedule"]["phases"].size() == 2);
    CHECK(m["schedule"]["phases"][1]["polarity"].get<double>() == -1.0);

    // pulse duration is an equivalent way to state the bandwidth
    const fs::path manifest2 = work_dir() / "plan2.json";
    const auto r2 =
        run_cli("plan --kappa 25 --duration 10 --manifest " + manifest2.string());
    CHECK(r2.code == 0);
    CHECK(read_json(manifest2)["plan"]["e_max_v_per_cm"].get<double>() == 2000.0);

    CHECK(run_cli("plan --kappa 25 --bandwidth 100 --duration 10").code == 2);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    const fs::path d1 = work_dir() / "sim1";
    const fs::path d2 = work_dir() / "sim2";
    const std::string common = "simulate --preset crystal-linbo3 --points 64 --out ";
    CHECK(run_cli(common + d1.string()).code == 0);
    CHECK(run_cli(common + d2.string()).code == 0);

    for (const char* name : {"scan_000_before.csv", "scan_004_during.csv"}) {
        std::ifstream a(d1 / name), b(d2 / name);
        REQUIRE(a.good());
        REQUIRE(b.good());
        std::ostringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
    }
}

TEST_CASE("simulate refuses a centrosymmetric amorphous medium") {
    const fs::path dir = work_dir() / "bad_sim";
    const auto r = run_cli(
        "simulate --medium amorphous --kappa 15 --voltages=0,20 --gap 0.3 "
        "--centrosymmetric --out " +
        dir.string());
    CHECK(r.code == 2);
}

TEST_CASE("fit reports the shifted hole center") {
    const fs::path dir = work_dir() / "fit_input";
    const auto sim = run_cli(
        "simulate --medium crystal --kappa 25 --voltages=100 --gap 1 --span 1200 "
        "--points 256 --gamma 10 --noise 0 --out " +
        dir.string());
    REQUIRE(sim.code == 0);

    const fs::path manifest = work_dir() / "fit.json";
    const auto r = run_cli("fit " + (dir / "scan_001_during.csv").string() +
                           " --manifest " + manifest.string());
    CHECK(r.code == 0);
    const json m = read_json(manifest);
    REQUIRE(m["results"].size() == 1);
    const double center = m["results"][0]["fit"]["center_mhz"].get<double>();
    CHECK(center == doctest::Approx(25.0).epsilon(1e-6));
}

TEST_CASE("fit on a missing file is a computational failure") {
    CHECK(run_cli("fit /no/such/profile.csv").code == 1);
}

TEST_CASE("extract recovers kappa from a noiseless campaign") {
    const fs::path dir = work_dir() / "extract_input";
    const auto sim = run_cli(
        "simulate --medium crystal --kappa 25 --voltages=-100,0,100 --gap 1 --span 1200 "
        "--points 256 --gamma 10 --noise 0 --out " +
        dir.string());
    REQUIRE(sim.code == 0);

    const fs::path manifest = work_dir() / "extract.json";
    const auto r =
        run_cli("extract --dir " + dir.string() + " --manifest " + manifest.string());
    CHECK(r.code == 0);
    CHECK(r.output.find("kappa = 25") != std::string::npos);
    const json m = read_json(manifest);
    CHECK(m["kappa_khz_per_v_cm"].get<double>() == doctest::Approx(25.0).epsilon(1e-9));
    CHECK(m["reversibility"]["all_pass"].get<bool>());
}

TEST_CASE("oracle cross-check passes on a healthy ensemble") {
    const auto r = run_cli("oracle --fbar 1 --samples 20000 --points 5 --xmax 4 --seed 2");
    CHECK(r.code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
}
