#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

using nlohmann::json;

namespace {

struct CmdResult {
    int status;
    std::string out;
};

CmdResult sh(const std::string& cmd) {
    std::array<char, 4096> buf;
    std::string out;
    FILE* p = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(p != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int rc = pclose(p);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

const std::string bin = KSLAB_BIN;

json parse_out(const CmdResult& r) {
    return json::parse(r.out);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

} // namespace

TEST_CASE("usage errors exit 1, help exits 0") {
    CHECK(sh(bin).status == 1);
    CHECK(sh(bin + " frobnicate").status == 1);
    auto help = sh(bin + " --help");
    CHECK(help.status == 0);
    CHECK(help.out.find("enumerate") != std::string::npos);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(sh(bin + " enumerate --class local").status == 1);
    CHECK(sh(bin + " enumerate --party --joint").status == 1);
    CHECK(sh(bin + " bound").status == 1); // --ineq is required
    CHECK(sh(bin + " bound --ineq nosuchthing").status == 1);
    CHECK(sh(bin + " enumerate --format yaml").status == 1);
}

TEST_CASE("enumerate") {
    auto r = sh(bin + " enumerate");
    CHECK(r.status == 0);
    json j = parse_out(r);
    CHECK(j["kind"] == "party");
    CHECK(j["class"] == "realistic");
    CHECK(j["count"] == 36);
    CHECK(j["states"].size() == 36);
    CHECK(j["states"][0] == json::array({"0", "0", "a0", "a1"}));

    json nc = parse_out(sh(bin + " enumerate --class noncontextual"));
    CHECK(nc["count"] == 14);
    json joint = parse_out(sh(bin + " enumerate --joint --class noncontextual"));
    CHECK(joint["kind"] == "joint");
    CHECK(joint["count"] == 196);
    CHECK(joint["states"][0].size() == 8);

    auto csv = sh(bin + " enumerate --format csv --class noncontextual");
    CHECK(csv.status == 0);
    CHECK(csv.out.rfind("# count=14\nd0,d1,t0,t1\n0,0,a0,a1\n", 0) == 0);
}

TEST_CASE("bound") {
    auto r = sh(bin + " bound --ineq K");
    CHECK(r.status == 0);
    json j = parse_out(r);
    CHECK(j["name"] == "K");
    CHECK(j["class"] == "realistic");
    CHECK(j["bound"] == "0");
    CHECK(j["maximum"] == "0");
    CHECK(j["tight"] == true);
    CHECK(j["exceeds_bound"] == false);
    CHECK(j["eligible_count"] == 1296);
    CHECK(j["maximizer_count"] == 81);
    CHECK(j["violator_count"] == 0);
    CHECK(j["maximizers"].size() == 81);

    json trimmed = parse_out(sh(bin + " bound --ineq K --witnesses 3"));
    CHECK(trimmed["maximizers"].size() == 3);
    CHECK(trimmed["maximizer_count"] == 81);

    // class override reports but does not condemn
    auto re = sh(bin + " bound --ineq lemma2a --class realistic");
    CHECK(re.status == 0);
    json jr = parse_out(re);
    CHECK(jr["maximum"] == "1");
    CHECK(jr["exceeds_bound"] == true);
    CHECK(jr["violator_count"] == 144);

    // a transcription that does break its own declared bound exits 2
    auto bad = sh(bin + " bound --ineq lemma2c-printed");
    CHECK(bad.status == 2);
    json jb = parse_out(bad);
    CHECK(jb["maximum"] == "1");
    CHECK(jb["violator_count"] == 9);

    auto checked = sh(bin + " bound --ineq lemma3 --paper-check");
    CHECK(checked.status == 0);
    json jc = parse_out(checked);
    CHECK(jc["reference_maximum"] == "0");
    CHECK(jc["reference_match"] == true);
}

TEST_CASE("bound on a user-supplied inequality file") {
    const std::string path = "/tmp/kslab_cli_custom.json";
    write_file(path, R"({
        "name": "tiny", "class": "noncontextual", "bound": "0",
        "terms": [{"coef": "1", "atoms": [{"party": "A", "obs": "D0", "out": "1"},
                                          {"party": "B", "obs": "D0", "out": "1"}]},
                  {"coef": "-1", "atoms": [{"party": "A", "obs": "T0", "out": "b0"},
                                           {"party": "B", "obs": "T0", "out": "b0"}]}]
    })");
    auto r = sh(bin + " bound --ineq " + path);
    json j = parse_out(r);
    CHECK(j["name"] == "tiny");
    CHECK(j["eligible_count"] == 196);

    write_file("/tmp/kslab_cli_broken.json", R"({"name": "x"})");
    CHECK(sh(bin + " bound --ineq /tmp/kslab_cli_broken.json").status == 1);
    write_file("/tmp/kslab_cli_notjson.json", "{nope");
    CHECK(sh(bin + " bound --ineq /tmp/kslab_cli_notjson.json").status == 1);
}

TEST_CASE("quantum") {
    auto r = sh(bin + " quantum --ineq K --paper-check");
    CHECK(r.status == 0);
    json j = parse_out(r);
    CHECK(j["name"] == "K");
    CHECK(j["visibility"] == 1.0);
    CHECK(std::abs(j["value"].get<double>() - 2.0 / 27.0) < 1e-9);
    CHECK(j["terms"].size() == 22);
    CHECK(j["abs_diff"].get<double>() < 1e-9);

    json v0 = parse_out(sh(bin + " quantum --ineq K --visibility 0 --paper-check"));
    CHECK(std::abs(v0["value"].get<double>() + 2.0) < 1e-9);
    json vh = parse_out(sh(bin + " quantum --ineq K --visibility 0.5"));
    CHECK(std::abs(vh["value"].get<double>() + 26.0 / 27.0) < 1e-9);

    json c = parse_out(sh(bin + " quantum --ineq lemma2a-conditional --paper-check"));
    CHECK(std::abs(c["value"].get<double>() - 1.0 / 9.0) < 1e-9);
    CHECK(c["condition"]["obs"] == "D0");

    CHECK(sh(bin + " quantum --ineq K --visibility 1.5").status == 1);
}

TEST_CASE("robustness") {
    auto r = sh(bin + " robustness --ineq K --paper-check");
    CHECK(r.status == 0);
    json j = parse_out(r);
    CHECK(std::abs(j["quantum_value"].get<double>() - 2.0 / 27.0) < 1e-9);
    CHECK(j["epsilon"]["convention"] == "negatives-only");
    CHECK(std::abs(j["epsilon"]["value"].get<double>() - 1.0 / 270.0) < 1e-12);
    CHECK(j["epsilon"]["exact"] == "1/270");
    CHECK(std::abs(j["critical_visibility"]["closed_form"].get<double>() - 27.0 / 28.0) < 1e-9);
    CHECK(j["critical_visibility"]["agreement"] == true);
    CHECK(j["critical_visibility"]["exact"] == "27/28");

    json u = parse_out(sh(bin + " robustness --ineq K --convention uniform --paper-check"));
    CHECK(u["epsilon"]["exact"] == "1/297");

    json c = parse_out(
        sh(bin + " robustness --ineq lemma2a-conditional --convention uniform --paper-check"));
    CHECK(c["epsilon"]["exact"] == "1/27");
    CHECK(std::abs(c["critical_visibility"]["closed_form"].get<double>() - 0.75) < 1e-9);

    // no violation to protect
    CHECK(sh(bin + " robustness --ineq K-printed").status == 1);
    CHECK(sh(bin + " robustness --ineq K --convention sideways").status == 1);
}

TEST_CASE("simulate") {
    const std::string cmd = bin + " simulate --ineq K --shots 20000 --seed 9";
    auto r1 = sh(cmd);
    CHECK(r1.status == 0);
    json j = parse_out(r1);
    CHECK(j["name"] == "K");
    CHECK(j["seed"] == 9);
    CHECK(j["shots_per_setting"] == 20000);
    CHECK(j["verdict"] == "violation");
    CHECK(std::abs(j["estimate"].get<double>() - 2.0 / 27.0) <
          5.0 * j["stderr"].get<double>());
    CHECK(j["terms"].size() == 22);

    // byte-identical reruns
    auto r2 = sh(cmd);
    CHECK(r1.out == r2.out);

    // seed from the environment, overridden by the flag
    auto env = sh("KSLAB_SEED=9 " + bin + " simulate --ineq K --shots 20000");
    CHECK(env.out == r1.out);
    auto flag_wins = sh("KSLAB_SEED=5 " + bin + " simulate --ineq K --shots 20000 --seed 9");
    CHECK(flag_wins.out == r1.out);
    json d = parse_out(sh(bin + " simulate --ineq K --shots 20000"));
    CHECK(d["seed"] == 0);

    auto with_csv = sh(bin + " simulate --ineq lemma2a --shots 500 --seed 1 --counts-csv "
                             "/tmp/kslab_cli_counts.csv");
    CHECK(with_csv.status == 0);
    std::ifstream csv("/tmp/kslab_cli_counts.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "obsA,obsB,outA,outB,count");

    // a negative verdict is a result, not an error
    auto quiet = parse_out(sh(bin + " simulate --ineq K --shots 100 --seed 2 --visibility 0.5"));
    CHECK(quiet["verdict"] == "no-violation");

    CHECK(sh(bin + " simulate --ineq K --shots 0").status == 1);
    CHECK(sh(bin + " simulate --ineq K --visibility 2").status == 1);
}

TEST_CASE("export-table") {
    auto csv = sh(bin + " export-table");
    CHECK(csv.status == 0);
    CHECK(csv.out.rfind("obsA,outA,obsB,outB,p\n", 0) == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 101);

    auto j = parse_out(sh(bin + " export-table --format json"));
    CHECK(j.is_array());
    CHECK(j.size() == 100);

    auto noisy = parse_out(sh(bin + " export-table --format json --visibility 0"));
    for (const auto& row : noisy) {
        if (row["obsA"] == "T0" && row["obsB"] == "T0")
            CHECK(std::abs(row["p"].get<double>() - 1.0 / 9.0) < 1e-12);
    }
    CHECK(sh(bin + " export-table --visibility -0.1").status == 1);
}

TEST_CASE("verify-all") {
    auto r = sh(bin + " verify-all");
    CHECK(r.status == 0);
    CHECK(r.out.find("[ok]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("documented discrepancy") != std::string::npos);
    CHECK(r.out.find("lemma2c-printed") != std::string::npos);
    CHECK(r.out.find("K-printed") != std::string::npos);
    CHECK(r.out.find("0 failures, 3 documented discrepancies") != std::string::npos);
}

TEST_CASE("verify-all with tampered kets") {
    write_file("/tmp/kslab_cli_tampered.json", R"({"c0": [0.6, 0.8, 0]})");
    auto r = sh(bin + " verify-all --kets /tmp/kslab_cli_tampered.json");
    CHECK(r.status == 2);
    CHECK(r.out.find("[FAIL]") != std::string::npos);
    CHECK(r.out.find("orthogonality a0 | c0 broken") != std::string::npos);
    CHECK(r.out.find("orthogonality b0 | c0 broken") != std::string::npos);

    // a0 pushed onto the c0 axis breaks its edges with i and c0 but not b0
    write_file("/tmp/kslab_cli_tampered_a0.json", R"({"a0": [1, 0, 0]})");
    auto ra = sh(bin + " verify-all --kets /tmp/kslab_cli_tampered_a0.json");
    CHECK(ra.status == 2);
    CHECK(ra.out.find("orthogonality i | a0 broken") != std::string::npos);
    CHECK(ra.out.find("orthogonality a0 | c0 broken") != std::string::npos);
    CHECK(ra.out.find("orthogonality a0 | b0 broken") == std::string::npos);

    // a global phase is physically irrelevant and must pass every check
    write_file("/tmp/kslab_cli_phased.json",
               R"({"a0": [0, [0, 0.70710678118654752], [0, -0.70710678118654752]]})");
    CHECK(sh(bin + " verify-all --kets /tmp/kslab_cli_phased.json").status == 0);

    CHECK(sh(bin + " verify-all --kets /tmp/kslab_cli_missing.json").status == 1);
    write_file("/tmp/kslab_cli_badkets.json", R"({"c0": [1, 0]})");
    CHECK(sh(bin + " verify-all --kets /tmp/kslab_cli_badkets.json").status == 1);
}
