#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "folia/cli.hpp"
#include "folia/json_io.hpp"
#include "test_util.hpp"

using namespace folia;
using namespace folia::testutil;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("check: involutive module exits 0") {
    RunResult r = run({"check", data_path("rotation.sfo"), "--json", "check_rot.json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("involutive: yes") != std::string::npos);
    Json j = Json::parse(slurp("check_rot.json"));
    CHECK(j["involutive"] == true);
}

TEST_CASE("check: refuted module exits 2 with a witness") {
    RunResult r = run({"check", data_path("noninv.sfo"), "--json", "check_bad.json"});
    CHECK(r.code == 2);
    Json j = Json::parse(slurp("check_bad.json"));
    CHECK(j["involutive"] == false);
    CHECK(j["witness"]["bracket"] == "dy");
}

TEST_CASE("dims: the codimension-two module at the origin") {
    RunResult r = run({"dims", data_path("vanish_origin.sfo"), "--point", "0,0", "--json",
                       "dims_origin.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("dims_origin.json"));
    CHECK(j["dim_fiber"] == 4);
    CHECK(j["dim_ev"] == 0);
    CHECK(j["dim_isotropy"] == 4);
    CHECK(j["verdicts"]["ses_identity"] == true);
}

TEST_CASE("proj: grid scan verdicts") {
    RunResult r = run({"proj", data_path("hypersurface.sfo"), "--grid", "-2:2:3", "--json",
                       "proj_h.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("proj_h.json"));
    CHECK(j["verdict"] == "projective");
    CHECK(j["rank"] == 2);

    RunResult r2 = run({"proj", data_path("vanish_origin.sfo"), "--points", "0,0;1,0",
                        "--json", "proj_v.json"});
    CHECK(r2.code == 0);
    CHECK(Json::parse(slurp("proj_v.json"))["verdict"] == "non-projective");
}

TEST_CASE("leaf: yes verdict with a replayable path") {
    RunResult r = run({"leaf", data_path("x2dx.sfo"), "--from", "1", "--to", "2", "--json",
                       "leaf.json", "--path", "leaf_path.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("leaf.json"));
    CHECK(j["verdict"] == "yes");
    Json p = Json::parse(slurp("leaf_path.json"));
    CHECK(p["schema"] == "folia/path/1");
    CHECK(p["segments"].size() > 0);
}

TEST_CASE("exp: rotation quarter turn") {
    RunResult r = run({"exp", data_path("rotation.sfo"), "--lambda", "1.5707963267948966",
                       "--point", "1,0", "--json", "exp.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("exp.json"));
    CHECK(j["kind"] == "pair");
    CHECK(std::abs(j["target"][0].get<double>()) < 1e-6);
    CHECK(std::abs(j["target"][1].get<double>() - 1.0) < 1e-6);
}

TEST_CASE("family: group law and period reporting") {
    RunResult r = run({"family", data_path("rotation.sfo"), "--section", "-y*dx + x*dy",
                       "--box", "2", "--period-scan", "7", "--point", "1,0", "--json",
                       "family.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("family.json"));
    CHECK(j["max_deviation"].get<double>() < 1e-6);
    REQUIRE(j.contains("period"));
    CHECK(std::abs(j["period"].get<double>() - 2 * M_PI) < 1e-5);
}

TEST_CASE("integrate: kernel detection from the file's generators") {
    RunResult r = run({"integrate", data_path("so3_z.sfo"), "--json", "integrate.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("integrate.json"));
    CHECK(j["kernel_found"] == true);
    CHECK(std::abs(j["kernel"][0]["lambda"].get<double>() - 2 * M_PI) < 1e-9);
}

TEST_CASE("differentiate: family coefficients from the command line") {
    RunResult r = run({"differentiate", data_path("x2dx.sfo"), "--family", "l*(1+x^2)",
                       "--json", "diff.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("diff.json"));
    CHECK(j["member"] == true);
    CHECK(j["max_deviation"].get<double>() < 1e-6);
}

TEST_CASE("counterexample subcommands") {
    RunResult openness = run({"counterexample", "openness", "--json", "open.json"});
    CHECK(openness.code == 0);
    CHECK(Json::parse(slurp("open.json"))["pass"] == true);

    RunResult subspace = run({"counterexample", "subspace", "--file", data_path("x2dx.sfo"),
                              "--json", "subspace.json"});
    CHECK(subspace.code == 0);
    Json j = Json::parse(slurp("subspace.json"));
    CHECK(j["member"] == false);  // the dilation derivative x dx is refused exactly
}

TEST_CASE("render writes an SVG") {
    RunResult r = run({"render", data_path("rotation.sfo"), "--out", "rot.svg", "--mode",
                       "heat", "--cells", "9"});
    CHECK(r.code == 0);
    std::string svg = slurp("rot.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<rect") != std::string::npos);

    RunResult r2 = run({"render", data_path("rotation.sfo"), "--out", "rot_flows.svg",
                        "--mode", "flows", "--seeds", "4", "--time", "2"});
    CHECK(r2.code == 0);
    CHECK(slurp("rot_flows.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("usage and parse errors exit 1") {
    CHECK(run({"check", "missing_file.sfo"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({"dims", data_path("rotation.sfo")}).code == 1);  // neither point nor grid
    // a parse error carries its position
    std::ofstream bad("bad.sfo");
    bad << "vars: x\nambient: tangent\ngenerators:\n - dx + \n";
    bad.close();
    RunResult r = run({"check", "bad.sfo"});
    CHECK(r.code == 1);
    CHECK(r.err.find("4:") != std::string::npos);
}

TEST_CASE("reproducibility: byte-identical JSON under a fixed seed") {
    for (int round = 0; round < 2; ++round) {
        std::string path = "repro_" + std::to_string(round) + ".json";
        RunResult r = run({"dims", data_path("vanish_origin.sfo"), "--grid", "-1:1:3",
                           "--seed", "777", "--json", path});
        REQUIRE(r.code == 0);
    }
    CHECK(slurp("repro_0.json") == slurp("repro_1.json"));

    for (int round = 0; round < 2; ++round) {
        std::string path = "repro_fam_" + std::to_string(round) + ".json";
        RunResult r = run({"family", data_path("xdx.sfo"), "--section", "x*dx", "--seed",
                           "2024", "--json", path});
        REQUIRE(r.code == 0);
    }
    CHECK(slurp("repro_fam_0.json") == slurp("repro_fam_1.json"));
}

TEST_CASE("dims on a non-involutive module is a refutation, exit 2") {
    RunResult r = run({"dims", data_path("noninv.sfo"), "--point", "0,0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("not involutive") != std::string::npos);
}

TEST_CASE("dims over a point base needs no point argument") {
    RunResult r = run({"dims", data_path("so3_z.sfo"), "--json", "dims_pt.json"});
    CHECK(r.code == 0);
    Json j = Json::parse(slurp("dims_pt.json"));
    CHECK(j["dim_fiber"] == 1);
    CHECK(j["dim_ev"] == 1);
    CHECK(j["dim_isotropy"] == 0);
}
