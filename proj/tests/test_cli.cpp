#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odeflow/cli.hpp"
#include "odeflow/model_io.hpp"
#include "oracles.hpp"

using namespace odeflow;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "odeflow_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = temp_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("model_io: gate shorthand, raw tensors, and diagnostics") {
    const Model rotor = parse_model(R"({"gate":"rotor","params":{"alpha":2.0}})");
    CHECK(rotor.B.n() == 3);
    CHECK(rotor.gate.has_value());
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    CHECK(rotor.B.eval(ones, ones)[0] == doctest::Approx(2.0));

    // Raw tensor round trip through serialization.
    const std::string text = model_to_json(rotor);
    const Model back = parse_model(text);
    for (int k = 0; k < 3; ++k)
        CHECK((back.B.slice(k) - rotor.B.slice(k)).norm() == 0.0);

    CHECK_THROWS_AS(parse_model("{\"n\": 2}"), std::invalid_argument);        // missing B
    CHECK_THROWS_AS(parse_model("{\"gate\": \"warp\"}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("{\"n\": 2, \"B\": [[[1,0],[0,0]]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model(R"({"gate":"rotor","y0":[1,2]})"), std::invalid_argument);
}

TEST_CASE("cmd_certify: exit codes 0 / 1 / 2") {
    RunConfig ok;
    ok.command = "certify";
    ok.gate = "rotor";
    ok.out_path = (temp_dir() / "rotor_cert.json").string();
    CHECK(run_cli(ok) == 0);
    const std::string cert = read_file(ok.out_path);
    CHECK(cert.find("\"found\"") != std::string::npos);

    // Scalar-multiple obstruction: exit 1, witness reported.
    RunConfig bad;
    bad.command = "certify";
    bad.model_path =
        write_file("parallel.json", R"({"n":3,"B":[[[1,0,0],[0,0,0],[0,0,0]],
          [[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]})")
            .string();
    bad.out_path = (temp_dir() / "parallel_cert.json").string();
    CHECK(run_cli(bad) == 1);
    CHECK(read_file(bad.out_path).find("witness") != std::string::npos);

    // Truncated JSON: exit 2.
    RunConfig trunc;
    trunc.command = "certify";
    trunc.model_path = write_file("trunc.json", R"({"n": 3, "B": [[[0,0)").string();
    CHECK(run_cli(trunc) == 2);

    // No model at all: exit 2.
    RunConfig none;
    none.command = "certify";
    CHECK(run_cli(none) == 2);
}

TEST_CASE("cmd_verify: rotor passes with 7 records; skew defect fails") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.gate = "rotor";
    cfg.samples = 30;
    cfg.out_path = (temp_dir() / "verify.jsonl").string();
    CHECK(run_cli(cfg) == 0);
    const std::string out = read_file(cfg.out_path);
    int lines = 0;
    for (char c : out)
        if (c == '\n') ++lines;
    CHECK(lines == 7);
    CHECK(out.find("\"pass\":false") == std::string::npos);

    RunConfig corrupt = cfg;
    corrupt.inject_skew_defect = true;
    corrupt.out_path = (temp_dir() / "verify_bad.jsonl").string();
    CHECK(run_cli(corrupt) == 1);
    CHECK(read_file(corrupt.out_path).find("\"pass\":false") != std::string::npos);
}

TEST_CASE("cmd_simulate: closed form agreement, energy column, exit codes") {
    // Rotor, y0 = (0,1,1), RK4, step 1e-3: CSV matches the closed form.
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.gate = "rotor";
    cfg.y0 = "0,1,1";
    cfg.step = 1e-3;
    cfg.t0 = 0.0;
    cfg.t1 = 2.0;
    cfg.out_path = (temp_dir() / "rotor_traj.csv").string();
    CHECK(run_cli(cfg) == 0);
    {
        std::ifstream in(cfg.out_path);
        std::string header;
        std::getline(in, header);
        CHECK(header == "t,y1,y2,y3,energy");
        std::string line, last;
        while (std::getline(in, line)) last = line;
        std::stringstream ss(last);
        std::string item;
        std::vector<double> vals;
        while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
        REQUIRE(vals.size() == 5);
        CHECK(vals[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(vals[1] == doctest::Approx(std::sin(2.0)).epsilon(1e-7));
        CHECK(vals[2] == doctest::Approx(std::cos(2.0)).epsilon(1e-7));
        CHECK(vals[3] == doctest::Approx(1.0).epsilon(1e-9));
    }

    // Pump with the midpoint rule: the energy column is constant to 1e-10.
    RunConfig pump;
    pump.command = "simulate";
    pump.gate = "pump";
    pump.y0 = "1,0";
    pump.integrator = "midpoint";
    pump.step = 1e-2;
    pump.t1 = 10.0;
    pump.out_path = (temp_dir() / "pump_traj.csv").string();
    CHECK(run_cli(pump) == 0);
    {
        std::ifstream in(pump.out_path);
        std::string line;
        std::getline(in, line);  // header
        double e0 = -1, worst = 0;
        while (std::getline(in, line)) {
            const auto pos = line.rfind(',');
            const double e = std::stod(line.substr(pos + 1));
            if (e0 < 0)
                e0 = e;
            else
                worst = std::max(worst, std::abs(e - e0));
        }
        CHECK(worst < 1e-10 * e0);
    }

    // Zero initial data: constant-zero rows.
    RunConfig zero = cfg;
    zero.y0 = "0,0,0";
    zero.out_path = (temp_dir() / "zero_traj.csv").string();
    zero.t1 = 0.1;
    CHECK(run_cli(zero) == 0);
    CHECK(read_file(zero.out_path).find("0,0,0,0,0\n") != std::string::npos);

    // Missing initial state: exit 2.
    RunConfig noy = cfg;
    noy.y0.clear();
    noy.out_path.clear();
    CHECK(run_cli(noy) == 2);

    // Blowup model: exit 1 and a trailing status comment in the file.
    RunConfig blow;
    blow.command = "simulate";
    blow.model_path = write_file("blow.json", R"({"n":2,"B":[[[1,0],[0,0]],
        [[0,0],[0,0]]],"y0":[1,0]})")
                          .string();
    blow.step = 0.05;
    blow.t1 = 50.0;
    blow.out_path = (temp_dir() / "blow_traj.csv").string();
    CHECK(run_cli(blow) == 1);
    CHECK(read_file(blow.out_path).find("# status: overflow") != std::string::npos);
}

TEST_CASE("cmd_simulate --particles emits an orthogonal flow") {
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.gate = "rotor";
    cfg.y0 = "0,1,1";
    cfg.step = 1e-2;
    cfg.t1 = 1.0;
    cfg.particles = true;
    cfg.out_path = (temp_dir() / "flow_traj.csv").string();
    CHECK(run_cli(cfg) == 0);
    const std::string particles = read_file(cfg.out_path + ".particles.csv");
    CHECK(particles.rfind("t,q_1_1", 0) == 0);
    // First row is the identity at t = 0.
    CHECK(particles.find("\n0,1,0,0,0,1,0,0,0,1\n") != std::string::npos);
}

TEST_CASE("cmd_embed and cmd_gates outputs") {
    RunConfig embed;
    embed.command = "embed";
    embed.gate = "rigid_body";
    embed.params = "I1=1,I2=2,I3=3";
    embed.out_path = (temp_dir() / "embed.json").string();
    CHECK(run_cli(embed) == 0);
    const std::string out = read_file(embed.out_path);
    CHECK(out.find("\"C\"") != std::string::npos);
    CHECK(out.find("\"S\"") != std::string::npos);
    CHECK(out.find("chart_base_points") != std::string::npos);

    RunConfig gates;
    gates.command = "gates";
    gates.out_path = (temp_dir() / "gates.txt").string();
    CHECK(run_cli(gates) == 0);
    CHECK(read_file(gates.out_path).find("rigid_body") != std::string::npos);

    RunConfig emit;
    emit.command = "gates";
    emit.gate = "pump";
    emit.params = "alpha=1.5";
    emit.out_path = (temp_dir() / "pump_model.json").string();
    CHECK(run_cli(emit) == 0);
    const Model m = load_model(emit.out_path);
    CHECK(m.B.n() == 2);
}

TEST_CASE("desk-scale n = 6 model certifies, verifies, and simulates via the CLI") {
    Rng gen(2024);
    Model model;
    model.B = oracle::random_conservative(6, gen);
    model.y0 = gen.normal_vector(6);
    const fs::path path = temp_dir() / "model6.json";
    {
        std::ofstream out(path);
        out << model_to_json(model);
    }

    RunConfig cert;
    cert.command = "certify";
    cert.model_path = path.string();
    cert.out_path = (temp_dir() / "cert6.json").string();
    CHECK(run_cli(cert) == 0);
    CHECK(read_file(cert.out_path).find("\"found\"") != std::string::npos);

    RunConfig ver = cert;
    ver.command = "verify";
    ver.samples = 40;
    ver.out_path = (temp_dir() / "verify6.jsonl").string();
    CHECK(run_cli(ver) == 0);
    CHECK(read_file(ver.out_path).find("\"pass\":false") == std::string::npos);

    RunConfig sim = cert;
    sim.command = "simulate";
    sim.integrator = "midpoint";
    sim.step = 0.01;
    sim.t1 = 5.0;
    sim.out_path = (temp_dir() / "traj6.csv").string();
    CHECK(run_cli(sim) == 0);
    std::ifstream in(sim.out_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,y1,y2,y3,y4,y5,y6,energy");
    double e0 = -1, worst = 0;
    while (std::getline(in, line)) {
        const double e = std::stod(line.substr(line.rfind(',') + 1));
        if (e0 < 0)
            e0 = e;
        else
            worst = std::max(worst, std::abs(e - e0));
    }
    CHECK(worst < 1e-10 * e0);
}

TEST_CASE("byte-identical outputs for identical config and seed") {
    RunConfig a;
    a.command = "verify";
    a.gate = "pump";
    a.samples = 20;
    a.seed = 9;
    a.out_path = (temp_dir() / "det_a.jsonl").string();
    RunConfig b = a;
    b.out_path = (temp_dir() / "det_b.jsonl").string();
    CHECK(run_cli(a) == run_cli(b));
    CHECK(read_file(a.out_path) == read_file(b.out_path));

    RunConfig c = a;
    c.command = "simulate";
    c.y0 = "1,0";
    c.t1 = 3.0;
    c.out_path = (temp_dir() / "det_c.csv").string();
    RunConfig d = c;
    d.out_path = (temp_dir() / "det_d.csv").string();
    CHECK(run_cli(c) == 0);
    CHECK(run_cli(d) == 0);
    CHECK(read_file(c.out_path) == read_file(d.out_path));
}
