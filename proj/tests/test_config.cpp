#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sbo/dispatch.hpp"

using namespace sbo;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("parse: probe case defaults and forced nu") {
    const RunConfig cfg = parse_config(
        R"({"command":"probe-gateaux","case":"T13_a","N_list":[8,16,32,64,128]})");
    CHECK(cfg.command == Command::probe_gateaux);
    CHECK(cfg.nu == 1.0);  // resonant family pins |nu| = 1
    CHECK(cfg.s == 0.0);
    CHECK(cfg.s_prime == -1.0);
    CHECK(cfg.scales == std::vector<int>{8, 16, 32, 64, 128});

    // supplied inadmissible nu is rejected
    CHECK_THROWS_AS(parse_config(R"({"command":"probe-gateaux","case":"T13_a",
                                     "system":{"nu":0.5}})"),
                    config_error);
    // non-resonant family rejects |nu| = 1
    CHECK_THROWS_AS(parse_config(R"({"command":"probe-gateaux","case":"T12i_low",
                                     "system":{"nu":1.0}})"),
                    config_error);
}

TEST_CASE("parse: errors carry the offending path") {
    try {
        parse_config(R"({"command":"solve"})");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("grid.n") != std::string::npos);
    }
    try {
        parse_config(R"({"command":"solve","grid":{"n":64,"L":16,"dz":0.1}})");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("grid.dz") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("not json"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"command":"probe-bilinear"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"command":"probe-bilinear","case":"T99"})"), config_error);
}

TEST_CASE("parse: canonical round trip") {
    const RunConfig cfg = parse_config(
        R"({"command":"probe-bilinear","case":"T43","seed":42,"out":"x",
            "system":{"c":0.6},"N_list":[8,16,32,64,128]})");
    const RunConfig again = parse_config(emit_config(cfg));
    CHECK(cfg == again);
}

TEST_CASE("dispatch: bilinear failure probe writes csv and verdict") {
    RunConfig cfg = parse_config(
        R"({"command":"probe-bilinear","case":"T43","N_list":[8,16,32,64,128],
            "out":"t43_out","points_per_dim":6})");
    const DispatchOutcome out = dispatch(cfg);
    CHECK(out.exit_code == 0);
    const std::string csv = slurp("t43_out.csv");
    // header plus one row per scale
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.rfind("case,N,lhs_norm,rhs_norm,ratio,fitted_slope,predicted_exponent,verdict", 0) ==
          0);
    const std::string summary = slurp("t43_out_summary.txt");
    CHECK(summary.find("PASS") != std::string::npos);
    CHECK(slurp("t43_out_boxes.json").find("xi_center") != std::string::npos);
    std::remove("t43_out.csv");
    std::remove("t43_out_summary.txt");
    std::remove("t43_out_boxes.json");
}

TEST_CASE("dispatch: conserve on zero data passes with an all-zero series") {
    RunConfig cfg = parse_config(
        R"({"command":"conserve","grid":{"n":64,"L":16,"dt":0.01,"T":0.05},
            "data":{"kind":"zero"},"out":"zero_out"})");
    const DispatchOutcome out = dispatch(cfg);
    CHECK(out.exit_code == 0);
    const std::string csv = slurp("zero_out.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');  // t column varies
        while (std::getline(cells, cell, ',')) CHECK(std::stod(cell) == 0.0);
    }
    std::remove("zero_out.csv");
    std::remove("zero_out_summary.txt");
}

TEST_CASE("dispatch: identical config and seed reproduce byte-identical csv") {
    const char* doc =
        R"({"command":"probe-bilinear","case":"T42i","N_list":[8,16,32,64,128],
            "out":"det_a","seed":7,"points_per_dim":6})";
    RunConfig a = parse_config(doc);
    dispatch(a);
    RunConfig b = parse_config(doc);
    b.out_prefix = "det_b";
    dispatch(b);
    CHECK(slurp("det_a.csv") == slurp("det_b.csv"));
    for (const char* f : {"det_a.csv", "det_b.csv", "det_a_summary.txt", "det_b_summary.txt",
                          "det_a_boxes.json", "det_b_boxes.json"})
        std::remove(f);
}

TEST_CASE("initial data profiles land on the grid") {
    RunConfig cfg = parse_config(
        R"({"command":"solve","grid":{"n":64,"L":16},"data":{"kind":"single_mode",
            "mode_u":3,"amp_u":0.5,"mode_v":2,"amp_v":0.4}})");
    const SolutionState st = initial_state(cfg);
    CHECK(std::abs(st.u.at_mode(3) - cplx(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(st.v.at_mode(2) - cplx(0.2, 0.0)) < 1e-15);
    CHECK(st.v.real_field);
    CHECK(conjugate_symmetry_defect(st.v) == 0.0);
}
