#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "eocavity/errors.hpp"
#include "eocavity/io.hpp"
#include "json.hpp"

using namespace eocavity;

TEST_CASE("doubles survive a format round trip") {
    const std::vector<double> values = {0.0,     -0.0,   0.1,       1.0 / 3.0,
                                        1e300,   -1e300, 6.5e10,    9.302e9,
                                        1.5e-12, 2.138,  0.0167076, 1e-300};
    for (double v : values) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("json writer produces parseable nested structure") {
    JsonWriter w;
    w.begin_object()
        .field("alpha", 1.5)
        .field("beta", std::string("tex\"t\n"))
        .begin_object("nested")
        .field("count", 3)
        .field("flag", true)
        .end_object()
        .begin_array("arr");
    w.element(1.0).element(2.0).element(std::string("three"));
    w.end_array().end_object();

    const auto j = nlohmann::json::parse(w.str());
    CHECK(j["alpha"] == 1.5);
    CHECK(j["beta"] == "tex\"t\n");
    CHECK(j["nested"]["count"] == 3);
    CHECK(j["nested"]["flag"] == true);
    CHECK(j["arr"].size() == 3);
    CHECK(j["arr"][2] == "three");
}

TEST_CASE("csv headers are part of the contract") {
    OpticalMode m;
    m.freq = 1.934e14;
    m.longitudinal_index = 4;
    m.A = 1.4;
    m.L_eff = 5e-3;
    m.kappa_o = 4.1e6;
    m.kappa_o_ext = 2.8e6;
    const std::string oc = optical_modes_csv({m});
    CHECK(oc.rfind("index,freq_hz,A,L_eff_m,kappa_o_hz,kappa_o_ext_hz\n", 0) == 0);
    CHECK(oc.find("193400000000000") != std::string::npos);

    MicrowaveMode mm;
    mm.indices = {1, 3, 1};
    mm.freq = 9.756e9;
    mm.V_m = 54.7e-9;
    mm.kappa_m = 8.9e6;
    const std::string mc = microwave_modes_csv({mm});
    CHECK(mc.rfind("l,m,p,freq_hz,V_m_mm3,kappa_m_hz\n", 0) == 0);
    CHECK(mc.find("54.7") != std::string::npos);  // emitted in mm^3

    SweepResult s;
    s.axis1 = {1.0, 2.0};
    s.axis2 = {10.0, 20.0};
    s.magnitude = {0.1, 0.2, 0.3, 0.4};
    s.flagged = {0, 0};
    s.axis1_name = "air_gap_m";
    s.axis2_name = "drive_freq_hz";
    const std::string sc = sweep_csv(s);
    CHECK(sc.rfind("air_gap_m,drive_freq_hz,magnitude\n", 0) == 0);
    // Long form: axis1-major ordering, one row per cell.
    CHECK(sc.find("\n1,10,0.10000000000000001\n") != std::string::npos);
    CHECK(sc.find("\n2,20,0.40000000000000002\n") != std::string::npos);

    const std::string pc = spectrum_csv({1.0, 2.0}, {0.5, 0.25}, "efficiency");
    CHECK(pc.rfind("freq_hz,efficiency\n", 0) == 0);
}

TEST_CASE("trace csv round trip") {
    Trace t;
    for (int i = 0; i < 16; ++i) {
        t.freq.push_back(9.3e9 + 1e6 * i);
        t.value.push_back(0.001 * (i + 1));
    }
    const std::string csv = trace_csv(t);
    CHECK(csv.rfind("freq_hz,magnitude\n", 0) == 0);
    const Trace back = read_trace_csv(csv, "round trip");
    REQUIRE(back.freq.size() == t.freq.size());
    for (std::size_t i = 0; i < t.freq.size(); ++i) {
        CHECK(back.freq[i] == t.freq[i]);
        CHECK(back.value[i] == t.value[i]);
    }
}

TEST_CASE("trace csv tolerates CRLF and reports bad lines") {
    std::string csv = "freq_hz,magnitude\r\n";
    for (int i = 0; i < 10; ++i)
        csv += std::to_string(1e9 + i * 1e6) + "," + std::to_string(0.1 * i) + "\r\n";
    CHECK_NOTHROW(read_trace_csv(csv, "crlf"));

    std::string bad = "freq_hz,magnitude\n1e9,0.1\n1.1e9,oops\n";
    try {
        read_trace_csv(bad, "bad.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        const std::string what = e.what();
        CHECK(what.find("bad.csv") != std::string::npos);
        CHECK(what.find("3") != std::string::npos);  // 1-based line number
    }

    // Too few rows for a fit is an input error at read time.
    CHECK_THROWS_AS(read_trace_csv("freq_hz,magnitude\n1e9,0.1\n", "short"), IoError);
}

TEST_CASE("atomic writes leave no temporary behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "eocavity_io_test";
    fs::create_directories(dir);
    const fs::path target = dir / "artifact.json";
    write_file_atomic(target.string(), "{\"ok\":true}\n");
    CHECK(read_file(target.string()) == "{\"ok\":true}\n");
    int extras = 0;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path() != target) ++extras;
    CHECK(extras == 0);
    fs::remove_all(dir);

    CHECK_THROWS_AS(write_file_atomic("/nonexistent_dir_zz/x.json", "x"), IoError);
    CHECK_THROWS_AS(read_file("/nonexistent_dir_zz/x.json"), IoError);
}

TEST_CASE("fit result json carries parameters and covariance") {
    FitResult r;
    r.param_names = {"a", "b"};
    r.params = {1.5, 2.5};
    r.covariance = {0.01, 0.001, 0.001, 0.04};
    r.residual_norm = 1e-9;
    r.converged = true;
    r.iterations = 7;
    r.condition_number = 123.0;
    r.message = "gradient below tolerance";
    const auto j = nlohmann::json::parse(fit_result_json(r));
    CHECK(j["params"]["a"] == 1.5);
    CHECK(j["params"]["b"] == 2.5);
    CHECK(j["uncertainty"]["a"] == doctest::Approx(0.1));
    CHECK(j["uncertainty"]["b"] == doctest::Approx(0.2));
    CHECK(j["covariance"].size() == 4);
    CHECK(j["converged"] == true);
    CHECK(j["iterations"] == 7);
    CHECK(j["message"] == "gradient below tolerance");
}

TEST_CASE("hash is the reference FNV-1a") {
    CHECK(fnv1a_hash("") == 14695981039346656037ull);
    CHECK(fnv1a_hash("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a_hash("hello") != fnv1a_hash("hellp"));
}
