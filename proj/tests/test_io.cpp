#include "ffamp/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace ffamp;
using doctest::Approx;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("ffamp_io_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("numbers use 12 significant digits") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(format_number(3.14159265358979) == "3.14159265359");
    CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("sweep CSV layout") {
    std::ostringstream empty;
    write(empty, to_table(SweepTrace{}), OutputFormat::Csv);
    CHECK(empty.str() == "phase_rad,variance_linear,variance_db\n");

    SweepTrace t{{0.0, 1.0, 2.0}, {1.0, 10.0, 100.0}, {0.0, 10.0, 20.0}, false};
    std::ostringstream os;
    write(os, to_table(t), OutputFormat::Csv);
    CHECK(os.str() == "phase_rad,variance_linear,variance_db\n0,1,0\n1,10,10\n2,100,20\n");
}

TEST_CASE("sweep CSV parses back") {
    const NetworkParams p{0.2, 0.94, 0.91, 3.2, 7.244, 0.8008};
    const auto t = run_sweep(p, 50, SpectrumFormula::Paper, true);
    std::stringstream ss;
    write(ss, to_table(t), OutputFormat::Csv);
    const auto back = parse_sweep_csv(ss, true);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back.variance_linear[i] == Approx(t.variance_linear[i]).epsilon(1e-11));
    }
    std::istringstream bad("phase,variance\n");
    CHECK_THROWS_AS(parse_sweep_csv(bad, false), std::invalid_argument);
    std::istringstream garbled("phase_rad,variance_linear,variance_db\n0;1;0\n");
    CHECK_THROWS_AS(parse_sweep_csv(garbled, false), std::invalid_argument);
}

TEST_CASE("property: SNR report JSON round-trips to 1e-10") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1e-3, 1e3);
    for (int trial = 0; trial < 100; ++trial) {
        const SnrReport r{u(rng), u(rng), u(rng), u(rng), u(rng)};
        std::ostringstream os;
        write(os, to_record(r), OutputFormat::Json);
        const auto back = parse_snr_report_json(os.str());
        CHECK(back.snr_detected_in == Approx(r.snr_detected_in).epsilon(1e-10));
        CHECK(back.snr_inferred_in == Approx(r.snr_inferred_in).epsilon(1e-10));
        CHECK(back.snr_detected_out == Approx(r.snr_detected_out).epsilon(1e-10));
        CHECK(back.snr_inferred_out == Approx(r.snr_inferred_out).epsilon(1e-10));
        CHECK(back.t_s == Approx(r.t_s).epsilon(1e-10));
    }
    CHECK_THROWS_AS(parse_snr_report_json("{\"t_s\": 1}"), std::invalid_argument);
}

TEST_CASE("emit writes deterministic bytes and no partial files") {
    TempDir dir;
    const SweepTrace t{{0.0, 1.0}, {1.0, 2.0}, {0.0, db_from_linear(2.0)}, false};
    const auto a = dir.path / "a.csv";
    const auto b = dir.path / "b.csv";
    emit(to_table(t), a, OutputFormat::Csv);
    emit(to_table(t), b, OutputFormat::Csv);
    CHECK(read_file(a) == read_file(b));
    CHECK(read_file(a).find("3.01029995664") != std::string::npos);

    const auto missing = dir.path / "no_such_dir" / "x.json";
    CHECK_THROWS_AS(emit(to_record(SnrReport{}), missing, OutputFormat::Json), std::runtime_error);
    CHECK_FALSE(std::filesystem::exists(missing));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path)) ++files;
    CHECK(files == 2);
}

TEST_CASE("config parsing") {
    const auto c = parse_config(R"({
        "network": {"epsilon": 0.2, "eta_h1": 0.94, "eta_d1": 0.91, "gain": 3.2,
                    "v_phase_in_db": 8.6, "eta_h2": 0.88, "eta_d2": 0.91},
        "sweep": {"points": 101, "formula": "coefficient", "detected": true},
        "snr": {"input": {"total_db": 8.0, "noise_db": 0.0},
                "output": {"total_db": 17.6, "noise_db": 9.5}},
        "montecarlo": {"seed": 18446744073709551615, "segments": 32,
                       "kernel": {"type": "bandpass", "center_hz": 25e6, "bandwidth_hz": 1e6, "gain": 3.2}}
    })");
    CHECK(c.network.epsilon == 0.2);
    CHECK(c.network.v_phase_in == Approx(7.2443596007).epsilon(1e-10));
    CHECK(c.network.eta_det2 == Approx(0.8008).epsilon(1e-14));
    CHECK(c.sweep_points == 101);
    CHECK(c.formula == SpectrumFormula::Coefficient);
    CHECK(c.detected);
    REQUIRE(c.snr.has_value());
    CHECK(c.snr->input_eta == Approx(0.8554).epsilon(1e-14));
    CHECK(c.snr->output_eta == Approx(0.8008).epsilon(1e-14));
    CHECK(c.simulation.seed == 18446744073709551615ULL);
    CHECK(c.mc_segments == 32);
    CHECK(std::holds_alternative<BandpassKernel>(c.simulation.kernel));
    CHECK(c.simulation.params.gain == Complex(3.2, 0.0));

    const auto complex_gain = parse_config(R"({"network": {"epsilon": 0.5, "gain": [1.0, -0.5]}})");
    CHECK(complex_gain.network.gain == Complex(1.0, -0.5));
    const auto defaults = parse_config("{}");
    CHECK(defaults.sweep_points == 361);
    CHECK(defaults.simulation.sample_count() == 64 * 4096);
}

TEST_CASE("config rejects bad documents") {
    CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"netwrk": {}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"network": {"epsilon": 80}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"network": {"epsilon": "0.2"}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"network": {"eta_det2": 0.8, "eta_h2": 0.9}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"formula": "eq9"}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"sweep": {"points": -3}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"montecarlo": {"kernel": {"type": "notch"}}})"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/ffamp.json"), std::runtime_error);
}
