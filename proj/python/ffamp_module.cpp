#include "ffamp/analysis.hpp"
#include "ffamp/montecarlo.hpp"
#include "ffamp/network.hpp"
#include "ffamp/psd.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

namespace py = pybind11;
using namespace ffamp;

namespace {

std::map<std::string, Complex> expansion_dict(const NetworkParams& p, double phi) {
    const auto e = output_expansion(p, phi);
    std::map<std::string, Complex> out;
    for (auto id : kAllNoiseModes) {
        if (e.contains(id)) out.emplace(std::string(to_string(id)), e.coefficient(id));
    }
    return out;
}

SimConfig make_sim(const NetworkParams& p, double sample_rate, double duration,
                   double signal_frequency, double signal_amplitude, std::uint64_t seed,
                   unsigned threads) {
    SimConfig c;
    c.params = p;
    c.sample_rate = sample_rate;
    c.duration = duration;
    c.signal_frequency = signal_frequency;
    c.signal_amplitude = signal_amplitude;
    c.seed = seed;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_ffamp, m) {
    m.doc() = "Noise model of electro-optic phase feed-forward amplification";

    py::class_<NetworkParams>(m, "NetworkParams")
        .def(py::init([](double epsilon, double eta_h1, double eta_d1, Complex gain,
                         double v_phase_in, double eta_det2) {
                 NetworkParams p{epsilon, eta_h1, eta_d1, gain, v_phase_in, eta_det2};
                 p.validate();
                 return p;
             }),
             py::arg("epsilon") = 1.0, py::arg("eta_h1") = 1.0, py::arg("eta_d1") = 1.0,
             py::arg("gain") = Complex{}, py::arg("v_phase_in") = 1.0, py::arg("eta_det2") = 1.0)
        .def_readwrite("epsilon", &NetworkParams::epsilon)
        .def_readwrite("eta_h1", &NetworkParams::eta_h1)
        .def_readwrite("eta_d1", &NetworkParams::eta_d1)
        .def_readwrite("gain", &NetworkParams::gain)
        .def_readwrite("v_phase_in", &NetworkParams::v_phase_in)
        .def_readwrite("eta_det2", &NetworkParams::eta_det2)
        .def("validate", &NetworkParams::validate)
        .def("__repr__", [](const NetworkParams& p) {
            return "NetworkParams(epsilon=" + std::to_string(p.epsilon) +
                   ", eta_h1=" + std::to_string(p.eta_h1) + ", eta_d1=" + std::to_string(p.eta_d1) +
                   ", gain=" + std::to_string(p.gain.real()) + "+" + std::to_string(p.gain.imag()) +
                   "j, v_phase_in=" + std::to_string(p.v_phase_in) +
                   ", eta_det2=" + std::to_string(p.eta_det2) + ")";
        });

    py::class_<SnrReport>(m, "SnrReport")
        .def_readonly("snr_detected_in", &SnrReport::snr_detected_in)
        .def_readonly("snr_inferred_in", &SnrReport::snr_inferred_in)
        .def_readonly("snr_detected_out", &SnrReport::snr_detected_out)
        .def_readonly("snr_inferred_out", &SnrReport::snr_inferred_out)
        .def_readonly("t_s", &SnrReport::t_s);

    py::class_<SweepTrace>(m, "SweepTrace")
        .def_readonly("phase", &SweepTrace::phase)
        .def_readonly("variance_linear", &SweepTrace::variance_linear)
        .def_readonly("variance_db", &SweepTrace::variance_db)
        .def_readonly("detected", &SweepTrace::detected)
        .def("__len__", &SweepTrace::size);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("k_fit", &FitResult::k_fit)
        .def_readonly("residual_rms", &FitResult::residual_rms)
        .def_readonly("iterations", &FitResult::iterations);

    py::class_<OracleRow>(m, "OracleRow")
        .def_readonly("phi", &OracleRow::phi)
        .def_readonly("mc_mean", &OracleRow::mc_mean)
        .def_readonly("mc_standard_error", &OracleRow::mc_standard_error)
        .def_readonly("analytic", &OracleRow::analytic)
        .def_readonly("analytic_paper", &OracleRow::analytic_paper)
        .def_readonly("z_score", &OracleRow::z_score)
        .def_readonly("passed", &OracleRow::pass);

    m.def("output_expansion", &expansion_dict, py::arg("params"), py::arg("phi"),
          "Nonzero output-quadrature coefficients keyed by noise-mode name.");
    m.def("spectrum_coefficient", &spectrum_coefficient, py::arg("params"), py::arg("phi"));
    m.def("spectrum_paper", &spectrum_paper, py::arg("params"), py::arg("phi"));
    m.def("phase_variance", &phase_variance, py::arg("params"));
    m.def("signal_power_gain", &signal_power_gain, py::arg("params"));
    m.def("ideal_gain", &ideal_gain, py::arg("epsilon"));
    m.def("optimal_gain", &optimal_gain, py::arg("epsilon"), py::arg("eta_h"), py::arg("eta_d"));
    m.def("transfer_ratio", &transfer_ratio, py::arg("params"), py::arg("signal_in") = 1.0);
    m.def("max_transfer_ratio", &max_transfer_ratio, py::arg("epsilon"), py::arg("eta_h"),
          py::arg("eta_d"));
    m.def("pia_transfer_ratio", &pia_transfer_ratio, py::arg("power_gain"));
    m.def("detected_variance", &detected_variance, py::arg("v"), py::arg("eta"));
    m.def(
        "infer_snr",
        [](double total_db, double noise_db, double eta) {
            const auto s = infer_snr(total_db, noise_db, eta);
            return py::make_tuple(s.detected, s.inferred);
        },
        py::arg("total_db"), py::arg("noise_db"), py::arg("eta"),
        "Returns (detected_snr, inferred_snr).");
    m.def(
        "report_snr",
        [](double in_total, double in_noise, double in_eta, double out_total, double out_noise,
           double out_eta) {
            return report_snr({in_total, in_noise, in_eta, out_total, out_noise, out_eta});
        },
        py::arg("input_total_db"), py::arg("input_noise_db"), py::arg("input_eta"),
        py::arg("output_total_db"), py::arg("output_noise_db"), py::arg("output_eta"));
    m.def(
        "run_sweep",
        [](const NetworkParams& p, std::size_t points, const std::string& formula, bool detected) {
            return run_sweep(p, points, parse_formula(formula), detected);
        },
        py::arg("params"), py::arg("points") = kDefaultSweepPoints, py::arg("formula") = "paper",
        py::arg("detected") = false);
    m.def(
        "fit_gain",
        [](const std::vector<double>& phase, const std::vector<double>& variance, bool detected,
           const NetworkParams& p, const std::string& formula, const std::string& domain) {
            SweepTrace t;
            t.phase = phase;
            t.variance_linear = variance;
            for (double v : variance) t.variance_db.push_back(db_from_linear(v));
            t.detected = detected;
            FitOptions o;
            o.formula = parse_formula(formula);
            o.domain = parse_fit_domain(domain);
            return fit_gain(t, p, o);
        },
        py::arg("phase"), py::arg("variance_linear"), py::arg("detected"), py::arg("params"),
        py::arg("formula") = "paper", py::arg("domain") = "linear");
    m.def(
        "oracle_compare",
        [](const NetworkParams& p, const std::vector<double>& phis, double sample_rate,
           double duration, double signal_frequency, double signal_amplitude, std::uint64_t seed,
           std::size_t segments, unsigned threads) {
            const auto c = make_sim(p, sample_rate, duration, signal_frequency, signal_amplitude,
                                    seed, threads);
            return oracle_compare(c, phis, segments).rows;
        },
        py::arg("params"), py::arg("phis"), py::arg("sample_rate") = 102.4e6,
        py::arg("duration") = 64.0 * 4096.0 / 102.4e6, py::arg("signal_frequency") = 25e6,
        py::arg("signal_amplitude") = 0.0, py::arg("seed") = 0, py::arg("segments") = kDefaultSegments,
        py::arg("threads") = 1);
    m.def(
        "estimate_psd",
        [](const std::vector<double>& series, std::size_t segments, double sample_rate) {
            const auto e = estimate_psd(series, segments, sample_rate);
            return py::make_tuple(e.frequencies, e.variance, e.standard_error);
        },
        py::arg("series"), py::arg("segments"), py::arg("sample_rate") = 1.0,
        "Returns (frequencies, variance, standard_error).");
}
