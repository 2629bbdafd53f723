#include "ffamp/network.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

using namespace ffamp;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Experimental operating point.
NetworkParams experiment(double k = 3.2, double v = 1.0) {
    NetworkParams p;
    p.epsilon = 0.2;
    p.eta_h1 = 0.94;
    p.eta_d1 = 0.91;
    p.gain = k;
    p.v_phase_in = v;
    p.eta_det2 = 0.88 * 0.91;
    return p;
}

NetworkParams ideal(double eps, double k, double v = 1.0) {
    NetworkParams p;
    p.epsilon = eps;
    p.gain = k;
    p.v_phase_in = v;
    return p;
}

double coeff(const QuadratureExpansion& e, NoiseModeId id) { return e.coefficient(id).real(); }

}  // namespace

TEST_CASE("NetworkParams validation") {
    NetworkParams p;
    CHECK_NOTHROW(p.validate());
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.eta_h1 = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.v_phase_in = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.eta_det2 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("output_expansion: identity channel") {
    for (double phi : {0.0, 0.3, kPi / 2, 2.0, kPi}) {
        const auto e = output_expansion(ideal(1.0, 0.0), phi);
        CHECK(coeff(e, NoiseModeId::InputAmplitude) == Approx(std::cos(phi)).epsilon(1e-15));
        CHECK(coeff(e, NoiseModeId::InputPhase) == Approx(std::sin(phi)).epsilon(1e-15));
        CHECK_FALSE(e.contains(NoiseModeId::TapVacuumAmplitude));
        CHECK_FALSE(e.contains(NoiseModeId::HomodyneMismatchPhase));
    }
}

TEST_CASE("output_expansion: cancellation gain removes the tap vacuum") {
    const auto e = output_expansion(ideal(0.2, 2.0), kPi / 2);
    CHECK(coeff(e, NoiseModeId::InputPhase) == Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(std::abs(e.coefficient(NoiseModeId::TapVacuumPhase)) <= 1e-15);
}

TEST_CASE("output_expansion: experiment operating point matches the propagated chain") {
    const auto e = output_expansion(experiment(), kPi / 2);
    // Frozen from oracle::propagate_chain.
    CHECK(coeff(e, NoiseModeId::InputPhase) == Approx(3.094369956578767).epsilon(1e-13));
    CHECK(coeff(e, NoiseModeId::TapVacuumPhase) == Approx(0.4291509895394886).epsilon(1e-13));
    CHECK(coeff(e, NoiseModeId::HomodyneMismatchPhase) == Approx(0.7477325725150674).epsilon(1e-13));
    CHECK(coeff(e, NoiseModeId::DetectorVacuum1) == Approx(0.6788225099390854).epsilon(1e-13));
    CHECK(coeff(e, NoiseModeId::DetectorVacuum2) == Approx(0.6788225099390854).epsilon(1e-13));
    CHECK(std::abs(coeff(e, NoiseModeId::InputAmplitude)) < 1e-15);
}

TEST_CASE("property: output_expansion agrees with the propagated chain") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    std::uniform_real_distribution<double> gain(-5.0, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        NetworkParams p;
        p.epsilon = unit(rng);
        p.eta_h1 = unit(rng);
        p.eta_d1 = unit(rng);
        p.gain = Complex(gain(rng), trial % 3 == 0 ? gain(rng) : 0.0);
        const double phi = angle(rng);
        const auto e = output_expansion(p, phi);
        const auto ref = oracle::propagate_chain(p.epsilon, p.eta_h1, p.eta_d1, p.gain, phi);
        for (auto id : kAllNoiseModes) {
            CHECK(std::abs(e.coefficient(id) - ref[static_cast<std::size_t>(id)]) <= 1e-12);
        }
    }
}

TEST_CASE("spectrum_coefficient examples") {
    for (double phi : {0.0, 1.0, kPi / 2}) {
        CHECK(spectrum_coefficient(ideal(0.3, 0.0), phi) == Approx(1.0).epsilon(1e-14));
    }
    CHECK(spectrum_coefficient(ideal(0.2, 2.0), kPi / 2) == Approx(5.0).epsilon(1e-14));
    const double s = spectrum_coefficient(experiment(), kPi / 2);
    CHECK(s == Approx(11.24).epsilon(1e-12));
    CHECK(s == Approx(9.575125428177278 + 0.4291509895394886 * 0.4291509895394886 + 1.480704).epsilon(1e-12));
}

TEST_CASE("spectrum_paper examples") {
    CHECK(spectrum_paper(experiment(3.2, 7.244), 0.0) == Approx(1.0).epsilon(1e-14));
    CHECK(spectrum_paper(ideal(0.2, 2.0), kPi / 2) == Approx(5.0).epsilon(1e-14));
    const double v = std::pow(10.0, 0.86);
    // Frozen from oracle::row_variance on the propagated chain.
    CHECK(spectrum_paper(experiment(3.2, v), kPi / 2) == Approx(71.03052639582329).epsilon(1e-12));
    const auto chain = oracle::propagate_chain(0.2, 0.94, 0.91, 3.2, kPi / 2);
    CHECK(spectrum_paper(experiment(3.2, v), kPi / 2) ==
          Approx(oracle::row_variance(chain, v)).epsilon(1e-12));
}

TEST_CASE("property: the two spectrum forms coincide on the axes and at V = 1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::uniform_real_distribution<double> gain(-5.0, 5.0);
    std::uniform_real_distribution<double> var(1.0, 50.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    for (int trial = 0; trial < 300; ++trial) {
        NetworkParams p;
        p.epsilon = unit(rng);
        p.eta_h1 = unit(rng);
        p.eta_d1 = unit(rng);
        p.gain = gain(rng);
        p.v_phase_in = var(rng);
        for (double phi : {0.0, kPi / 2, kPi, 3 * kPi / 2}) {
            CHECK(std::abs(spectrum_paper(p, phi) - spectrum_coefficient(p, phi)) <=
                  1e-12 * std::max(1.0, spectrum_coefficient(p, phi)));
        }
        p.v_phase_in = 1.0;
        const double phi = angle(rng);
        CHECK(std::abs(spectrum_paper(p, phi) - spectrum_coefficient(p, phi)) <= 1e-12);
    }
}

TEST_CASE("spectrum forms diverge at intermediate angles when V > 1") {
    const auto p = experiment(3.2, 7.244);
    CHECK(std::abs(spectrum_paper(p, kPi / 4) - spectrum_coefficient(p, kPi / 4)) > 1e-3);
}

TEST_CASE("phase_variance") {
    CHECK(phase_variance(ideal(0.4, 0.0)) == Approx(1.0).epsilon(1e-15));
    for (double v : {1.0, 3.0, 7.244}) {
        CHECK(phase_variance(ideal(0.2, 2.0, v)) == Approx(5.0 * v).epsilon(1e-13));
    }
    CHECK(phase_variance(experiment()) == Approx(11.24).epsilon(1e-12));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = experiment(4.0 * unit(rng), 1.0 + 10.0 * unit(rng));
        p.epsilon = unit(rng);
        CHECK(phase_variance(p) == Approx(spectrum_coefficient(p, kPi / 2)).epsilon(1e-13));
    }
}

TEST_CASE("ideal and optimal gains") {
    CHECK(ideal_gain(0.5) == 1.0);
    CHECK(ideal_gain(1.0) == 0.0);
    CHECK(ideal_gain(0.2) == Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(ideal_gain(0.0), std::invalid_argument);
    for (double eps : {0.1, 0.3, 0.7}) CHECK(optimal_gain(eps, 1.0, 1.0) == ideal_gain(eps));
    CHECK(optimal_gain(0.2, 0.94, 0.91) == Approx(1.8497567407634985).epsilon(1e-14));
    CHECK(optimal_gain(0.5, 0.5, 0.5) == Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(optimal_gain(0.0, 0.9, 0.9), std::invalid_argument);
}

TEST_CASE("transfer_ratio") {
    for (double eps : {0.1, 0.2, 0.6}) {
        for (double s : {0.1, 5.0}) {
            CHECK(transfer_ratio(ideal(eps, ideal_gain(eps)), s) == Approx(1.0).epsilon(1e-13));
        }
        CHECK(transfer_ratio(ideal(eps, 0.0), 1.0) == Approx(eps).epsilon(1e-14));
    }
    const auto p = experiment(optimal_gain(0.2, 0.94, 0.91));
    CHECK(transfer_ratio(p, 1.0) == Approx(0.88432).epsilon(1e-12));
    CHECK(transfer_ratio(p, 1.0) ==
          Approx(oracle::chain_transfer_ratio(0.2, 0.94, 0.91, p.gain.real())).epsilon(1e-12));
    CHECK_THROWS_AS(transfer_ratio(p, 0.0), std::invalid_argument);
}

TEST_CASE("property: transfer ratio bounds and signal independence") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.02, 1.0);
    std::uniform_real_distribution<double> gain(-6.0, 6.0);
    for (int trial = 0; trial < 500; ++trial) {
        NetworkParams p;
        p.epsilon = unit(rng);
        p.eta_h1 = unit(rng);
        p.eta_d1 = unit(rng);
        p.gain = gain(rng);
        const double t = transfer_ratio(p, 1.0);
        CHECK(t >= 0.0);
        CHECK(t <= 1.0 + 1e-12);
        CHECK(transfer_ratio(p, 1e-3) == Approx(t).epsilon(1e-13));
        CHECK(transfer_ratio(p, 1e3) == Approx(t).epsilon(1e-13));
        CHECK(t <= max_transfer_ratio(p.epsilon, p.eta_h1, p.eta_d1) + 1e-12);
    }
}

TEST_CASE("max_transfer_ratio") {
    CHECK(max_transfer_ratio(0.3, 1.0, 1.0) == 1.0);
    CHECK(max_transfer_ratio(1.0, 0.5, 0.7) == Approx(1.0).epsilon(1e-15));
    CHECK(max_transfer_ratio(0.2, 0.94, 0.91) == Approx(0.88432).epsilon(1e-14));
    // Monotone in eta_h eta_d and in epsilon.
    double prev = 0.0;
    for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
        const double t = max_transfer_ratio(0.2, eta, 1.0);
        CHECK(t >= prev);
        prev = t;
    }
    prev = 0.0;
    for (double eps = 0.05; eps <= 1.0; eps += 0.05) {
        const double t = max_transfer_ratio(eps, 0.8, 0.9);
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("brute-force gain scan peaks at the optimal gain") {
    for (auto [eps, eh, ed] : {std::tuple{0.2, 0.94, 0.91}, std::tuple{0.5, 0.6, 0.8},
                               std::tuple{0.1, 0.99, 0.95}}) {
        const double k_opt = optimal_gain(eps, eh, ed);
        const double step = 1e-4;
        double best_k = 0.0;
        double best_t = -1.0;
        for (double k = 0.0; k <= 3.0 * k_opt; k += step) {
            const double t = oracle::chain_transfer_ratio(eps, eh, ed, k);
            if (t > best_t) {
                best_t = t;
                best_k = k;
            }
        }
        CHECK(std::abs(best_k - k_opt) <= step);
        CHECK(std::abs(best_t - max_transfer_ratio(eps, eh, ed)) <= 1e-6);
    }
}

TEST_CASE("pia_transfer_ratio") {
    CHECK(pia_transfer_ratio(1.0) == 1.0);
    CHECK(pia_transfer_ratio(10.0) == Approx(0.5263).epsilon(1e-4));
    CHECK(std::abs(pia_transfer_ratio(1e9) - 0.5) < 1e-9);
    CHECK_THROWS_AS(pia_transfer_ratio(0.5), std::invalid_argument);
}

TEST_CASE("detected_variance") {
    for (double eta : {0.1, 0.5, 1.0}) CHECK(detected_variance(1.0, eta) == Approx(1.0).epsilon(1e-15));
    const double eta2 = 0.88 * 0.91;
    CHECK(detected_variance(11.24, eta2) == Approx(9.200192).epsilon(1e-12));
    CHECK(db_from_linear(detected_variance(11.24, eta2)) == Approx(9.64).epsilon(1e-3));
    const double signal = detected_variance(71.03052639582329, eta2);
    CHECK(signal == Approx(57.08044553777529).epsilon(1e-12));
    CHECK(db_from_linear(signal) == Approx(17.56).epsilon(1e-3));
    CHECK_THROWS_AS(detected_variance(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("infer_snr") {
    const auto in = infer_snr(8.0, 0.0, 0.94 * 0.91);
    CHECK(in.detected == Approx(std::pow(10.0, 0.8) - 1.0).epsilon(1e-14));
    CHECK(in.inferred == Approx(6.21).epsilon(1e-3));
    const auto out = infer_snr(17.6, 9.5, 0.88 * 0.91);
    CHECK(out.inferred == Approx(5.58).epsilon(1e-3));
    const auto none = infer_snr(4.0, 4.0, 0.8);
    CHECK(none.detected == 0.0);
    CHECK(none.inferred == 0.0);
    CHECK_THROWS_AS(infer_snr(3.0, 4.0, 0.8), std::invalid_argument);
    // Noise at -10 dB lies below the 1 - eta = 0.5 loss floor.
    CHECK_THROWS_AS(infer_snr(0.0, -10.0, 0.5), std::invalid_argument);
}

TEST_CASE("property: inference inverts the detection model") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    std::uniform_real_distribution<double> snr(0.01, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double eta = unit(rng);
        const double noise = 1.0 + 20.0 * unit(rng);
        const double s = snr(rng);
        const double total = noise * (1.0 + s);
        const auto st = infer_snr(db_from_linear(detected_variance(total, eta)),
                                  db_from_linear(detected_variance(noise, eta)), eta);
        CHECK(std::abs(st.inferred - s) <= 1e-10 * std::max(1.0, s));
    }
}
