#include "ffamp/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace ffamp {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv|json)");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

std::string json_number(double x) {
    // JSON has no NaN/Inf literal.
    return std::isfinite(x) ? format_number(x) : "null";
}

std::string json_string(const std::string& s) { return json(s).dump(); }

}  // namespace

Table to_table(const SweepTrace& trace) {
    Table t{{"phase_rad", "variance_linear", "variance_db"}, {}};
    t.rows.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        t.rows.push_back({trace.phase[i], trace.variance_linear[i], trace.variance_db[i]});
    }
    return t;
}

Table to_table(const OracleReport& report) {
    Table t{{"phi_rad", "mc_mean", "mc_standard_error", "analytic", "analytic_paper", "z_score",
             "pass"},
            {}};
    for (const auto& r : report.rows) {
        t.rows.push_back({r.phi, r.mc_mean, r.mc_standard_error, r.analytic, r.analytic_paper,
                          r.z_score, r.pass ? 1.0 : 0.0});
    }
    return t;
}

Table to_table(const FormulaComparison& c) {
    Table t{{"phase_rad", "spectrum_paper", "spectrum_coefficient", "difference"}, {}};
    for (std::size_t i = 0; i < c.phase.size(); ++i) {
        t.rows.push_back({c.phase[i], c.paper[i], c.coefficient[i], c.paper[i] - c.coefficient[i]});
    }
    return t;
}

Record to_record(const SnrReport& r) {
    return {{"snr_detected_in", r.snr_detected_in},
            {"snr_inferred_in", r.snr_inferred_in},
            {"snr_detected_out", r.snr_detected_out},
            {"snr_inferred_out", r.snr_inferred_out},
            {"t_s", r.t_s}};
}

Record to_record(const FitResult& f) {
    return {{"k_fit", f.k_fit},
            {"residual_rms", f.residual_rms},
            {"iterations", static_cast<double>(f.iterations)}};
}

void write(std::ostream& os, const Table& table, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << (c ? "," : "") << table.columns[c];
        }
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
            os << '\n';
        }
        return;
    }
    os << "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << (r ? ",\n " : "\n ") << "{";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << (c ? ", " : "") << json_string(table.columns[c]) << ": "
               << json_number(table.rows[r][c]);
        }
        os << "}";
    }
    os << (table.rows.empty() ? "]\n" : "\n]\n");
}

void write(std::ostream& os, const Record& record, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        os << "key,value\n";
        for (const auto& [k, v] : record) os << k << ',' << format_number(v) << '\n';
        return;
    }
    os << "{";
    for (std::size_t i = 0; i < record.size(); ++i) {
        os << (i ? ",\n  " : "\n  ") << json_string(record[i].first) << ": "
           << json_number(record[i].second);
    }
    os << (record.empty() ? "}\n" : "\n}\n");
}

namespace {

template <typename T>
void emit_atomically(const T& value, const std::filesystem::path& path, OutputFormat format) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        write(os, value, format);
        os.flush();
        if (!os) {
            os.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at '" + path.string() + "'");
    }
}

}  // namespace

void emit(const Table& table, const std::filesystem::path& path, OutputFormat format) {
    emit_atomically(table, path, format);
}

void emit(const Record& record, const std::filesystem::path& path, OutputFormat format) {
    emit_atomically(record, path, format);
}

SnrReport parse_snr_report_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("SNR report: ") + e.what());
    }
    auto get = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number()) {
            throw std::invalid_argument(std::string("SNR report: missing numeric '") + key + "'");
        }
        return j[key].get<double>();
    };
    return {get("snr_detected_in"), get("snr_inferred_in"), get("snr_detected_out"),
            get("snr_inferred_out"), get("t_s")};
}

SweepTrace parse_sweep_csv(std::istream& is, bool detected) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("sweep CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "phase_rad,variance_linear,variance_db") {
        throw std::invalid_argument("sweep CSV: unexpected header '" + line + "'");
    }
    SweepTrace t;
    t.detected = detected;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[3];
        char sep1 = 0, sep2 = 0;
        if (!(row >> v[0] >> sep1 >> v[1] >> sep2 >> v[2]) || sep1 != ',' || sep2 != ',') {
            throw std::invalid_argument("sweep CSV: malformed line " + std::to_string(lineno));
        }
        t.phase.push_back(v[0]);
        t.variance_linear.push_back(v[1]);
        t.variance_db.push_back(v[2]);
    }
    t.validate();
    return t;
}

SweepTrace read_sweep_csv(const std::filesystem::path& path, bool detected) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    return parse_sweep_csv(is, detected);
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return item.key() == a; });
        if (!known) {
            throw std::invalid_argument("config: unknown key '" + where + "." + item.key() + "'");
        }
    }
}

double number_at(const json& obj, const std::string& where, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw std::invalid_argument("config: '" + where + "." + key + "' must be a number");
    }
    return v.get<double>();
}

template <typename T>
void read_if(const json& obj, const std::string& where, const char* key, T& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("config: '" + where + "." + key + "' must be a boolean");
        out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw std::invalid_argument("config: '" + where + "." + key +
                                        "' must be a nonnegative integer");
        }
        out = v.get<T>();
    } else {
        out = static_cast<T>(number_at(obj, where, key));
    }
}

NetworkParams parse_network(const json& j) {
    reject_unknown_keys(j, "network",
                        {"epsilon", "eta_h1", "eta_d1", "gain", "v_phase_in", "v_phase_in_db",
                         "eta_det2", "eta_h2", "eta_d2"});
    NetworkParams p;
    read_if(j, "network", "epsilon", p.epsilon);
    read_if(j, "network", "eta_h1", p.eta_h1);
    read_if(j, "network", "eta_d1", p.eta_d1);
    if (j.contains("gain")) {
        const auto& g = j.at("gain");
        if (g.is_number()) {
            p.gain = g.get<double>();
        } else if (g.is_array() && g.size() == 2 && g[0].is_number() && g[1].is_number()) {
            p.gain = Complex(g[0].get<double>(), g[1].get<double>());
        } else {
            throw std::invalid_argument("config: 'network.gain' must be a number or [re, im]");
        }
    }
    if (j.contains("v_phase_in") && j.contains("v_phase_in_db")) {
        throw std::invalid_argument("config: give v_phase_in or v_phase_in_db, not both");
    }
    read_if(j, "network", "v_phase_in", p.v_phase_in);
    if (j.contains("v_phase_in_db")) p.v_phase_in = linear_from_db(number_at(j, "network", "v_phase_in_db"));
    if (j.contains("eta_det2")) {
        if (j.contains("eta_h2") || j.contains("eta_d2")) {
            throw std::invalid_argument("config: give eta_det2 or eta_h2/eta_d2, not both");
        }
        p.eta_det2 = number_at(j, "network", "eta_det2");
    } else {
        double h2 = 1.0, d2 = 1.0;
        read_if(j, "network", "eta_h2", h2);
        read_if(j, "network", "eta_d2", d2);
        p.eta_det2 = h2 * d2;
    }
    p.validate();
    return p;
}

FeedForwardKernel parse_kernel(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw std::invalid_argument("config: 'montecarlo.kernel.type' must be flat|bandpass");
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "flat") {
        reject_unknown_keys(j, "montecarlo.kernel", {"type", "delay_samples"});
        FlatKernel k;
        read_if(j, "montecarlo.kernel", "delay_samples", k.delay_samples);
        return k;
    }
    if (type == "bandpass") {
        reject_unknown_keys(j, "montecarlo.kernel", {"type", "center_hz", "bandwidth_hz", "gain"});
        BandpassKernel k;
        k.center_hz = number_at(j, "montecarlo.kernel", "center_hz");
        k.bandwidth_hz = number_at(j, "montecarlo.kernel", "bandwidth_hz");
        k.gain = number_at(j, "montecarlo.kernel", "gain");
        return k;
    }
    throw std::invalid_argument("config: unknown kernel type '" + type + "'");
}

SnrLevels parse_snr(const json& j, const NetworkParams& p) {
    reject_unknown_keys(j, "snr", {"input", "output"});
    SnrLevels s;
    s.input_eta = p.eta1();
    s.output_eta = p.eta_det2;
    const auto& in = j.at("input");
    reject_unknown_keys(in, "snr.input", {"total_db", "noise_db", "eta"});
    s.input_total_db = number_at(in, "snr.input", "total_db");
    s.input_noise_db = number_at(in, "snr.input", "noise_db");
    read_if(in, "snr.input", "eta", s.input_eta);
    const auto& out = j.at("output");
    reject_unknown_keys(out, "snr.output", {"total_db", "noise_db", "eta"});
    s.output_total_db = number_at(out, "snr.output", "total_db");
    s.output_noise_db = number_at(out, "snr.output", "noise_db");
    read_if(out, "snr.output", "eta", s.output_eta);
    return s;
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    try {
        reject_unknown_keys(j, "<root>", {"network", "spectrum", "sweep", "fit", "snr", "montecarlo"});
        Config c;
        if (j.contains("network")) c.network = parse_network(j.at("network"));
        if (j.contains("spectrum")) {
            reject_unknown_keys(j.at("spectrum"), "spectrum", {"phi"});
            read_if(j.at("spectrum"), "spectrum", "phi", c.phi);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            reject_unknown_keys(s, "sweep", {"points", "formula", "detected"});
            read_if(s, "sweep", "points", c.sweep_points);
            if (s.contains("formula")) c.formula = parse_formula(s.at("formula").get<std::string>());
            read_if(s, "sweep", "detected", c.detected);
        }
        if (j.contains("fit")) {
            reject_unknown_keys(j.at("fit"), "fit", {"domain"});
            if (j.at("fit").contains("domain")) {
                c.fit_domain = parse_fit_domain(j.at("fit").at("domain").get<std::string>());
            }
        }
        if (j.contains("snr")) c.snr = parse_snr(j.at("snr"), c.network);

        // 64 segments of 4096 samples; a 25 MHz tone lands on bin 1000.
        c.simulation.sample_rate = 102.4e6;
        c.simulation.duration = 64.0 * 4096.0 / c.simulation.sample_rate;
        c.simulation.signal_frequency = 25e6;
        if (j.contains("montecarlo")) {
            const auto& m = j.at("montecarlo");
            const std::string w = "montecarlo";
            reject_unknown_keys(m, w,
                                {"sample_rate", "duration", "signal_frequency", "signal_amplitude",
                                 "seed", "segments", "threads", "block_size", "phi", "kernel"});
            read_if(m, w, "sample_rate", c.simulation.sample_rate);
            read_if(m, w, "duration", c.simulation.duration);
            read_if(m, w, "signal_frequency", c.simulation.signal_frequency);
            read_if(m, w, "signal_amplitude", c.simulation.signal_amplitude);
            read_if(m, w, "seed", c.simulation.seed);
            read_if(m, w, "segments", c.mc_segments);
            read_if(m, w, "threads", c.simulation.threads);
            read_if(m, w, "block_size", c.simulation.block_size);
            if (m.contains("phi")) c.mc_phis = m.at("phi").get<std::vector<double>>();
            if (m.contains("kernel")) c.simulation.kernel = parse_kernel(m.at("kernel"));
        }
        c.simulation.params = c.network;
        return c;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

}  // namespace ffamp
