#include "eocavity/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "eocavity/errors.hpp"

namespace eocavity {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

}  // namespace

void JsonWriter::comma() {
    if (first_.empty()) return;
    if (first_.back())
        first_.back() = false;
    else
        out_ += ',';
    out_ += '\n';
    indent();
}

void JsonWriter::indent() {
    out_.append(2 * first_.size(), ' ');
}

JsonWriter& JsonWriter::begin_object() {
    if (!pending_key_) comma();
    pending_key_ = false;
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::begin_object(const std::string& key) {
    comma();
    out_ += '"' + json_escape(key) + "\": ";
    pending_key_ = true;
    return begin_object();
}

JsonWriter& JsonWriter::end_object() {
    const bool was_empty = first_.back();
    first_.pop_back();
    if (!was_empty) {
        out_ += '\n';
        indent();
    }
    out_ += '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    if (!pending_key_) comma();
    pending_key_ = false;
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
    comma();
    out_ += '"' + json_escape(key) + "\": ";
    pending_key_ = true;
    return begin_array();
}

JsonWriter& JsonWriter::end_array() {
    const bool was_empty = first_.back();
    first_.pop_back();
    if (!was_empty) {
        out_ += '\n';
        indent();
    }
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
    comma();
    out_ += '"' + json_escape(key) + "\": " + format_double(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, long long v) {
    comma();
    out_ += '"' + json_escape(key) + "\": " + std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, int v) {
    return field(key, static_cast<long long>(v));
}

JsonWriter& JsonWriter::field(const std::string& key, bool v) {
    comma();
    out_ += '"' + json_escape(key) + "\": ";
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
    comma();
    out_ += '"' + json_escape(key) + "\": \"" + json_escape(v) + '"';
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const char* v) {
    return field(key, std::string(v));
}

JsonWriter& JsonWriter::field(const std::string& key, const std::vector<double>& v) {
    begin_array(key);
    for (double x : v) element(x);
    return end_array();
}

JsonWriter& JsonWriter::element(double v) {
    comma();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::element(long long v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::element(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::element(const std::string& v) {
    comma();
    out_ += '"' + json_escape(v) + '"';
    return *this;
}

JsonWriter& JsonWriter::element_null() {
    comma();
    out_ += "null";
    return *this;
}

std::string JsonWriter::str() const {
    return out_ + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw IoError("write failed for '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        const int err = errno;
        std::remove(tmp.c_str());
        throw IoError("cannot move '" + tmp + "' to '" + path +
                      "': " + std::strerror(err));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for '" + path + "'");
    return ss.str();
}

std::string optical_modes_csv(const std::vector<OpticalMode>& modes) {
    std::string out = "index,freq_hz,A,L_eff_m,kappa_o_hz,kappa_o_ext_hz\n";
    for (const auto& m : modes) {
        out += std::to_string(m.longitudinal_index);
        out += ',';
        out += format_double(m.freq);
        out += ',';
        out += format_double(m.A);
        out += ',';
        out += format_double(m.L_eff);
        out += ',';
        out += format_double(m.kappa_o);
        out += ',';
        out += format_double(m.kappa_o_ext);
        out += '\n';
    }
    return out;
}

std::string microwave_modes_csv(const std::vector<MicrowaveMode>& modes) {
    std::string out = "l,m,p,freq_hz,V_m_mm3,kappa_m_hz\n";
    for (const auto& m : modes) {
        out += std::to_string(m.indices[0]);
        out += ',';
        out += std::to_string(m.indices[1]);
        out += ',';
        out += std::to_string(m.indices[2]);
        out += ',';
        out += format_double(m.freq);
        out += ',';
        out += format_double(m.V_m * 1e9);
        out += ',';
        out += format_double(m.kappa_m);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::string out = sweep.axis1_name + ',' + sweep.axis2_name + ",magnitude\n";
    for (std::size_t i = 0; i < sweep.axis1.size(); ++i)
        for (std::size_t j = 0; j < sweep.axis2.size(); ++j) {
            out += format_double(sweep.axis1[i]);
            out += ',';
            out += format_double(sweep.axis2[j]);
            out += ',';
            out += format_double(sweep.magnitude[i * sweep.axis2.size() + j]);
            out += '\n';
        }
    return out;
}

std::string spectrum_csv(const std::vector<double>& freq_hz,
                         const std::vector<double>& value,
                         const std::string& value_name) {
    if (freq_hz.size() != value.size())
        throw IoError("spectrum csv: frequency/value length mismatch");
    std::string out = "freq_hz," + value_name + "\n";
    for (std::size_t i = 0; i < freq_hz.size(); ++i) {
        out += format_double(freq_hz[i]);
        out += ',';
        out += format_double(value[i]);
        out += '\n';
    }
    return out;
}

Trace read_trace_csv(const std::string& content, const std::string& label) {
    Trace trace;
    trace.label = label;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;  // first non-empty row is the header
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(label + ": line " + std::to_string(lineno) +
                          ": expected two comma-separated columns");
        const std::string col1 = line.substr(0, comma);
        const std::string col2 = line.substr(comma + 1);
        std::size_t pos1 = 0, pos2 = 0;
        double f = 0.0, v = 0.0;
        try {
            f = std::stod(col1, &pos1);
            v = std::stod(col2, &pos2);
        } catch (const std::exception&) {
            throw IoError(label + ": line " + std::to_string(lineno) +
                          ": cannot parse numbers");
        }
        if (col1.find_first_not_of(" \t", pos1) != std::string::npos ||
            col2.find_first_not_of(" \t", pos2) != std::string::npos)
            throw IoError(label + ": line " + std::to_string(lineno) +
                          ": trailing characters after number");
        trace.freq.push_back(f);
        trace.value.push_back(v);
    }
    try {
        trace.validate();
    } catch (const std::exception& e) {
        throw IoError(label + ": " + std::string(e.what()));
    }
    return trace;
}

std::string trace_csv(const Trace& trace) {
    std::string out = "freq_hz,magnitude\n";
    for (std::size_t i = 0; i < trace.freq.size(); ++i) {
        out += format_double(trace.freq[i]);
        out += ',';
        out += format_double(trace.value[i]);
        out += '\n';
    }
    return out;
}

std::string fit_result_json(const FitResult& result) {
    JsonWriter w;
    w.begin_object();
    w.begin_object("params");
    for (std::size_t i = 0; i < result.param_names.size(); ++i)
        w.field(result.param_names[i], result.params[i]);
    w.end_object();
    w.begin_object("uncertainty");
    const std::size_t k = result.param_names.size();
    for (std::size_t i = 0; i < k; ++i) {
        const double var = result.covariance[i * k + i];
        w.field(result.param_names[i], var > 0.0 ? std::sqrt(var) : 0.0);
    }
    w.end_object();
    w.begin_array("covariance");
    for (double c : result.covariance) w.element(c);
    w.end_array();
    w.field("residual_norm", result.residual_norm);
    w.field("condition_number", result.condition_number);
    w.field("converged", result.converged);
    w.field("iterations", result.iterations);
    w.field("message", result.message);
    w.end_object();
    return w.str();
}

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace eocavity
