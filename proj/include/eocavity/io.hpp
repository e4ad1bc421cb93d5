#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eocavity/fitting.hpp"
#include "eocavity/microwave.hpp"
#include "eocavity/optical_cavity.hpp"
#include "eocavity/transduction.hpp"

namespace eocavity {

// All emitted floating point uses 17 significant digits so identical inputs
// produce byte-identical artifacts; no timestamps appear inside data files.
std::string format_double(double v);

// Minimal ordered JSON builder (objects keep insertion order; doubles go
// through format_double). Parsing of configs uses a full JSON library; this
// builder exists to keep output formatting deterministic.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& begin_array(const std::string& key);
    JsonWriter& begin_object(const std::string& key);
    JsonWriter& end_array();
    JsonWriter& field(const std::string& key, double v);
    JsonWriter& field(const std::string& key, long long v);
    JsonWriter& field(const std::string& key, int v);
    JsonWriter& field(const std::string& key, bool v);
    JsonWriter& field(const std::string& key, const std::string& v);
    JsonWriter& field(const std::string& key, const char* v);
    JsonWriter& field(const std::string& key, const std::vector<double>& v);
    JsonWriter& element(double v);
    JsonWriter& element(long long v);
    JsonWriter& element(bool v);
    JsonWriter& element(const std::string& v);
    JsonWriter& element_null();
    std::string str() const;

  private:
    void comma();
    void indent();
    std::string out_;
    std::vector<bool> first_;
    bool pending_key_ = false;
};

// Writes via a temporary file plus rename so failures never leave partial
// artifacts. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// CSV table renderers (headers are part of the format contract).
std::string optical_modes_csv(const std::vector<OpticalMode>& modes);
std::string microwave_modes_csv(const std::vector<MicrowaveMode>& modes);
std::string sweep_csv(const SweepResult& sweep);
std::string spectrum_csv(const std::vector<double>& freq_hz,
                         const std::vector<double>& value,
                         const std::string& value_name);

// Trace CSV: header `freq_hz,magnitude`, one row per sample.
Trace read_trace_csv(const std::string& content, const std::string& label);
std::string trace_csv(const Trace& trace);

std::string fit_result_json(const FitResult& result);

// FNV-1a over a canonical string; used to stamp sweep sidecars with their
// fixture.
std::uint64_t fnv1a_hash(const std::string& data);

}  // namespace eocavity
