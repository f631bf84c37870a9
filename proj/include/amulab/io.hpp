#pragma once

#include <string>

#include <json.hpp>

#include "amulab/amu.hpp"
#include "amulab/models.hpp"
#include "amulab/numkernel.hpp"
#include "amulab/spectrum.hpp"
#include "amulab/tuples.hpp"

namespace amulab::io {

using nlohmann::json;

// ---- wire formats (shared across files, CLI and reports) ----

// {"rows": R, "cols": C, "entries": [[re, im], ...]} row-major.
json matrix_to_json(const numkernel::Matrix& m);
numkernel::Matrix matrix_from_json(const json& j);

json tuple_to_json(const tuples::OperatorTuple& t);
tuples::OperatorTuple tuple_from_json(const json& j);

json spectrum_to_json(const spectrum::SyntheticSpectrum& s);
spectrum::SyntheticSpectrum spectrum_from_json(const json& j);

json scan_to_json(const amu::ScanResult& scan);

json index_report_to_json(const models::IndexReport& r);

json descriptor_to_json(const models::ModelDescriptor& d);
models::ModelDescriptor descriptor_from_json(const json& j);

// ---- CSV (plot-ready, one row per record) ----

std::string spectrum_to_csv(const spectrum::SyntheticSpectrum& s);
std::string scan_to_csv(const amu::ScanResult& scan);

// Shortest round-trip decimal representation.
std::string format_double(double v);

// ---- files ----

// Write-temp-then-rename in the target directory.
void write_text_atomic(const std::string& path, const std::string& content);
void write_json_atomic(const std::string& path, const json& j);
json load_json(const std::string& path);

}  // namespace amulab::io
