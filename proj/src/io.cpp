#include "amulab/io.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

namespace amulab::io {

namespace fs = std::filesystem;
using numkernel::Complex;
using numkernel::Matrix;

json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (rows <= 0 || cols <= 0)
      throw ValidationError("matrix: dimensions must be positive");
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
      throw ValidationError("matrix: entry count does not match dimensions");
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index jj = 0; jj < cols; ++jj, ++k)
        m(i, jj) = Complex(entries[k].at(0).get<double>(),
                           entries[k].at(1).get<double>());
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("matrix: malformed JSON: ") + e.what());
  }
}

json tuple_to_json(const tuples::OperatorTuple& t) {
  json ops = json::array();
  for (const auto& op : t.ops()) ops.push_back(matrix_to_json(op.mat()));
  json j{{"label", t.label()},
         {"n", t.n()},
         {"dim", t.dim()},
         {"ops", std::move(ops)}};
  if (t.interior_dim())
    j["interior_dim"] = *t.interior_dim();
  else
    j["interior_dim"] = nullptr;
  return j;
}

tuples::OperatorTuple tuple_from_json(const json& j) {
  try {
    const auto& ops_json = j.at("ops");
    std::vector<numkernel::HermitianMatrix> ops;
    ops.reserve(ops_json.size());
    for (const auto& oj : ops_json)
      ops.emplace_back(matrix_from_json(oj));  // strict hermitian validation
    std::optional<Eigen::Index> interior;
    if (j.contains("interior_dim") && !j.at("interior_dim").is_null())
      interior = j.at("interior_dim").get<Eigen::Index>();
    tuples::OperatorTuple t(std::move(ops), j.value("label", std::string{}),
                            interior);
    if (j.contains("n") && j.at("n").get<int>() != t.n())
      throw ValidationError("tuple: declared n does not match ops");
    if (j.contains("dim") && j.at("dim").get<Eigen::Index>() != t.dim())
      throw ValidationError("tuple: declared dim does not match ops");
    return t;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("tuple: malformed JSON: ") + e.what());
  }
}

namespace {

json real_vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd real_vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

json spectrum_to_json(const spectrum::SyntheticSpectrum& s) {
  json accepted = json::array();
  for (const auto& ac : s.accepted) {
    json entry{{"center", real_vector_to_json(ac.center)}, {"norm", ac.norm}};
    if (ac.sphere_center.size() > 0)
      entry["sphere_center"] = real_vector_to_json(ac.sphere_center);
    accepted.push_back(std::move(entry));
  }
  return {{"variant",
           s.variant == spectrum::Variant::Euclidean ? "euclidean" : "spherical"},
          {"n", s.grid.n},
          {"M", s.grid.M},
          {"eta", s.grid.eta},
          {"radius", s.radius},
          {"label", s.source_label},
          {"accepted", std::move(accepted)}};
}

spectrum::SyntheticSpectrum spectrum_from_json(const json& j) {
  try {
    spectrum::SyntheticSpectrum s;
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "euclidean")
      s.variant = spectrum::Variant::Euclidean;
    else if (variant == "spherical")
      s.variant = spectrum::Variant::Spherical;
    else
      throw ValidationError("spectrum: unknown variant '" + variant + "'");
    s.grid.n = j.at("n").get<int>();
    s.grid.M = j.at("M").get<double>();
    s.grid.eta = j.at("eta").get<double>();
    s.radius = j.value("radius", s.grid.eta);
    s.source_label = j.value("label", std::string{});
    for (const auto& entry : j.at("accepted")) {
      spectrum::AcceptedCenter ac;
      ac.center = real_vector_from_json(entry.at("center"));
      ac.norm = entry.at("norm").get<double>();
      if (entry.contains("sphere_center"))
        ac.sphere_center = real_vector_from_json(entry.at("sphere_center"));
      s.accepted.push_back(std::move(ac));
    }
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("spectrum: malformed JSON: ") + e.what());
  }
}

json scan_to_json(const amu::ScanResult& scan) {
  json witnesses = json::array();
  for (const auto& w : scan.witnesses) {
    witnesses.push_back({{"center", real_vector_to_json(w.lambda)},
                         {"residuals", real_vector_to_json(w.residuals)},
                         {"max_residual", w.max_residual},
                         {"expectation_gap", real_vector_to_json(w.expectation_gap)},
                         {"pass", w.max_residual < scan.epsilon}});
  }
  return {{"epsilon", scan.epsilon},
          {"witnesses", std::move(witnesses)},
          {"failing", scan.failing},
          {"all_pass", scan.all_pass()}};
}

json index_report_to_json(const models::IndexReport& r) {
  // JSON has no infinity; cap the gap and keep the verdict in 'conclusive'.
  const double gap = std::isfinite(r.singular_gap) ? r.singular_gap : 1e300;
  return {{"index", r.index},
          {"kernel_dim", r.kernel_dim},
          {"cokernel_dim", r.cokernel_dim},
          {"singular_gap", gap},
          {"conclusive", r.conclusive},
          {"status", r.conclusive ? "ok" : "inconclusive"},
          {"note", r.note}};
}

json descriptor_to_json(const models::ModelDescriptor& d) {
  json j;
  switch (d.kind) {
    case models::ModelKind::HermiteXP:
      j["kind"] = "hermite_xp";
      j["N"] = d.N;
      j["hbar"] = d.hbar;
      break;
    case models::ModelKind::AngularMomentum:
      j["kind"] = "angular_momentum";
      j["j"] = d.j;
      j["hbar"] = d.hbar;
      break;
    case models::ModelKind::CommutingDiagonal: {
      j["kind"] = "commuting_diagonal";
      j["dim"] = d.dim;
      json pts = json::array();
      for (const auto& p : d.points) pts.push_back(real_vector_to_json(p));
      j["points"] = std::move(pts);
      break;
    }
  }
  return j;
}

models::ModelDescriptor descriptor_from_json(const json& j) {
  try {
    models::ModelDescriptor d;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "hermite_xp") {
      d.kind = models::ModelKind::HermiteXP;
      d.N = j.at("N").get<int>();
      d.hbar = j.at("hbar").get<double>();
    } else if (kind == "angular_momentum") {
      d.kind = models::ModelKind::AngularMomentum;
      d.j = j.at("j").get<double>();
      d.hbar = j.at("hbar").get<double>();
    } else if (kind == "commuting_diagonal") {
      d.kind = models::ModelKind::CommutingDiagonal;
      d.dim = j.at("dim").get<int>();
      for (const auto& p : j.at("points"))
        d.points.push_back(real_vector_from_json(p));
    } else {
      throw ValidationError("descriptor: unknown kind '" + kind + "'");
    }
    return d;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("descriptor: malformed JSON: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string spectrum_to_csv(const spectrum::SyntheticSpectrum& s) {
  std::string out;
  for (int i = 0; i < s.grid.n; ++i) out += "center_" + std::to_string(i) + ",";
  out += "norm\n";
  for (const auto& ac : s.accepted) {
    for (Eigen::Index i = 0; i < ac.center.size(); ++i)
      out += format_double(ac.center(i)) + ",";
    out += format_double(ac.norm) + "\n";
  }
  return out;
}

std::string scan_to_csv(const amu::ScanResult& scan) {
  std::string out;
  if (!scan.witnesses.empty()) {
    const Eigen::Index n = scan.witnesses.front().lambda.size();
    for (Eigen::Index i = 0; i < n; ++i)
      out += "center_" + std::to_string(i) + ",";
    for (Eigen::Index i = 0; i < n; ++i)
      out += "residual_" + std::to_string(i) + ",";
    out += "max_residual,pass\n";
  } else {
    out += "max_residual,pass\n";
  }
  for (const auto& w : scan.witnesses) {
    for (Eigen::Index i = 0; i < w.lambda.size(); ++i)
      out += format_double(w.lambda(i)) + ",";
    for (Eigen::Index i = 0; i < w.residuals.size(); ++i)
      out += format_double(w.residuals(i)) + ",";
    out += format_double(w.max_residual) + ",";
    out += (w.max_residual < scan.epsilon ? "1" : "0");
    out += "\n";
  }
  return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path()
                                                : fs::path(".");
  std::error_code ec;
  if (!fs::exists(dir, ec))
    throw IoError("write: directory does not exist: " + dir.string());
  static std::atomic<unsigned> write_counter{0};
  const fs::path tmp =
      dir / (target.filename().string() + ".tmp" + std::to_string(::getpid()) +
             "." + std::to_string(write_counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("write: cannot open temp file " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("write: flush failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("write: rename failed for " + path + ": " + ec.message());
  }
}

void write_json_atomic(const std::string& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("read: invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace amulab::io
