#include "amulab/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "amulab/amu.hpp"
#include "amulab/io.hpp"
#include "amulab/models.hpp"
#include "amulab/spectrum.hpp"
#include "amulab/transforms.hpp"
#include "amulab/tuples.hpp"
#include "amulab/verify.hpp"

namespace amulab::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct GenOptions {
  std::string descriptor_path;
  std::string kind;
  int N = 128;
  double hbar = 0.01;
  double j = 0.5;
  int dim = 8;
  std::string points;  // JSON array of arrays
  int n = 2;
  double delta = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

models::ModelDescriptor descriptor_from_options(const GenOptions& opt) {
  models::ModelDescriptor d;
  if (opt.kind == "hermite_xp") {
    d.kind = models::ModelKind::HermiteXP;
    d.N = opt.N;
    d.hbar = opt.hbar;
  } else if (opt.kind == "angular_momentum") {
    d.kind = models::ModelKind::AngularMomentum;
    d.j = opt.j;
    d.hbar = opt.hbar;
  } else if (opt.kind == "commuting_diagonal") {
    d.kind = models::ModelKind::CommutingDiagonal;
    d.dim = opt.dim;
    nlohmann::json pts;
    try {
      pts = nlohmann::json::parse(opt.points);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("gen: bad --points JSON: ") + e.what());
    }
    for (const auto& p : pts) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = p[static_cast<std::size_t>(i)].get<double>();
      d.points.push_back(std::move(v));
    }
  } else {
    throw ValidationError("gen: unknown kind '" + opt.kind + "'");
  }
  return d;
}

Eigen::VectorXd parse_lambda(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("amu: bad --lambda component '" + item + "'");
    }
  }
  if (values.empty()) throw ValidationError("amu: empty --lambda");
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = values[static_cast<std::size_t>(i)];
  return v;
}

int run_impl(const std::vector<std::string>& args) {
  CLI::App app{"numerical laboratory for almost-commuting operator tuples"};
  app.require_subcommand(1);

  // gen ---------------------------------------------------------------
  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a model tuple file");
  cmd_gen->add_option("--descriptor", gen.descriptor_path,
                      "model descriptor JSON file");
  cmd_gen->add_option("--kind", gen.kind,
                      "hermite_xp | angular_momentum | commuting_diagonal | random");
  cmd_gen->add_option("--N", gen.N, "hermite truncation size");
  cmd_gen->add_option("--hbar", gen.hbar, "Planck parameter");
  cmd_gen->add_option("--j", gen.j, "spin (half-integer)");
  cmd_gen->add_option("--dim", gen.dim, "diagonal / random dimension");
  cmd_gen->add_option("--points", gen.points,
                      "joint eigenvalues as JSON, e.g. [[0,0],[1,-1]]");
  cmd_gen->add_option("--n", gen.n, "random tuple length");
  cmd_gen->add_option("--delta", gen.delta, "random commutator budget");
  cmd_gen->add_option("--seed", gen.seed, "random seed");
  cmd_gen->add_option("--out", gen.out, "output tuple JSON")->required();

  // spectrum ------------------------------------------------------------
  std::string sp_tuple, sp_variant = "euclidean", sp_out, sp_csv;
  double sp_M = 2.0, sp_eta = 0.2;
  std::size_t sp_threads = 0;
  CLI::App* cmd_spectrum =
      app.add_subcommand("spectrum", "compute a synthetic spectrum");
  cmd_spectrum->add_option("--tuple", sp_tuple, "tuple JSON file")->required();
  cmd_spectrum->add_option("--M", sp_M, "ball radius (M > 1)")->required();
  cmd_spectrum->add_option("--eta", sp_eta, "resolution (0 < eta < 1)")->required();
  cmd_spectrum->add_option("--variant", sp_variant, "euclidean | spherical");
  cmd_spectrum->add_option("--out", sp_out, "output spectrum JSON")->required();
  cmd_spectrum->add_option("--csv", sp_csv, "optional CSV export");
  cmd_spectrum->add_option("--threads", sp_threads, "worker cap");

  // amu -----------------------------------------------------------------
  std::string amu_tuple, amu_spectrum, amu_lambda, amu_out, amu_csv;
  double amu_eps = 0.3;
  std::size_t amu_threads = 0;
  CLI::App* cmd_amu = app.add_subcommand("amu", "search AMU witnesses");
  cmd_amu->add_option("--tuple", amu_tuple, "tuple JSON file")->required();
  cmd_amu->add_option("--spectrum", amu_spectrum, "spectrum JSON file");
  cmd_amu->add_option("--lambda", amu_lambda, "single target, e.g. 0.1,0.2");
  cmd_amu->add_option("--epsilon", amu_eps, "residual budget")->required();
  cmd_amu->add_option("--out", amu_out, "output witness JSON")->required();
  cmd_amu->add_option("--csv", amu_csv, "optional CSV export");
  cmd_amu->add_option("--threads", amu_threads, "worker cap");

  // index -----------------------------------------------------------------
  int idx_N = 128;
  double idx_hbar = 0.1, idx_ratio = 1e6;
  std::string idx_out;
  CLI::App* cmd_index =
      app.add_subcommand("index", "numerical Fredholm index of T = S1 + i*Shbar");
  cmd_index->add_option("--N", idx_N, "truncation size")->required();
  cmd_index->add_option("--hbar", idx_hbar, "Planck parameter")->required();
  cmd_index->add_option("--threshold-ratio", idx_ratio, "SVD threshold ratio");
  cmd_index->add_option("--out", idx_out, "output report JSON");

  // transform ---------------------------------------------------------------
  std::string tr_tuple, tr_kind = "bounded", tr_out;
  double tr_s = 1.0;
  CLI::App* cmd_transform =
      app.add_subcommand("transform", "apply an operator transform to a tuple");
  cmd_transform->add_option("--tuple", tr_tuple, "tuple JSON file")->required();
  cmd_transform->add_option("--kind", tr_kind,
                            "bounded | tilde | bar | reparam");
  cmd_transform->add_option("--s", tr_s, "reparam scale in (0,1]");
  cmd_transform->add_option("--out", tr_out, "output JSON")->required();

  // verify --------------------------------------------------------------
  std::string vf_config, vf_out, vf_csv;
  std::size_t vf_threads = 0;
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run the acceptance suite");
  cmd_verify->add_option("--config", vf_config, "config JSON (criteria, seed, tolerances)");
  cmd_verify->add_option("--out", vf_out, "output report JSON");
  cmd_verify->add_option("--csv", vf_csv, "optional CSV summary");
  cmd_verify->add_option("--threads", vf_threads, "worker cap");

  std::vector<const char*> argv;
  argv.push_back("amulab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cmd_gen->parsed()) {
    tuples::OperatorTuple t = [&]() {
      if (!gen.descriptor_path.empty())
        return models::from_descriptor(
            io::descriptor_from_json(io::load_json(gen.descriptor_path)));
      if (gen.kind == "random")
        return tuples::random_almost_commuting(gen.n, gen.dim, gen.delta,
                                               gen.seed);
      return models::from_descriptor(descriptor_from_options(gen));
    }();
    io::write_json_atomic(gen.out, io::tuple_to_json(t));
    std::cout << "wrote " << gen.out << " (n=" << t.n() << ", dim=" << t.dim()
              << ")\n";
    return kExitOk;
  }

  if (cmd_spectrum->parsed()) {
    if (!(sp_M > 1.0)) throw ValidationError("spectrum: M > 1 required");
    if (!(sp_eta > 0.0 && sp_eta < 1.0))
      throw ValidationError("spectrum: eta must lie in (0, 1)");
    if (sp_variant != "euclidean" && sp_variant != "spherical")
      throw ValidationError("spectrum: variant must be euclidean or spherical");
    const auto t = io::tuple_from_json(io::load_json(sp_tuple));
    const auto spec =
        sp_variant == "euclidean"
            ? spectrum::euclidean_synthetic_spectrum(t, sp_M, sp_eta, sp_threads)
            : spectrum::spherical_synthetic_spectrum(t, sp_M, sp_eta, sp_threads);
    io::write_json_atomic(sp_out, io::spectrum_to_json(spec));
    if (!sp_csv.empty()) io::write_text_atomic(sp_csv, io::spectrum_to_csv(spec));
    std::cout << "accepted " << spec.accepted.size() << " of "
              << spec.grid.points.size() << " grid points\n";
    return kExitOk;
  }

  if (cmd_amu->parsed()) {
    if (amu_spectrum.empty() == amu_lambda.empty())
      throw ValidationError("amu: provide exactly one of --spectrum, --lambda");
    const auto t = io::tuple_from_json(io::load_json(amu_tuple));
    amu::ScanResult scan;
    if (!amu_spectrum.empty()) {
      const auto spec = io::spectrum_from_json(io::load_json(amu_spectrum));
      scan = amu::scan_amu(t, spec, amu_eps, amu_threads);
    } else {
      scan.epsilon = amu_eps;
      scan.witnesses.push_back(amu::find_amu_state(t, parse_lambda(amu_lambda)));
      if (scan.witnesses[0].max_residual >= amu_eps) scan.failing.push_back(0);
    }
    io::write_json_atomic(amu_out, io::scan_to_json(scan));
    if (!amu_csv.empty()) io::write_text_atomic(amu_csv, io::scan_to_csv(scan));
    std::cout << scan.witnesses.size() << " witnesses, " << scan.failing.size()
              << " above epsilon=" << amu_eps << "\n";
    return scan.all_pass() ? kExitOk : kExitFailure;
  }

  if (cmd_index->parsed()) {
    const auto report = models::fredholm_index(
        models::t_hbar_operator(idx_N, idx_hbar), idx_ratio);
    if (!idx_out.empty())
      io::write_json_atomic(idx_out, io::index_report_to_json(report));
    std::cout << "index " << report.index << " ("
              << (report.conclusive ? "ok" : "inconclusive")
              << ", singular_gap=" << report.singular_gap << ")\n";
    return kExitOk;
  }

  if (cmd_transform->parsed()) {
    const auto t = io::tuple_from_json(io::load_json(tr_tuple));
    nlohmann::json out;
    if (tr_kind == "bounded") {
      const auto bt = transforms::bounded_transform(t);
      nlohmann::json bs = nlohmann::json::array();
      for (const auto& b : bt.b) bs.push_back(io::matrix_to_json(b.mat()));
      out = {{"kind", "bounded"},
             {"a", io::matrix_to_json(bt.a.mat())},
             {"b", std::move(bs)},
             {"identity_residual", bt.identity_residual},
             {"max_b_asymmetry", bt.max_b_asymmetry}};
    } else if (tr_kind == "tilde") {
      nlohmann::json ops = nlohmann::json::array();
      for (const auto& m : transforms::tilde_transform(t))
        ops.push_back(io::matrix_to_json(m.mat()));
      out = {{"kind", "tilde"}, {"ops", std::move(ops)}};
    } else if (tr_kind == "bar") {
      nlohmann::json ops = nlohmann::json::array();
      for (const auto& m : transforms::bar_transform(t))
        ops.push_back(io::matrix_to_json(m.mat()));
      out = {{"kind", "bar"}, {"ops", std::move(ops)}};
    } else if (tr_kind == "reparam") {
      out = io::tuple_to_json(transforms::resolvent_reparam(t, tr_s));
      out["kind"] = "reparam";
    } else {
      throw ValidationError("transform: unknown kind '" + tr_kind + "'");
    }
    io::write_json_atomic(tr_out, out);
    std::cout << "wrote " << tr_out << "\n";
    return kExitOk;
  }

  if (cmd_verify->parsed()) {
    verify::AcceptanceConfig cfg;
    if (!vf_config.empty())
      cfg = verify::AcceptanceConfig::from_json(io::load_json(vf_config));
    if (vf_threads > 0) cfg.threads = vf_threads;
    const auto report = verify::run_acceptance(cfg);
    for (const auto& r : report.criteria)
      std::cout << (r.pass() ? "PASS" : "FAIL") << " criterion " << r.id << ": "
                << r.criterion << " (margin " << r.margin << ", "
                << r.runtime_ms << " ms)\n";
    if (!vf_out.empty())
      io::write_json_atomic(vf_out, verify::acceptance_report_to_json(report));
    if (!vf_csv.empty())
      io::write_text_atomic(vf_csv, verify::acceptance_report_to_csv(report));
    return report.all_pass ? kExitOk : kExitFailure;
  }

  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return run_impl(args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace amulab::cli
