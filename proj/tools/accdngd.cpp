#include <accdngd/error.hpp>
#include <accdngd/harness.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace accdngd;

namespace {

int cmd_run(const std::string& config, const std::string& out_dir, const std::optional<std::uint64_t>& seed) {
  ExperimentConfig cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  const std::string dir = !out_dir.empty() ? out_dir : (!cfg.output.empty() ? cfg.output : "out");
  const ExperimentResult res = run(cfg);
  emit_csv(res, dir);

  std::cout << "n=" << res.n << " sigma=" << res.sigma << " L=" << res.L << " mu=" << res.mu << " f*=" << res.fstar
            << "\n";
  bool diverged = false;
  for (const auto& r : res.runs) {
    const auto& s = r.summary;
    std::cout << std::left << std::setw(16) << r.label << " t=" << s.final_t << " err=" << s.final_avg_obj_err
              << " slope=" << s.loglog_slope << " rate=" << s.linear_rate << " wall=" << std::fixed
              << std::setprecision(2) << r.wall_seconds << "s" << std::defaultfloat << std::setprecision(6)
              << (s.diverged ? " DIVERGED" : "") << "\n";
    diverged = diverged || s.diverged;
  }
  std::cout << "wrote " << dir << "\n";
  return diverged ? 1 : 0;
}

struct CertifyArgs {
  std::string lemma;
  std::optional<double> sigma, L, mu, eta, beta, t0;
  int samples = 200;
  std::uint64_t seed = 1;
  long horizon = 100000;
  std::string csv;
};

int cmd_certify(const CertifyArgs& a) {
  CertReport rep;
  const bool point = a.sigma || a.L || a.mu || a.eta || a.beta || a.t0;
  if (a.lemma == "5") {
    if (point) {
      require(a.sigma && a.L && a.mu, ErrorKind::InvalidParam, "--sigma, --L and --mu are required together");
      Rng rng(a.seed);
      rep = certify_lemma5(*a.sigma, *a.L, *a.mu, a.samples, rng);
    } else {
      rep = certify_lemma5_grid(a.samples, a.seed);
    }
  } else if (a.lemma == "8-10") {
    if (point) {
      require(a.sigma && a.L, ErrorKind::InvalidParam, "--sigma and --L are required together");
      Rng rng(a.seed);
      rep = certify_lemmas8_10(*a.sigma, *a.L, a.samples, rng);
    } else {
      rep = certify_lemmas8_10_grid(a.samples, a.seed);
    }
  } else {
    if (point) {
      require(a.eta && a.L, ErrorKind::InvalidParam, "--eta and --L are required");
      rep = certify_lemma12(*a.eta, a.t0.value_or(1.0), a.beta.value_or(0.0), *a.L, a.horizon);
    } else {
      rep = certify_lemma12_grid(a.horizon);
    }
  }
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) throw Error(ErrorKind::IoError, "cannot write `" + a.csv + "`");
    write_report_csv(out, rep);
  }
  std::cout << "lemma " << a.lemma << ": " << rep.rows.size() << " checks, " << rep.violations << " violations";
  if (rep.max_poly_residual > 0) std::cout << ", max charpoly residual " << rep.max_poly_residual;
  if (rep.max_eig_residual > 0) std::cout << ", max eigen residual " << rep.max_eig_residual;
  if (a.lemma == "12" && point) std::cout << ", lambda slope " << rep.lambda_slope;
  std::cout << "\n";
  for (const auto& r : rep.rows)
    if (!r.ok)
      std::cout << "  violation " << r.lemma << "/" << r.check << " sigma=" << r.sigma << " eta=" << r.eta
                << " value=" << r.value << " bound=" << r.bound << "\n";
  return rep.violations > 0 ? 1 : 0;
}

int cmd_presets() {
  std::cout << std::left << std::setw(34) << "name" << std::setw(14) << "kind" << std::setw(11) << "schedule"
            << std::setw(13) << "eta" << std::setw(6) << "beta" << std::setw(11) << "alpha" << "eta*L_ref\n";
  for (const auto& p : presets()) {
    std::cout << std::setw(34) << p.name << std::setw(14) << to_string(p.kind) << std::setw(11) << to_string(p.schedule)
              << std::setw(13) << p.eta << std::setw(6) << (p.schedule == StepSchedule::Kind::Vanishing ? p.beta : 0.0)
              << std::setw(11) << (p.alpha ? std::to_string(*p.alpha) : std::string("-")) << p.eta * p.L_ref << "\n";
  }
  return 0;
}

int cmd_sigma(const std::string& spec, const std::string& method, std::uint64_t seed) {
  Rng rng = derive_rng(seed, {1});
  const Graph g = graph_from_spec(spec, rng);
  const WeightMatrix w = method == "metropolis" ? metropolis_weights(g) : laplacian_weights(g);
  std::cout << std::setprecision(5) << std::fixed << w.sigma() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated distributed Nesterov gradient descent: experiments and certificates"};
  app.require_subcommand(1);

  std::string config, out_dir;
  std::optional<std::uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write CSV traces");
  run_cmd->add_option("--config", config, "Experiment config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides [run] output)");
  run_cmd->add_option("--seed", seed, "Master seed (overrides [run] seed)");

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Numerically certify the spectral and step-size lemmas");
  cert_cmd->add_option("--lemma", cert.lemma, "5, 8-10 or 12")->required()->check(CLI::IsMember({"5", "8-10", "12"}));
  cert_cmd->add_option("--sigma", cert.sigma);
  cert_cmd->add_option("--L", cert.L);
  cert_cmd->add_option("--mu", cert.mu);
  cert_cmd->add_option("--eta", cert.eta);
  cert_cmd->add_option("--beta", cert.beta, "0 selects a fixed step");
  cert_cmd->add_option("--t0", cert.t0);
  cert_cmd->add_option("--samples", cert.samples, "Step sizes sampled per parameter point")->capture_default_str();
  cert_cmd->add_option("--seed", cert.seed)->capture_default_str();
  cert_cmd->add_option("--horizon", cert.horizon, "Iterations for lemma 12")->capture_default_str();
  cert_cmd->add_option("--csv", cert.csv, "Write the full report here");

  auto* presets_cmd = app.add_subcommand("presets", "Tuned step-size presets");
  auto* presets_list = presets_cmd->add_subcommand("list", "Print every preset");
  presets_cmd->require_subcommand(1);

  std::string graph_spec, weights = "laplacian";
  std::uint64_t graph_seed = 1;
  auto* sigma_cmd = app.add_subcommand("sigma", "Second largest singular value of a weight matrix");
  sigma_cmd->add_option("--graph", graph_spec, "grid2d:RxC, kcycle:N:K or er:N:P")->required();
  sigma_cmd->add_option("--weights", weights)->check(CLI::IsMember({"laplacian", "metropolis"}))->capture_default_str();
  sigma_cmd->add_option("--seed", graph_seed, "Master seed for random graphs")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config, out_dir, seed);
    if (cert_cmd->parsed()) return cmd_certify(cert);
    if (presets_list->parsed()) return cmd_presets();
    if (sigma_cmd->parsed()) return cmd_sigma(graph_spec, weights, graph_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
