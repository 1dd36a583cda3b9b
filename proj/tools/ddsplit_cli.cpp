// ddsplit command line: run, compare and stability experiments on the 2D
// model problem. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddsplit/ddsplit.h"

namespace {

// Exit codes: 0 success, 1 configuration error, 2 numerical failure.
int exit_code(dds_status s) {
  switch (s) {
    case DDS_OK: return 0;
    case DDS_ERROR_NUMERICAL:
    case DDS_ERROR_INTERNAL: return 2;
    default: return 1;
  }
}

struct Failure {
  dds_status status;
};

void check(dds_status s) {
  if (s != DDS_OK) {
    std::cerr << "ddsplit: " << dds_status_string(s) << ": " << dds_last_error() << '\n';
    throw Failure{s};
  }
}

struct ExperimentDeleter {
  void operator()(dds_experiment_impl* e) const { dds_experiment_destroy(e); }
};
using ExperimentHandle = std::unique_ptr<dds_experiment_impl, ExperimentDeleter>;

ExperimentHandle create(const dds_config& cfg) {
  dds_experiment e = nullptr;
  check(dds_experiment_create(&cfg, &e));
  return ExperimentHandle(e);
}

// Flag values as typed on the command line; resolved to a dds_config after parsing.
struct Options {
  std::string problem = "heat";
  std::string scheme = "weighted";
  std::string overlap = "integer";
  std::string axis = "x1";
  std::string out = "ddsplit";
  int margin = 2;
  dds_config cfg{};
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "heat or convdiff")->capture_default_str();
  cmd->add_option("--sigma", o.cfg.sigma, "scheme weight")->capture_default_str();
  cmd->add_option("--N1", o.cfg.cells1, "cells along x1")->capture_default_str();
  cmd->add_option("--N2", o.cfg.cells2, "cells along x2")->capture_default_str();
  cmd->add_option("--T", o.cfg.final_time, "final time")->capture_default_str();
  cmd->add_option("--steps", o.cfg.steps, "number of time steps")->capture_default_str();
  cmd->add_option("--n1", o.cfg.mode1, "exact-solution mode along x1")->capture_default_str();
  cmd->add_option("--n2", o.cfg.mode2, "exact-solution mode along x2")->capture_default_str();
  cmd->add_option("--v1", o.cfg.v1, "velocity along x1 (convdiff)")->capture_default_str();
  cmd->add_option("--v2", o.cfg.v2, "velocity along x2 (convdiff)")->capture_default_str();
  cmd->add_option("--axis", o.axis, "decomposition axis: x1 or x2")->capture_default_str();
  cmd->add_option("--strips", o.cfg.strips, "number of strips")->capture_default_str();
  cmd->add_option("--p", o.cfg.groups, "number of subdomain groups")->capture_default_str();
  cmd->add_option("--overlap", o.overlap, "integer, half or wide3h")->capture_default_str();
  cmd->add_option("--tol", o.cfg.solver_tolerance, "relative residual tolerance")->capture_default_str();
  cmd->add_option("--out", o.out, "output path prefix")->capture_default_str();
}

dds_config resolve(const Options& o) {
  dds_config cfg = o.cfg;
  check(dds_parse_problem(o.problem.c_str(), &cfg.problem));
  check(dds_parse_scheme(o.scheme.c_str(), &cfg.scheme));
  check(dds_parse_overlap(o.overlap.c_str(), &cfg.overlap));
  if (o.axis == "x1") {
    cfg.axis = DDS_AXIS_X1;
  } else if (o.axis == "x2") {
    cfg.axis = DDS_AXIS_X2;
  } else {
    std::cerr << "ddsplit: unknown axis '" << o.axis << "' (expected x1 or x2)\n";
    throw Failure{DDS_ERROR_CONFIG};
  }
  return cfg;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    std::cerr << "ddsplit: cannot parse number '" << text << "'\n";
    throw Failure{DDS_ERROR_CONFIG};
  }
  return v;
}

int cmd_run(const Options& o) {
  const dds_config cfg = resolve(o);
  const ExperimentHandle e = create(cfg);
  check(dds_experiment_run(e.get()));
  check(dds_experiment_write_errors(e.get(), (o.out + "_eps.csv").c_str()));
  check(dds_experiment_write_error_field(e.get(), (o.out + "_field.csv").c_str()));
  double eps = 0.0, inside = 0.0, outside = 0.0;
  int argmax_inside = 0;
  check(dds_experiment_final_error(e.get(), &eps));
  check(dds_experiment_localization(e.get(), o.margin, &inside, &outside, &argmax_inside));
  std::printf("scheme=%s steps=%d eps_T=%.17g band_max=%.17g outside_max=%.17g argmax_in_band=%d\n",
              dds_scheme_name(cfg.scheme), cfg.steps, eps, inside, outside, argmax_inside);
  return 0;
}

int cmd_partition(const Options& o) {
  const ExperimentHandle e = create(resolve(o));
  check(dds_experiment_write_partition(e.get(), (o.out + "_chi.csv").c_str(), (o.out + "_chi_edges.csv").c_str()));
  std::vector<size_t> counts(64);
  size_t groups = 0;
  check(dds_experiment_exchange_volume(e.get(), counts.data(), counts.size(), &groups));
  for (size_t a = 0; a < groups && a < counts.size(); ++a) std::printf("group=%zu exchange=%zu\n", a + 1, counts[a]);
  return 0;
}

// Members are `scheme[:overlap[:p]]`; omitted fields fall back to the shared flags.
int cmd_compare(const Options& o, const std::vector<std::string>& members, bool with_norm) {
  const dds_config base = resolve(o);
  std::vector<dds_config> configs;
  for (const std::string& m : members) {
    const auto fields = split(m, ':');
    if (fields.empty() || fields.size() > 3) {
      std::cerr << "ddsplit: bad member '" << m << "' (expected scheme[:overlap[:p]])\n";
      throw Failure{DDS_ERROR_CONFIG};
    }
    dds_config c = base;
    check(dds_parse_scheme(fields[0].c_str(), &c.scheme));
    if (fields.size() > 1) check(dds_parse_overlap(fields[1].c_str(), &c.overlap));
    if (fields.size() > 2) c.groups = static_cast<int>(parse_number(fields[2]));
    configs.push_back(c);
  }
  const std::string path = o.out + "_compare.csv";
  check(dds_compare(configs.data(), configs.size(), with_norm ? 1 : 0, path.c_str()));
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// Tau tokens are plain numbers or `K/lmax`, meaning K divided by the largest
// eigenvalue of the symmetric part of A.
int cmd_stability(const Options& o, const std::string& schemes, const std::string& sigmas, const std::string& taus) {
  const dds_config base = resolve(o);
  std::vector<int> kinds;
  for (const auto& s : split(schemes, ',')) {
    int k = 0;
    check(dds_parse_scheme(s.c_str(), &k));
    kinds.push_back(k);
  }
  std::vector<double> sigma_values;
  for (const auto& s : split(sigmas, ',')) sigma_values.push_back(parse_number(s));

  std::vector<double> tau_values;
  double lambda_max = 0.0;
  for (const auto& t : split(taus, ',')) {
    const auto slash = t.find("/lmax");
    if (slash != std::string::npos && slash + 5 == t.size()) {
      if (lambda_max == 0.0) {
        const ExperimentHandle e = create(base);
        check(dds_experiment_max_eigenvalue(e.get(), &lambda_max));
      }
      tau_values.push_back(parse_number(t.substr(0, slash)) / lambda_max);
    } else {
      tau_values.push_back(parse_number(t));
    }
  }

  const std::string path = o.out + "_stability.csv";
  size_t flagged = 0;
  check(dds_stability(&base, kinds.data(), kinds.size(), sigma_values.data(), sigma_values.size(),
                      tau_values.data(), tau_values.size(), path.c_str(), &flagged));
  std::printf("wrote %s\n", path.c_str());
  if (flagged > 0) std::fprintf(stderr, "ddsplit: %zu row(s) with norm > 1 + 1e-8\n", flagged);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain decomposition splitting schemes for du/dt + Au = f"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dds_version()));

  Options run_opts, part_opts, cmp_opts, stab_opts;
  for (Options* o : {&run_opts, &part_opts, &cmp_opts, &stab_opts}) dds_config_init(&o->cfg);

  CLI::App* run = app.add_subcommand("run", "run one scheme, write <out>_eps.csv and <out>_field.csv");
  add_common(run, run_opts);
  run->add_option("--scheme", run_opts.scheme, "explicit, weighted, regadd, regmult or vector")->capture_default_str();
  run->add_option("--margin", run_opts.margin, "overlap band dilation in cells")->capture_default_str();

  CLI::App* part = app.add_subcommand("partition", "write the partition of unity to <out>_chi*.csv");
  add_common(part, part_opts);

  std::vector<std::string> members;
  bool with_norm = false;
  CLI::App* cmp = app.add_subcommand("compare", "run several schemes, write <out>_compare.csv");
  add_common(cmp, cmp_opts);
  cmp->add_option("--member", members, "scheme[:overlap[:p]], repeatable")->required();
  cmp->add_flag("--with-norm", with_norm, "also compute transition norms");

  std::string schemes = "weighted,regadd,regmult", sigmas = "0.5,1", taus = "1e-3,1e-1,10";
  CLI::App* stab = app.add_subcommand("stability", "transition norms, write <out>_stability.csv");
  add_common(stab, stab_opts);
  stab->add_option("--schemes", schemes, "comma-separated schemes")->capture_default_str();
  stab->add_option("--sigmas", sigmas, "comma-separated weights")->capture_default_str();
  stab->add_option("--taus", taus, "comma-separated steps, K/lmax allowed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (part->parsed()) return cmd_partition(part_opts);
    if (cmp->parsed()) return cmd_compare(cmp_opts, members, with_norm);
    if (stab->parsed()) return cmd_stability(stab_opts, schemes, sigmas, taus);
  } catch (const Failure& f) {
    return exit_code(f.status);
  }
  return 1;
}
