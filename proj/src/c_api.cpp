#include "ddsplit/ddsplit.h"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ddsplit/errors.hpp"
#include "ddsplit/experiment.hpp"

struct dds_experiment_impl {
  ddsplit::Experiment experiment;
  std::optional<ddsplit::ErrorReport> report;
};

namespace {

thread_local std::string last_error;

dds_status fail(dds_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
dds_status guarded(F&& body) {
  try {
    return body();
  } catch (const ddsplit::ConfigError& e) {
    return fail(DDS_ERROR_CONFIG, e.what());
  } catch (const ddsplit::NumericalError& e) {
    return fail(DDS_ERROR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(DDS_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(DDS_ERROR_INTERNAL, "unknown error");
  }
}

template <typename Enum>
Enum checked_enum(int value, int last, const char* what) {
  if (value < 0 || value > last) throw ddsplit::ConfigError(std::string("invalid ") + what + " value");
  return static_cast<Enum>(value);
}

ddsplit::ExperimentConfig to_cpp(const dds_config* c) {
  if (c == nullptr) throw ddsplit::ConfigError("config is null");
  ddsplit::ExperimentConfig out;
  out.problem = checked_enum<ddsplit::ProblemKind>(c->problem, DDS_PROBLEM_CONVDIFF, "problem");
  out.scheme = checked_enum<ddsplit::SchemeKind>(c->scheme, DDS_SCHEME_VECTOR, "scheme");
  out.sigma = c->sigma;
  out.cells1 = c->cells1;
  out.cells2 = c->cells2;
  out.final_time = c->final_time;
  out.steps = c->steps;
  out.mode1 = c->mode1;
  out.mode2 = c->mode2;
  out.v1 = c->v1;
  out.v2 = c->v2;
  out.axis = checked_enum<ddsplit::Axis>(c->axis, DDS_AXIS_X2, "axis");
  out.strips = c->strips;
  out.groups = c->groups;
  out.overlap = checked_enum<ddsplit::OverlapVariant>(c->overlap, DDS_OVERLAP_WIDE3H, "overlap");
  out.solver.tolerance = c->solver_tolerance;
  return out;
}

std::ofstream open_output(const char* path) {
  if (path == nullptr) throw ddsplit::ConfigError("output path is null");
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure(std::string("cannot open ") + path);
  return out;
}

// IO failures surface as DDS_ERROR_IO rather than internal errors.
template <typename F>
dds_status with_output(const char* path, F&& write) {
  return guarded([&] {
    std::ofstream out;
    try {
      out = open_output(path);
    } catch (const std::ios_base::failure& e) {
      return fail(DDS_ERROR_IO, e.what());
    }
    write(out);
    out.flush();
    if (!out) return fail(DDS_ERROR_IO, std::string("write to ") + path + " failed");
    return DDS_OK;
  });
}

const ddsplit::ErrorReport& report_of(dds_experiment e) {
  if (e == nullptr) throw ddsplit::ConfigError("experiment handle is null");
  if (!e->report) throw ddsplit::ConfigError("experiment has not been run");
  return *e->report;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw ddsplit::ConfigError(std::string(what) + " is null");
}

}  // namespace

extern "C" {

void dds_config_init(dds_config* config) {
  if (config == nullptr) return;
  const ddsplit::ExperimentConfig d;
  config->problem = static_cast<int>(d.problem);
  config->scheme = static_cast<int>(d.scheme);
  config->sigma = d.sigma;
  config->cells1 = d.cells1;
  config->cells2 = d.cells2;
  config->final_time = d.final_time;
  config->steps = d.steps;
  config->mode1 = d.mode1;
  config->mode2 = d.mode2;
  config->v1 = d.v1;
  config->v2 = d.v2;
  config->axis = static_cast<int>(d.axis);
  config->strips = d.strips;
  config->groups = d.groups;
  config->overlap = static_cast<int>(d.overlap);
  config->solver_tolerance = d.solver.tolerance;
}

const char* dds_last_error(void) { return last_error.c_str(); }

const char* dds_status_string(dds_status status) {
  switch (status) {
    case DDS_OK: return "ok";
    case DDS_ERROR_CONFIG: return "configuration error";
    case DDS_ERROR_NUMERICAL: return "numerical failure";
    case DDS_ERROR_IO: return "i/o error";
    case DDS_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dds_version(void) { return "1.0.0"; }

dds_status dds_parse_scheme(const char* name, int* scheme) {
  return guarded([&] {
    require(name, "name");
    require(scheme, "output");
    *scheme = static_cast<int>(ddsplit::parse_scheme(name));
    return DDS_OK;
  });
}

dds_status dds_parse_overlap(const char* name, int* overlap) {
  return guarded([&] {
    require(name, "name");
    require(overlap, "output");
    *overlap = static_cast<int>(ddsplit::parse_overlap(name));
    return DDS_OK;
  });
}

dds_status dds_parse_problem(const char* name, int* problem) {
  return guarded([&] {
    require(name, "name");
    require(problem, "output");
    *problem = static_cast<int>(ddsplit::parse_problem(name));
    return DDS_OK;
  });
}

const char* dds_scheme_name(int scheme) {
  if (scheme < DDS_SCHEME_EXPLICIT || scheme > DDS_SCHEME_VECTOR) return "?";
  return ddsplit::to_string(static_cast<ddsplit::SchemeKind>(scheme));
}

const char* dds_overlap_name(int overlap) {
  if (overlap < DDS_OVERLAP_INTEGER || overlap > DDS_OVERLAP_WIDE3H) return "?";
  return ddsplit::to_string(static_cast<ddsplit::OverlapVariant>(overlap));
}

dds_status dds_experiment_create(const dds_config* config, dds_experiment* out) {
  return guarded([&] {
    require(out, "output handle");
    *out = nullptr;
    *out = new dds_experiment_impl{ddsplit::Experiment(to_cpp(config)), std::nullopt};
    return DDS_OK;
  });
}

void dds_experiment_destroy(dds_experiment experiment) { delete experiment; }

size_t dds_experiment_unknowns(dds_experiment experiment) {
  return experiment == nullptr ? 0 : experiment->experiment.grid().interior_count();
}

dds_status dds_experiment_run(dds_experiment experiment) {
  return guarded([&] {
    require(experiment, "experiment handle");
    experiment->report = experiment->experiment.run();
    return DDS_OK;
  });
}

dds_status dds_experiment_errors(dds_experiment experiment, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    const auto& errors = report_of(experiment).errors;
    if (count != nullptr) *count = errors.size();
    if (capacity > 0) require(out, "output buffer");
    for (size_t k = 0; k < errors.size() && k < capacity; ++k) out[k] = errors[k];
    return DDS_OK;
  });
}

dds_status dds_experiment_final_error(dds_experiment experiment, double* eps) {
  return guarded([&] {
    require(eps, "output");
    *eps = report_of(experiment).final_error();
    return DDS_OK;
  });
}

dds_status dds_experiment_write_errors(dds_experiment experiment, const char* path) {
  return guarded([&] {
    const auto& report = report_of(experiment);
    return with_output(path, [&](std::ostream& out) { ddsplit::write_error_csv(out, report); });
  });
}

dds_status dds_experiment_write_error_field(dds_experiment experiment, const char* path) {
  return guarded([&] {
    const auto& report = report_of(experiment);
    return with_output(path, [&](std::ostream& out) { ddsplit::write_field_csv(out, report.local_error); });
  });
}

dds_status dds_experiment_write_partition(dds_experiment experiment, const char* node_path, const char* edge_path) {
  return guarded([&] {
    require(experiment, "experiment handle");
    std::ofstream edges;
    try {
      edges = open_output(edge_path);
    } catch (const std::ios_base::failure& e) {
      return fail(DDS_ERROR_IO, e.what());
    }
    const dds_status s = with_output(node_path, [&](std::ostream& nodes) {
      ddsplit::write_partition_csv(nodes, edges, experiment->experiment.partition());
    });
    if (s != DDS_OK) return s;
    edges.flush();
    if (!edges) return fail(DDS_ERROR_IO, std::string("write to ") + edge_path + " failed");
    return DDS_OK;
  });
}

dds_status dds_experiment_localization(dds_experiment experiment, int margin, double* max_inside,
                                       double* max_outside, int* argmax_inside) {
  return guarded([&] {
    const auto& report = report_of(experiment);
    const auto stats = ddsplit::localization_stats(report.local_error, experiment->experiment.partition(), margin);
    if (max_inside != nullptr) *max_inside = stats.max_inside;
    if (max_outside != nullptr) *max_outside = stats.max_outside;
    if (argmax_inside != nullptr) *argmax_inside = stats.argmax_inside ? 1 : 0;
    return DDS_OK;
  });
}

dds_status dds_experiment_exchange_volume(dds_experiment experiment, size_t* counts, size_t capacity,
                                          size_t* groups) {
  return guarded([&] {
    require(experiment, "experiment handle");
    const auto v = experiment->experiment.exchange_volume();
    if (groups != nullptr) *groups = v.size();
    if (capacity > 0) require(counts, "output buffer");
    for (size_t k = 0; k < v.size() && k < capacity; ++k) counts[k] = v[k];
    return DDS_OK;
  });
}

dds_status dds_experiment_transition_norm(dds_experiment experiment, double tau, double sigma, double* norm) {
  return guarded([&] {
    require(experiment, "experiment handle");
    require(norm, "output");
    *norm = experiment->experiment.transition_norm(tau, sigma);
    return DDS_OK;
  });
}

dds_status dds_experiment_max_eigenvalue(dds_experiment experiment, double* lambda) {
  return guarded([&] {
    require(experiment, "experiment handle");
    require(lambda, "output");
    *lambda = experiment->experiment.max_eigenvalue();
    return DDS_OK;
  });
}

dds_status dds_compare(const dds_config* configs, size_t count, int with_norm, const char* csv_path) {
  return guarded([&] {
    if (count > 0) require(configs, "config array");
    std::vector<ddsplit::ExperimentConfig> list;
    for (size_t k = 0; k < count; ++k) list.push_back(to_cpp(&configs[k]));
    const auto rows = ddsplit::compare(list, with_norm != 0);
    return with_output(csv_path, [&](std::ostream& out) { ddsplit::write_compare_csv(out, rows); });
  });
}

dds_status dds_stability(const dds_config* base, const int* schemes, size_t scheme_count, const double* sigmas,
                         size_t sigma_count, const double* taus, size_t tau_count, const char* csv_path,
                         size_t* flagged) {
  return guarded([&] {
    if (scheme_count > 0) require(schemes, "scheme array");
    if (sigma_count > 0) require(sigmas, "sigma array");
    if (tau_count > 0) require(taus, "tau array");
    std::vector<ddsplit::SchemeKind> kinds;
    for (size_t k = 0; k < scheme_count; ++k) {
      kinds.push_back(checked_enum<ddsplit::SchemeKind>(schemes[k], DDS_SCHEME_VECTOR, "scheme"));
    }
    const auto rows = ddsplit::stability_table(to_cpp(base), kinds, {sigmas, sigma_count}, {taus, tau_count});
    if (flagged != nullptr) {
      *flagged = 0;
      for (const auto& r : rows) *flagged += r.flagged() ? 1 : 0;
    }
    return with_output(csv_path, [&](std::ostream& out) { ddsplit::write_stability_csv(out, rows); });
  });
}

}  // extern "C"
