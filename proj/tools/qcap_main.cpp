// qcap: capacity of bipartite quiver data and Anantharam-Jog-Nair constants.
//
// Subcommands:
//   capacity  solve for cap and the AJN constant
//   scale     move a feasible datum to geometric form via its extremizer
//   check     feasibility verdict: violator search plus capacity certificate
//   gap       entropic gap at a given SPD tuple, with the -log(cap)/2 identity
//   probe     uniqueness of gaussian extremizers, endomorphism dimension
//
// Exit codes: 0 success/converged, 2 infeasible, 3 iteration limit,
// 1 usage or parse errors.

#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcap/entropy.hpp"
#include "qcap/io.hpp"
#include "qcap/kraus.hpp"

namespace {

using qcap::ordered_json;

struct Options {
  std::string file;
  std::string sigma_file;
  double tol = 1e-8;
  int max_iter = 10000;
  double floor = 1e-12;
  std::uint64_t seed = 0;
  int restarts = 20;
  int threads = 1;
  bool json = false;
  bool pretty = false;
};

qcap::SolverOptions solver_options(const Options& o) {
  qcap::SolverOptions s;
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  s.cap_floor = o.floor;
  s.seed = o.seed;
  return s;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("file", o.file, "datum JSON file")->required();
  sub->add_option("--tol", o.tol, "stationarity tolerance");
  sub->add_option("--max-iter", o.max_iter, "iteration limit");
  sub->add_option("--floor", o.floor, "capacity value treated as zero");
  sub->add_option("--seed", o.seed, "seed for randomized searches");
  sub->add_option("--threads", o.threads, "worker threads for restart batches");
  sub->add_flag("--json", o.json, "machine-readable JSON on stdout");
  sub->add_flag("--pretty", o.pretty, "indented JSON on stdout");
}

ordered_json ajn_constant_json(const qcap::CapacityReport& r) {
  if (std::isinf(r.ajn_constant)) return "inf";
  return r.ajn_constant;
}

ordered_json base_report(const std::string& command, const qcap::CapacityReport& r) {
  ordered_json j;
  j["command"] = command;
  j["status"] = qcap::status_name(r.status);
  j["cap"] = r.cap;
  j["ajn_constant"] = ajn_constant_json(r);
  j["iterations"] = r.iterations;
  j["residual"] = r.final_residual;
  j["extremizer"] = r.extremizer ? qcap::tuple_to_json(*r.extremizer) : ordered_json(nullptr);
  j["group_element"] = nullptr;
  j["character"] = nullptr;
  j["violator"] = nullptr;
  return j;
}

void emit(const ordered_json& j, const Options& o, const std::string& human) {
  if (o.pretty)
    std::cout << j.dump(2) << "\n";
  else if (o.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << human;
}

int exit_code(const qcap::CapacityReport& r) {
  switch (r.status) {
    case qcap::SolveStatus::Converged:
      return 0;
    case qcap::SolveStatus::Infeasible:
      return 2;
    case qcap::SolveStatus::MaxIterations:
      return 3;
  }
  return 1;
}

std::string summary_lines(const qcap::CapacityReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "status:       " << qcap::status_name(r.status) << "\n";
  out << "cap:          " << r.cap << "\n";
  out << "ajn_constant: ";
  if (std::isinf(r.ajn_constant))
    out << "inf\n";
  else
    out << r.ajn_constant << "\n";
  out << "iterations:   " << r.iterations << "\n";
  out << "residual:     " << r.final_residual << "\n";
  return out.str();
}

int cmd_capacity(const Options& o) {
  const qcap::LoadedDatum loaded = qcap::load_datum_file(o.file);
  const qcap::CapacityReport r = qcap::solve(loaded.datum, solver_options(o));
  emit(base_report("capacity", r), o, summary_lines(r));
  return exit_code(r);
}

int cmd_scale(const Options& o) {
  const qcap::LoadedDatum loaded = qcap::load_datum_file(o.file);
  const qcap::CapacityReport r = qcap::solve(loaded.datum, solver_options(o));
  if (r.status != qcap::SolveStatus::Converged) {
    emit(base_report("scale", r), o, summary_lines(r));
    return exit_code(r);
  }

  const qcap::GroupElement g = qcap::extremizer_to_group(loaded.datum, *r.extremizer, o.tol);
  const qcap::QuiverDatum scaled = qcap::act(g, loaded.datum);
  const double chi = qcap::character(g, loaded.datum.sigma);
  const auto [src_res, snk_res] = qcap::ds_residual(scaled);

  ordered_json j = base_report("scale", r);
  j["group_element"] = qcap::group_to_json(g);
  j["character"] = chi;
  j["log_abs_character"] = qcap::log_abs_character(g, loaded.datum.sigma);
  j["scaled_datum"] = qcap::quiver_datum_to_json(scaled);
  j["scaled_residuals"] = ordered_json{{"source", src_res}, {"sink", snk_res}};

  std::ostringstream human;
  human.precision(12);
  human << summary_lines(r);
  human << "character:    " << chi << "\n";
  double worst = 0.0;
  for (double x : src_res) worst = std::max(worst, x);
  for (double x : snk_res) worst = std::max(worst, x);
  human << "scaled datum ds-residual: " << worst << "\n";
  emit(j, o, human.str());
  return 0;
}

int cmd_check(const Options& o) {
  const qcap::LoadedDatum loaded = qcap::load_datum_file(o.file);
  const auto violator = qcap::find_violator(loaded.datum, 10000, o.seed);
  const qcap::CapacityReport r = qcap::solve(loaded.datum, solver_options(o));
  const qcap::GeometryCheck geo = qcap::is_geometric(loaded.datum, 10.0 * o.tol);

  ordered_json j = base_report("check", r);
  if (violator) j["violator"] = qcap::violation_to_json(*violator);
  const bool infeasible = violator.has_value() || r.status == qcap::SolveStatus::Infeasible;
  if (infeasible)
    j["feasible"] = false;
  else if (r.status == qcap::SolveStatus::Converged)
    j["feasible"] = true;
  else
    j["feasible"] = nullptr;  // undetermined at this iteration limit
  j["geometric"] = geo.geometric;

  std::ostringstream human;
  human.precision(12);
  human << summary_lines(r);
  human << "feasible:     " << (infeasible ? "no" : (r.status == qcap::SolveStatus::Converged ? "yes" : "undetermined")) << "\n";
  human << "geometric:    " << (geo.geometric ? "yes" : "no") << "\n";
  if (violator)
    human << "violator:     slack " << violator->slack << " (lhs " << violator->lhs << ", rhs "
          << violator->rhs << ")\n";
  emit(j, o, human.str());

  if (infeasible) return 2;
  return r.status == qcap::SolveStatus::Converged ? 0 : 3;
}

int cmd_gap(const Options& o) {
  const qcap::LoadedDatum loaded = qcap::load_datum_file(o.file);
  if (!loaded.ajn) throw qcap::ParseError("gap requires an AJN datum (kind \"ajn\")");
  const std::vector<qcap::SpdMatrix> sigma = qcap::load_spd_file(o.sigma_file);

  const double gap = qcap::ajn_gap(*loaded.ajn, sigma);
  const double lc = qcap::log_cap_at(loaded.datum, sigma);
  const double identity_residual = std::fabs(gap + 0.5 * lc);

  ordered_json j;
  j["command"] = "gap";
  j["gap"] = gap;
  j["cap_at"] = std::exp(lc);
  j["log_cap_at"] = lc;
  j["identity_residual"] = identity_residual;

  std::ostringstream human;
  human.precision(12);
  human << "gap:               " << gap << "\n";
  human << "cap_at:            " << std::exp(lc) << "\n";
  human << "identity residual: " << identity_residual << "\n";
  emit(j, o, human.str());
  return 0;
}

int cmd_probe(const Options& o) {
  const qcap::LoadedDatum loaded = qcap::load_datum_file(o.file);
  const qcap::SolverOptions sopts = solver_options(o);
  const qcap::CapacityReport r = qcap::solve(loaded.datum, sopts);
  if (r.status != qcap::SolveStatus::Converged) {
    emit(base_report("probe", r), o, summary_lines(r));
    return exit_code(r);
  }

  const qcap::UniquenessReport u =
      qcap::uniqueness_probe(loaded.datum, o.restarts, sopts, o.threads);
  const int end_dim = qcap::endomorphism_dimension(loaded.datum);

  const char* verdict = u.verdict == qcap::UniquenessVerdict::Unique       ? "unique"
                        : u.verdict == qcap::UniquenessVerdict::NonUnique  ? "non_unique"
                                                                           : "inconclusive";
  ordered_json j = base_report("probe", r);
  j["verdict"] = verdict;
  j["endomorphism_dimension"] = end_dim;
  j["restarts"] = u.restarts;
  j["restarts_converged"] = u.converged;
  j["max_pair_deviation"] = u.max_pair_deviation;
  if (u.witness) {
    j["witness"] = ordered_json::array(
        {qcap::tuple_to_json(u.witness->first), qcap::tuple_to_json(u.witness->second)});
  } else {
    j["witness"] = nullptr;
  }

  std::ostringstream human;
  human.precision(12);
  human << summary_lines(r);
  human << "verdict:      " << verdict << " (" << u.converged << "/" << u.restarts
        << " restarts converged, max deviation " << u.max_pair_deviation << ")\n";
  human << "End dim:      " << end_dim << "\n";
  emit(j, o, human.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacity of bipartite quiver data and AJN best constants"};
  app.require_subcommand(1);

  Options o;
  CLI::App* capacity = app.add_subcommand("capacity", "compute cap and the AJN constant");
  add_common(capacity, o);
  CLI::App* scale = app.add_subcommand("scale", "scale a feasible datum to geometric form");
  add_common(scale, o);
  CLI::App* check = app.add_subcommand("check", "feasibility verdict with evidence");
  add_common(check, o);
  CLI::App* gap = app.add_subcommand("gap", "entropic gap at a given SPD tuple");
  add_common(gap, o);
  gap->add_option("--sigma", o.sigma_file, "JSON file with a list of SPD matrices")->required();
  CLI::App* probe = app.add_subcommand("probe", "uniqueness of gaussian extremizers");
  add_common(probe, o);
  probe->add_option("--restarts", o.restarts, "number of random restarts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (capacity->parsed()) return cmd_capacity(o);
    if (scale->parsed()) return cmd_scale(o);
    if (check->parsed()) return cmd_check(o);
    if (gap->parsed()) return cmd_gap(o);
    if (probe->parsed()) return cmd_probe(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
