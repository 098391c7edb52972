#include "mnls/reports.hpp"

#include <cstdio>
#include <fstream>

#include "mnls/error.hpp"

namespace mnls {

json support_json(Support s) { return s.indices(); }

json partition_json(const PartitionStructure& part) {
  json j;
  j["valid"] = part.valid;
  j["groups"] = part.groups;
  if (part.violating_pair)
    j["violating_pair"] = {part.violating_pair->first, part.violating_pair->second};
  else
    j["violating_pair"] = nullptr;
  return j;
}

json profile_json(const ScalarProfile& prof) {
  return {
      {"dim", prof.config.dim},
      {"p", prof.config.p},
      {"r_max", prof.config.r_max},
      {"grid_points", prof.r.size()},
      {"q0", prof.q0},
      {"tail_start", prof.tail_start},
      {"mass", prof.mass},
      {"kinetic", prof.kinetic},
      {"i1", prof.i1},
      {"j1", prof.j1},
      {"pohozaev_residual", prof.pohozaev_residual()},
      {"bound_state_residual", prof.bound_state_residual()},
  };
}

json solution_json(const AmplitudeSolution& sol) {
  return {{"support", support_json(sol.support)},
          {"amplitudes", sol.b},
          {"residual", sol.residual},
          {"norm2", sol.norm2}};
}

json amplitudes_json(const AmplitudeAnalysis& analysis) {
  json j;
  j["partition"] = partition_json(analysis.partition);
  j["supports"] = json::array();
  for (Support s : analysis.supports) j["supports"].push_back(support_json(s));
  j["candidates"] = json::array();
  for (const auto& c : analysis.selection.candidates) j["candidates"].push_back(solution_json(c));
  j["winners"] = json::array();
  for (const auto& w : analysis.selection.winners) j["winners"].push_back(solution_json(w));
  j["degenerate_family"] = analysis.selection.degenerate_family;
  if (analysis.selection.degenerate_family) {
    // A continuum of minimizers; every member shares the minimal norm2.
    j["family"] = {{"norm2", analysis.selection.winners.front().norm2},
                   {"members_found", analysis.selection.winners.size()}};
  }
  return j;
}

json ground_state_json(const GroundState& gs, double pde_res, const std::optional<CriticalMass>& critical) {
  json j;
  j["amplitudes"] = gs.amplitudes.b;
  j["support"] = support_json(gs.amplitudes.support);
  j["theta"] = gs.theta;
  j["shift"] = gs.shift;
  j["action"] = gs.action;
  j["i"] = gs.i_val;
  j["j"] = gs.j_val;
  j["mass"] = gs.mass;
  j["component_mass"] = gs.component_mass;
  j["kinetic"] = gs.kinetic;
  j["energy"] = gs.functionals().energy(gs.p());
  j["gn"] = gs.gn;
  j["c_m"] = gn_constant(gs);
  if (critical)
    j["critical_mass"] = {{"mass", critical->mass},
                          {"identity_residual", critical->identity_residual},
                          {"energy_ratio", critical->energy_ratio}};
  else
    j["critical_mass"] = nullptr;
  j["pde_residual"] = pde_res;
  return j;
}

json gn_json(const GnSampleReport& rep, double c_m) {
  return {{"c_m", c_m},
          {"samples", rep.samples},
          {"positive_j", rep.positive_j},
          {"violations", rep.violations},
          {"max_ratio", rep.max_ratio},
          {"ground_state_ratio", rep.ground_state_ratio}};
}

json verdict_json(const DichotomyResult& run, const std::optional<std::vector<double>>& concentration) {
  json j;
  j["verdict"] = to_string(run.verdict);
  j["blowup_time"] = run.blowup_time ? json(*run.blowup_time) : json(nullptr);
  j["non_finite"] = run.non_finite;
  j["steps"] = run.steps;
  j["initial_kinetic"] = run.initial_kinetic;
  j["max_kinetic_ratio"] = run.max_kinetic_ratio;
  if (!run.series.empty()) {
    j["final_time"] = run.series.back().t;
    j["final_window_mass"] = run.series.back().window_mass;
  }
  if (concentration) {
    json c = json::array();
    for (std::size_t i = 0; i < concentration->size(); ++i)
      c.push_back({{"t", run.frames[i].t}, {"window_mass", (*concentration)[i]}});
    j["concentration"] = c;
  } else {
    j["concentration"] = nullptr;
  }
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << j.dump(2) << "\n";
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_profile_csv(const std::string& path, const ScalarProfile& prof) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << "r,Q,dQ\n";
  for (std::size_t i = 0; i < prof.r.size(); ++i)
    os << num(prof.r[i]) << "," << num(prof.q[i]) << "," << num(prof.dq[i]) << "\n";
}

void write_series_csv(const std::string& path, const std::vector<SeriesPoint>& series) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  const std::size_t m = series.empty() ? 0 : series.front().mass.size();
  os << "t";
  for (std::size_t i = 0; i < m; ++i) os << ",mass_" << i;
  os << ",T,E,J,window_mass\n";
  for (const auto& s : series) {
    os << num(s.t);
    for (double v : s.mass) os << "," << num(v);
    os << "," << num(s.kinetic) << "," << num(s.energy) << "," << num(s.j) << "," << num(s.window_mass) << "\n";
  }
}

}  // namespace mnls
