#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "mnls/amplitudes.hpp"
#include "mnls/evolution.hpp"
#include "mnls/gn_sampling.hpp"
#include "mnls/ground_state.hpp"
#include "mnls/scalar_profile.hpp"

namespace mnls {

using nlohmann::json;

// Component indices in every report are 0-based.

json support_json(Support s);
json partition_json(const PartitionStructure& part);
json profile_json(const ScalarProfile& prof);
json solution_json(const AmplitudeSolution& sol);
json amplitudes_json(const AmplitudeAnalysis& analysis);
json ground_state_json(const GroundState& gs, double pde_res, const std::optional<CriticalMass>& critical);
json gn_json(const GnSampleReport& rep, double c_m);
json verdict_json(const DichotomyResult& run, const std::optional<std::vector<double>>& concentration);

void write_json(const std::string& path, const json& j);
void write_profile_csv(const std::string& path, const ScalarProfile& prof);
/// t, mass_0..mass_{M-1}, T, E, J, window_mass
void write_series_csv(const std::string& path, const std::vector<SeriesPoint>& series);

}  // namespace mnls
