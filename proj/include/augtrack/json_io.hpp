#pragma once

// JSON and CSV serialization for specs, designs, metrics and simulation
// results. Documents are parsed with long double numbers and written back
// with the shortest decimal form that round-trips.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "augtrack/analysis.hpp"
#include "augtrack/design.hpp"
#include "augtrack/simulate.hpp"

namespace augtrack {

using Json = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t,
                                  std::uint64_t, long double>;

/// Thrown for malformed or incomplete input documents.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

std::string dump_json(const Json& j, int indent = 2);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest %Lg representation that reads back to the same value.
std::string format_real(real v);

Json spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const Json& j);

Json design_to_json(const FilterDesign& design);

// Accepts a design document (with "b" and "a"), a model spec, or an
// alpha-beta spec ({"alpha", "beta"} or {"tracking_index"}, plus "q",
// "ts" and optional "omega").
FilterDesign design_from_json(const Json& j, const std::string& default_name = {});

Json metrics_to_json(const MetricsReport& m, const ModelSpec& spec);

ScenarioConfig scenario_from_json(const Json& j);
Json scenario_to_json(const ScenarioConfig& cfg);

Json sim_results_to_json(const ScenarioConfig& cfg, const std::vector<SimResult>& results);

void write_response_csv(std::ostream& os, const std::vector<ResponseRow>& rows);
void write_frames_csv(std::ostream& os, const std::vector<FrameRecord>& frames);

}  // namespace augtrack
