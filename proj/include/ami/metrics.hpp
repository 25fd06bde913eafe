#ifndef AMI_METRICS_HPP
#define AMI_METRICS_HPP

// Post-processing: the segment-by-segment latency comparison table and
// the overlap penalty between the two scenarios.

#include <optional>
#include <string>
#include <vector>

#include "ami/channel.hpp"
#include "ami/engine.hpp"
#include "ami/workload.hpp"

namespace ami {

enum class Segment : std::uint8_t { FiberWimax, FiberLte, Rf900 };

const char* to_string(Segment s);

// One cell of the comparison table: the worst latency seen in a
// segment under one scenario, against its acceptance bound. Backbone
// rows carry simulated maxima; the meter-segment rows carry the
// analytic mesh latency. `value_s` is empty for cells that a partial
// report did not compute.
struct ComparisonRow {
  Segment segment = Segment::FiberWimax;
  ScenarioLabel scenario = ScenarioLabel::One;
  std::optional<double> value_s;
  double bound_s = 0.0;
  bool pass = false;  // value < bound; meaningful only when value_s is set
  std::optional<double> overlap_delta_s;  // scenario-two backbone rows
};

// Difference of the network-wide max latencies, scenario two minus
// scenario one. Both ensembles must come from the same topology and
// backbone; throws std::invalid_argument otherwise.
double overlap_delta(const EnsembleResult& scenario_one,
                     const EnsembleResult& scenario_two);

// The full six-cell table: WiMAX and LTE backbones under both
// scenarios plus the RF-mesh segment without (factor 1) and with
// (factor 2) application overlap.
std::vector<ComparisonRow> comparison_table(const EnsembleResult& wimax_one,
                                            const EnsembleResult& wimax_two,
                                            const EnsembleResult& lte_one,
                                            const EnsembleResult& lte_two,
                                            const RfMeshProfile& rf);

// The same six-row skeleton when only one backbone/scenario ensemble
// was computed: the other backbone cells stay empty, the analytic
// RF-mesh rows are always filled.
std::vector<ComparisonRow> partial_comparison_table(
    const EnsembleResult& ensemble, ScenarioLabel scenario,
    const RfMeshProfile& rf);

double segment_bound_s(Segment segment, ScenarioLabel scenario);

// Human-readable report (aligned text) and its machine-readable twin.
// The CSV row set is fixed: six table rows plus one row per
// application requirement.
void write_report_txt(const std::vector<ComparisonRow>& table,
                      const RequirementReport& requirements,
                      const EnsembleResult& ensemble, ScenarioLabel scenario,
                      const Topology& topology, const std::string& path);
void write_report_csv(const std::vector<ComparisonRow>& table,
                      const RequirementReport& requirements,
                      ScenarioLabel scenario, const std::string& path);

}  // namespace ami

#endif
