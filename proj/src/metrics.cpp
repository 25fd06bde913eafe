#include "ami/metrics.hpp"

#include <cstdio>
#include <stdexcept>

#include "ami/csv.hpp"

namespace ami {

const char* to_string(Segment s) {
  switch (s) {
    case Segment::FiberWimax: return "fiber-wimax";
    case Segment::FiberLte: return "fiber-lte";
    case Segment::Rf900: return "rf900-mesh";
  }
  return "?";
}

double overlap_delta(const EnsembleResult& scenario_one,
                     const EnsembleResult& scenario_two) {
  if (scenario_one.backbone != scenario_two.backbone)
    throw std::invalid_argument(
        "overlap_delta: ensembles ran on different backbones");
  if (scenario_one.node_count != scenario_two.node_count)
    throw std::invalid_argument(
        "overlap_delta: ensembles ran on different topologies");
  return scenario_two.network_max_latency_s -
         scenario_one.network_max_latency_s;
}

double segment_bound_s(Segment segment, ScenarioLabel scenario) {
  bool overlap = scenario == ScenarioLabel::Two;
  switch (segment) {
    case Segment::FiberWimax: return overlap ? 0.06 : 0.05;
    case Segment::FiberLte: return overlap ? 0.05 : 0.04;
    case Segment::Rf900: return overlap ? 0.4 : 0.2;
  }
  return 0.0;
}

namespace {

ComparisonRow backbone_row(Segment seg, ScenarioLabel label,
                           const EnsembleResult& e) {
  ComparisonRow row;
  row.segment = seg;
  row.scenario = label;
  row.bound_s = segment_bound_s(seg, label);
  row.value_s = e.network_max_latency_s;
  row.pass = e.network_max_latency_s < row.bound_s;
  return row;
}

ComparisonRow empty_row(Segment seg, ScenarioLabel label) {
  ComparisonRow row;
  row.segment = seg;
  row.scenario = label;
  row.bound_s = segment_bound_s(seg, label);
  return row;
}

ComparisonRow rf_row(ScenarioLabel label, const RfMeshProfile& rf) {
  ComparisonRow row;
  row.segment = Segment::Rf900;
  row.scenario = label;
  row.bound_s = segment_bound_s(Segment::Rf900, label);
  // One concurrent application normally; two when windows overlap.
  row.value_s = rf_segment_latency(rf, label == ScenarioLabel::Two ? 2 : 1);
  row.pass = *row.value_s < row.bound_s;
  return row;
}

void check_backbone(const EnsembleResult& e, Backbone want,
                    const char* which) {
  if (e.backbone != want)
    throw std::invalid_argument(std::string("comparison_table: ") + which +
                                " ensemble ran on the wrong backbone");
}

}  // namespace

std::vector<ComparisonRow> comparison_table(const EnsembleResult& wimax_one,
                                            const EnsembleResult& wimax_two,
                                            const EnsembleResult& lte_one,
                                            const EnsembleResult& lte_two,
                                            const RfMeshProfile& rf) {
  check_backbone(wimax_one, Backbone::Wimax, "wimax scenario-one");
  check_backbone(wimax_two, Backbone::Wimax, "wimax scenario-two");
  check_backbone(lte_one, Backbone::Lte, "lte scenario-one");
  check_backbone(lte_two, Backbone::Lte, "lte scenario-two");

  std::vector<ComparisonRow> rows;
  rows.push_back(backbone_row(Segment::FiberWimax, ScenarioLabel::One, wimax_one));
  ComparisonRow w2 = backbone_row(Segment::FiberWimax, ScenarioLabel::Two, wimax_two);
  w2.overlap_delta_s = overlap_delta(wimax_one, wimax_two);
  rows.push_back(w2);
  rows.push_back(backbone_row(Segment::FiberLte, ScenarioLabel::One, lte_one));
  ComparisonRow l2 = backbone_row(Segment::FiberLte, ScenarioLabel::Two, lte_two);
  l2.overlap_delta_s = overlap_delta(lte_one, lte_two);
  rows.push_back(l2);
  rows.push_back(rf_row(ScenarioLabel::One, rf));
  rows.push_back(rf_row(ScenarioLabel::Two, rf));
  return rows;
}

std::vector<ComparisonRow> partial_comparison_table(
    const EnsembleResult& ensemble, ScenarioLabel scenario,
    const RfMeshProfile& rf) {
  std::vector<ComparisonRow> rows;
  for (Segment seg : {Segment::FiberWimax, Segment::FiberLte})
    for (ScenarioLabel label : {ScenarioLabel::One, ScenarioLabel::Two}) {
      bool computed =
          (seg == Segment::FiberWimax) == (ensemble.backbone == Backbone::Wimax) &&
          label == scenario;
      rows.push_back(computed ? backbone_row(seg, label, ensemble)
                              : empty_row(seg, label));
    }
  rows.push_back(rf_row(ScenarioLabel::One, rf));
  rows.push_back(rf_row(ScenarioLabel::Two, rf));
  return rows;
}

namespace {

const char* scenario_word(ScenarioLabel l) {
  return l == ScenarioLabel::One ? "non-overlap" : "overlap";
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

void write_report_txt(const std::vector<ComparisonRow>& table,
                      const RequirementReport& requirements,
                      const EnsembleResult& ensemble, ScenarioLabel scenario,
                      const Topology& topology, const std::string& path) {
  std::ofstream out = open_output(path);
  const ServiceAreaSpec& s = topology.spec;

  out << "AMI communication network latency report\n";
  out << "=========================================\n";
  out << "backbone: " << to_string(ensemble.backbone)
      << "   scenario: " << to_string(scenario)
      << "   runs: " << ensemble.run_count
      << "   base seed: " << ensemble.base_seed << "\n";
  out << "topology: " << s.cell_count << " cells, "
      << s.cell_count * s.concentrators_per_cell << " concentrators, "
      << s.meter_count() << " meters, "
      << s.cell_count * s.field_devices_per_cell << " field devices"
      << " (cell radius " << fmt_f(topology.cell_radius_miles, 3)
      << " miles)\n\n";

  out << "channel rates\n";
  const ChannelProfiles& ch = topology.channels;
  out << "  fiber core      " << fmt_f(ch.fiber.rate_bps / 1e6, 3)
      << " Mbit/s per direction\n";
  if (ensemble.backbone == Backbone::Wimax) {
    out << "  wimax uplink    "
        << fmt_f(wimax_phy_rate(ch.wimax, Direction::Uplink) / 1e6, 3)
        << " Mbit/s\n";
    out << "  wimax downlink  "
        << fmt_f(wimax_phy_rate(ch.wimax, Direction::Downlink) / 1e6, 3)
        << " Mbit/s\n";
  } else {
    out << "  lte uplink      "
        << fmt_f(lte_peak_rate(ch.lte, Direction::Uplink) / 1e6, 3)
        << " Mbit/s (peak-rate formula; the published planning figure is"
           " 86.7 Mbit/s)\n";
    out << "  lte downlink    "
        << fmt_f(lte_peak_rate(ch.lte, Direction::Downlink) / 1e6, 3)
        << " Mbit/s\n";
  }
  out << "  rf mesh         " << fmt_f(ch.rf.data_rate_bps / 1e6, 3)
      << " Mbit/s shared per concentrator\n\n";

  out << "segment latency vs bounds\n";
  out << "  segment       scenario     max latency s   bound s   result\n";
  for (const ComparisonRow& row : table) {
    out << "  " << pad(to_string(row.segment), 14)
        << pad(scenario_word(row.scenario), 13);
    if (row.value_s)
      out << pad(fmt_f(*row.value_s, 6), 16);
    else
      out << pad("-", 16);
    out << pad(fmt_g(row.bound_s), 10);
    if (row.value_s)
      out << (row.pass ? "pass" : "FAIL");
    else
      out << "not computed";
    if (row.overlap_delta_s)
      out << "   (overlap delta " << fmt_f(*row.overlap_delta_s, 6) << " s)";
    out << "\n";
  }
  out << "\n";

  out << "application latency requirements\n";
  out << "  application         max latency s   requirement s   margin s"
         "     result\n";
  for (const RequirementCheck& c : requirements.checks) {
    out << "  " << pad(to_string(c.application), 20)
        << pad(fmt_f(c.max_latency_s, 6), 16)
        << pad(fmt_g(c.requirement_s), 16) << pad(fmt_f(c.margin_s, 6), 13)
        << (c.pass ? "pass" : "FAIL") << "\n";
  }
  out << "\noverall: " << (requirements.all_pass ? "PASS" : "FAIL") << "\n";
}

void write_report_csv(const std::vector<ComparisonRow>& table,
                      const RequirementReport& requirements,
                      ScenarioLabel scenario, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "row_type,name,scenario,value_s,bound_s,margin_s,result\n";
  for (const ComparisonRow& row : table) {
    out << "segment," << to_string(row.segment) << ','
        << scenario_word(row.scenario) << ',';
    if (row.value_s) out << fmt_g(*row.value_s);
    out << ',' << fmt_g(row.bound_s) << ',';
    if (row.value_s) out << fmt_g(row.bound_s - *row.value_s);
    out << ',';
    if (row.value_s) out << (row.pass ? "pass" : "fail");
    out << '\n';
  }
  for (const RequirementCheck& c : requirements.checks) {
    out << "requirement," << to_string(c.application) << ','
        << to_string(scenario) << ',' << fmt_g(c.max_latency_s) << ','
        << fmt_g(c.requirement_s) << ',' << fmt_g(c.margin_s) << ','
        << (c.pass ? "pass" : "fail") << '\n';
  }
}

}  // namespace ami
