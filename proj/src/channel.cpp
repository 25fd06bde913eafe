#include "ami/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ami {

int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::Qpsk: return 2;
    case Modulation::Qam16: return 4;
    case Modulation::Qam64: return 6;
  }
  throw std::invalid_argument("unknown modulation");
}

double hex_radius(double area_sq_miles) {
  if (!(area_sq_miles > 0.0))
    throw std::domain_error("hex_radius: area must be positive");
  return std::sqrt(area_sq_miles / (1.5 * std::sqrt(3.0)));
}

std::vector<std::string> WimaxProfile::validate() const {
  std::vector<std::string> problems;
  if (uplink.total() != fft_size)
    problems.push_back("uplink subcarriers sum to " +
                       std::to_string(uplink.total()) + ", expected " +
                       std::to_string(fft_size));
  if (downlink.total() != fft_size)
    problems.push_back("downlink subcarriers sum to " +
                       std::to_string(downlink.total()) + ", expected " +
                       std::to_string(fft_size));
  if (uplink.data <= 0 || downlink.data <= 0)
    problems.push_back("data subcarrier count must be positive");
  if (!(coding_rate > 0.0 && coding_rate <= 1.0))
    problems.push_back("coding rate must lie in (0, 1]");
  if (!(symbol_time_s > 0.0))
    problems.push_back("symbol time must be positive");
  return problems;
}

double wimax_phy_rate(const WimaxProfile& p, Direction dir) {
  const SubcarrierPlan& plan =
      dir == Direction::Uplink ? p.uplink : p.downlink;
  return plan.data * bits_per_symbol(p.modulation) * p.coding_rate /
         p.symbol_time_s;
}

std::vector<std::string> LteProfile::validate() const {
  std::vector<std::string> problems;
  if (streams < 1) problems.push_back("stream count must be >= 1");
  if (dl_symbols_per_subframe <= 0 || ul_symbols_per_subframe <= 0)
    problems.push_back("symbols per subframe must be positive");
  if (bits_per_symbol_block <= 0)
    problems.push_back("bits per symbol must be positive");
  if (!(subframe_time_s > 0.0))
    problems.push_back("subframe time must be positive");
  return problems;
}

double lte_peak_rate(const LteProfile& p, Direction dir) {
  int symbols = dir == Direction::Uplink ? p.ul_symbols_per_subframe
                                         : p.dl_symbols_per_subframe;
  return static_cast<double>(p.streams) * symbols * p.bits_per_symbol_block /
         p.subframe_time_s;
}

std::vector<std::string> RfMeshProfile::validate() const {
  std::vector<std::string> problems;
  if (!(data_rate_bps > 0.0)) problems.push_back("data rate must be positive");
  if (packet_size_bits <= 0) problems.push_back("packet size must be positive");
  if (n_customers <= 0) problems.push_back("customer count must be positive");
  if (!(propagation_speed_mps > 0.0))
    problems.push_back("propagation speed must be positive");
  if (distance.mean_m < 0.0 || distance.sigma_m < 0.0)
    problems.push_back("distance distribution must be nonnegative");
  if (distance.max_m < distance.min_m)
    problems.push_back("distance truncation bounds inverted");
  return problems;
}

static constexpr double kMetersPerMile = 1609.344;

RfMeshProfile default_rf_profile(double cell_radius_miles) {
  RfMeshProfile p;
  double r_m = cell_radius_miles * kMetersPerMile;
  p.distance.mean_m = r_m / 2.0;
  p.distance.sigma_m = r_m / 4.0;
  p.distance.min_m = 0.0;
  p.distance.max_m = 2.0 * r_m;
  return p;
}

double rf_hop_path_delay(int hops, double t_prop_s, int packet_bits,
                         double rate_bps, double t_proc_s) {
  if (hops < 1) throw std::domain_error("rf_hop_path_delay: hops must be >= 1");
  double per_hop = t_prop_s + packet_bits / rate_bps;
  return hops * per_hop + (hops - 1) * t_proc_s;
}

double rf_cycle_time(const RfMeshProfile& p) {
  return static_cast<double>(p.packet_size_bits) * p.n_customers /
         p.data_rate_bps;
}

double rf_segment_latency(const RfMeshProfile& p, int overlap) {
  if (overlap < 1)
    throw std::domain_error("rf_segment_latency: overlap factor must be >= 1");
  double t_cycle = rf_cycle_time(p);  // transmission == processing time
  double t_prop = propagation_delay(p.distance.mean_m, p.propagation_speed_mps);
  return overlap * (t_cycle + t_prop + t_cycle);
}

double propagation_delay(double distance_m, double speed_mps) {
  if (!(speed_mps > 0.0))
    throw std::domain_error("propagation_delay: speed must be positive");
  if (distance_m < 0.0)
    throw std::domain_error("propagation_delay: distance must be nonnegative");
  return distance_m / speed_mps;
}

ChannelProfiles ChannelProfiles::defaults(double cell_radius_miles) {
  ChannelProfiles c;
  c.rf = default_rf_profile(cell_radius_miles);
  return c;
}

}  // namespace ami
