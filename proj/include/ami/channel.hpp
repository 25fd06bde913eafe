#ifndef AMI_CHANNEL_HPP
#define AMI_CHANNEL_HPP

// Channel models for the three network segments of the AMI hierarchy:
// fiber core, WiMAX/LTE backbone cells, and the 900 MHz RF mesh that
// connects smart meters to their data concentrator.

#include <cstdint>
#include <string>
#include <vector>

namespace ami {

enum class Direction : std::uint8_t { Uplink, Downlink };

enum class Modulation : std::uint8_t { Qpsk, Qam16, Qam64 };

// Modulation order in bits per symbol (QPSK = 2 ... 64-QAM = 6).
int bits_per_symbol(Modulation m);

// Inverts Area = (3/2) * sqrt(3) * r^2 for a regular hexagon.
// Throws std::domain_error for non-positive areas.
double hex_radius(double area_sq_miles);

// One direction of the OFDMA subcarrier allocation.
struct SubcarrierPlan {
  int guard_left = 0;
  int guard_right = 0;
  int data = 0;
  int pilot = 0;
  int dc = 1;

  int total() const { return guard_left + guard_right + data + pilot + dc; }
};

// 20 MHz OFDMA air interface, TDD. Defaults reproduce the 2048-FFT
// allocation used by the backbone feasibility study.
struct WimaxProfile {
  int fft_size = 2048;
  SubcarrierPlan uplink{184, 183, 1120, 560, 1};
  SubcarrierPlan downlink{184, 183, 1440, 240, 1};
  Modulation modulation = Modulation::Qam64;
  double coding_rate = 3.0 / 4.0;   // in (0, 1]
  double symbol_time_s = 100.8e-6;  // OFDM symbol duration

  // Returns human-readable problems, empty when the profile is sound
  // (per-direction subcarrier sums must equal fft_size, etc.).
  std::vector<std::string> validate() const;
};

// Peak PHY rate in bit/s for one direction:
//   R = N_data * b_m * c_r / T_s
double wimax_phy_rate(const WimaxProfile& p, Direction dir);

// 20 MHz FDD LTE with 2x2 MIMO. Peak rate from modulation symbols per
// subframe: R = N_streams * N_symbols * N_bits / T_subframe.
struct LteProfile {
  int streams = 2;                  // spatial multiplexing order
  int dl_symbols_per_subframe = 100;
  int ul_symbols_per_subframe = 50;
  int bits_per_symbol_block = 64;   // bits carried per modulation symbol
  double subframe_time_s = 71.4e-6;
  double ul_band_mhz = 1920.0;      // carrier assignment, informational
  double dl_band_mhz = 2110.0;
  double bandwidth_mhz = 20.0;

  std::vector<std::string> validate() const;
};

double lte_peak_rate(const LteProfile& p, Direction dir);

// Gaussian distribution of the meter-to-concentrator hop distance.
struct DistanceDistribution {
  double mean_m = 0.0;
  double sigma_m = 0.0;
  double min_m = 0.0;  // truncation bounds
  double max_m = 0.0;
};

// 900 MHz RF mesh segment: one data concentrator serving n_customers
// meters at a shared data rate.
struct RfMeshProfile {
  double data_rate_bps = 10e6;
  int packet_size_bits = 800;      // 100-byte application packet
  int n_customers = 423;           // meters per concentrator
  double propagation_speed_mps = 3e8;
  DistanceDistribution distance;   // meter<->concentrator hop distance

  std::vector<std::string> validate() const;
};

// Default RF profile for a cell of the given radius: distance mean
// r/2, sigma r/4, truncated to [0, 2r].
RfMeshProfile default_rf_profile(double cell_radius_miles);

// Latency of an n-hop mesh path:
//   T = n * (T_prop + L/R) + (n - 1) * T_proc
// Throws std::domain_error when hops < 1.
double rf_hop_path_delay(int hops, double t_prop_s, int packet_bits,
                         double rate_bps, double t_proc_s);

// End-to-end latency of the meter segment when `overlap` applications
// are active at once:
//   T = overlap * (T_tran + T_prop + T_proc)
// with T_tran = T_proc = S_p * N_c / R and T_prop from the mean hop
// distance. Throws std::domain_error when overlap < 1.
double rf_segment_latency(const RfMeshProfile& p, int overlap);

// Transmission (= processing) time of one full polling cycle,
// S_p * N_c / R; exposed for reporting.
double rf_cycle_time(const RfMeshProfile& p);

struct FiberProfile {
  double rate_bps = 1e9;
  double propagation_speed_mps = 2e8;  // group velocity in glass
};

double propagation_delay(double distance_m, double speed_mps);

// Everything the topology builder and engine need to assign rates.
struct ChannelProfiles {
  FiberProfile fiber;
  WimaxProfile wimax;
  LteProfile lte;
  RfMeshProfile rf;

  // Profiles with the RF distance statistics tied to the given cell size.
  static ChannelProfiles defaults(double cell_radius_miles);
};

}  // namespace ami

#endif
