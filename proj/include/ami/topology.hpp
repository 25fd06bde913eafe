#ifndef AMI_TOPOLOGY_HPP
#define AMI_TOPOLOGY_HPP

// Service-area topology: a tree rooted at the control center with one
// base station per hexagonal cell, data concentrators and field
// devices inside each cell, and smart meters under each concentrator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ami/channel.hpp"

namespace ami {

constexpr double kMetersPerMile = 1609.344;

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t {
  ControlCenter,
  BaseStation,
  DataConcentrator,
  SmartMeter,
  FieldDevice,
};

enum class Backbone : std::uint8_t { Wimax, Lte };

enum class LinkTechnology : std::uint8_t { Fiber, Wimax, Lte, Rf900 };

const char* to_string(NodeKind k);
const char* to_string(Backbone b);
const char* to_string(LinkTechnology t);

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::ControlCenter;
  double x_miles = 0.0;
  double y_miles = 0.0;
  std::optional<NodeId> parent;  // absent only for the control center
  std::uint16_t cell = 0;        // index of the owning cell (0 for the CC)
};

struct Link {
  NodeId a = 0;  // upstream endpoint (closer to the control center)
  NodeId b = 0;  // downstream endpoint
  LinkTechnology technology = LinkTechnology::Fiber;
  double distance_m = 0.0;
  double ul_rate_bps = 0.0;
  double dl_rate_bps = 0.0;
};

struct ServiceAreaSpec {
  double area_sq_miles = 600.0;
  int cell_count = 15;
  int concentrators_per_cell = 46;
  int meters_per_concentrator = 423;
  int field_devices_per_cell = 5;

  int meter_count() const {
    return cell_count * concentrators_per_cell * meters_per_concentrator;
  }
  double cell_area() const { return area_sq_miles / cell_count; }
};

struct Topology {
  ServiceAreaSpec spec;
  Backbone backbone = Backbone::Wimax;
  double cell_radius_miles = 0.0;
  ChannelProfiles channels;
  std::vector<Node> nodes;
  std::vector<Link> links;

  const Node& control_center() const { return nodes.front(); }
  std::size_t count(NodeKind k) const;
  // Index of the node's upstream link in `links` (one per non-root node).
  std::size_t parent_link(NodeId n) const { return n - 1; }
};

// Flat-top hexagon membership test, circumradius r, centered at (cx, cy).
bool point_in_hexagon(double px, double py, double cx, double cy, double r);

// Centers of `count` hexagonal cells on a centered hex lattice, nearest
// cells first (ring by ring around the origin).
std::vector<std::pair<double, double>> hex_grid_centers(int count,
                                                        double radius);

// Builds the full tree for one service area. Node placement inside each
// hexagon is uniform and deterministic for a fixed seed. Link rates come
// from the channel profiles; when `profiles` is omitted they default to
// ChannelProfiles::defaults(cell radius of `spec`).
// Throws std::invalid_argument for non-positive counts/areas.
Topology build_topology(const ServiceAreaSpec& spec, Backbone backbone,
                        std::uint64_t seed,
                        const std::optional<ChannelProfiles>& profiles = {});

// Structural audit: hierarchy/technology rules, tree connectivity,
// positions inside their cell, spec arithmetic, populated rates.
// Violations are data, not errors: an empty vector means the topology
// is well-formed.
std::vector<std::string> validate_topology(const Topology& t);

// Nodes then links as two comma-separated tables (see README for the
// exact columns).
void write_topology_csv(const Topology& t, const std::string& path);

}  // namespace ami

#endif
