#include "ami/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ami/csv.hpp"
#include "ami/rng.hpp"

namespace ami {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::ControlCenter: return "control_center";
    case NodeKind::BaseStation: return "base_station";
    case NodeKind::DataConcentrator: return "data_concentrator";
    case NodeKind::SmartMeter: return "smart_meter";
    case NodeKind::FieldDevice: return "field_device";
  }
  return "?";
}

const char* to_string(Backbone b) {
  return b == Backbone::Wimax ? "wimax" : "lte";
}

const char* to_string(LinkTechnology t) {
  switch (t) {
    case LinkTechnology::Fiber: return "fiber";
    case LinkTechnology::Wimax: return "wimax";
    case LinkTechnology::Lte: return "lte";
    case LinkTechnology::Rf900: return "rf900";
  }
  return "?";
}

std::size_t Topology::count(NodeKind k) const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [k](const Node& n) { return n.kind == k; }));
}

bool point_in_hexagon(double px, double py, double cx, double cy, double r) {
  // Flat-top hexagon: vertices at (+-r, 0) and (+-r/2, +-sqrt(3)/2 r).
  double dx = std::fabs(px - cx);
  double dy = std::fabs(py - cy);
  const double s3 = std::sqrt(3.0);
  return dy <= s3 / 2.0 * r && s3 * dx + dy <= s3 * r;
}

std::vector<std::pair<double, double>> hex_grid_centers(int count,
                                                        double radius) {
  // Axial coordinates on a flat-top hex lattice; adjacent centers are
  // sqrt(3)*r apart. Walk rings outward so the first `count` cells
  // stay packed around the origin.
  struct Cand {
    int ring;
    double angle;
    int q, s;
  };
  std::vector<Cand> cands;
  int max_ring = 0;
  while (3 * max_ring * (max_ring + 1) + 1 < count) ++max_ring;
  for (int q = -max_ring; q <= max_ring; ++q) {
    for (int s = -max_ring; s <= max_ring; ++s) {
      int ring = (std::abs(q) + std::abs(s) + std::abs(q + s)) / 2;
      if (ring > max_ring) continue;
      double x = 1.5 * radius * q;
      double y = std::sqrt(3.0) * radius * (s + q / 2.0);
      double angle = std::atan2(y, x);
      if (angle < -1e-12) angle += 2.0 * M_PI;  // order rings from +x CCW
      cands.push_back({ring, angle, q, s});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    if (a.angle != b.angle) return a.angle < b.angle;
    if (a.q != b.q) return a.q < b.q;
    return a.s < b.s;
  });
  std::vector<std::pair<double, double>> centers;
  centers.reserve(count);
  for (int i = 0; i < count; ++i) {
    double x = 1.5 * radius * cands[i].q;
    double y = std::sqrt(3.0) * radius * (cands[i].s + cands[i].q / 2.0);
    centers.emplace_back(x, y);
  }
  return centers;
}

namespace {

std::pair<double, double> sample_in_hexagon(Rng& rng, double cx, double cy,
                                            double r) {
  // Rejection from the bounding box; acceptance ratio is ~0.75.
  const double hy = std::sqrt(3.0) / 2.0 * r;
  for (;;) {
    double x = rng.uniform(-r, r);
    double y = rng.uniform(-hy, hy);
    if (point_in_hexagon(x, y, 0.0, 0.0, r))
      return {cx + x, cy + y};
  }
}

double dist_m(const Node& a, const Node& b) {
  double dx = a.x_miles - b.x_miles;
  double dy = a.y_miles - b.y_miles;
  return std::sqrt(dx * dx + dy * dy) * kMetersPerMile;
}

}  // namespace

Topology build_topology(const ServiceAreaSpec& spec, Backbone backbone,
                        std::uint64_t seed,
                        const std::optional<ChannelProfiles>& profiles) {
  if (!(spec.area_sq_miles > 0.0))
    throw std::invalid_argument("service area must be positive");
  if (spec.cell_count < 1 || spec.concentrators_per_cell < 1 ||
      spec.meters_per_concentrator < 1)
    throw std::invalid_argument("cell/concentrator/meter counts must be >= 1");
  if (spec.field_devices_per_cell < 0)
    throw std::invalid_argument("field device count must be >= 0");

  Topology t;
  t.spec = spec;
  t.backbone = backbone;
  t.cell_radius_miles = hex_radius(spec.cell_area());
  t.channels = profiles ? *profiles
                        : ChannelProfiles::defaults(t.cell_radius_miles);

  double bb_ul, bb_dl;  // shared backbone cell rates
  LinkTechnology bb_tech;
  if (backbone == Backbone::Wimax) {
    bb_ul = wimax_phy_rate(t.channels.wimax, Direction::Uplink);
    bb_dl = wimax_phy_rate(t.channels.wimax, Direction::Downlink);
    bb_tech = LinkTechnology::Wimax;
  } else {
    bb_ul = lte_peak_rate(t.channels.lte, Direction::Uplink);
    bb_dl = lte_peak_rate(t.channels.lte, Direction::Downlink);
    bb_tech = LinkTechnology::Lte;
  }

  auto centers = hex_grid_centers(spec.cell_count, t.cell_radius_miles);

  std::size_t n_nodes =
      1 + static_cast<std::size_t>(spec.cell_count) *
              (1 + spec.concentrators_per_cell * (1 + spec.meters_per_concentrator) +
               spec.field_devices_per_cell);
  t.nodes.reserve(n_nodes);
  t.links.reserve(n_nodes - 1);

  t.nodes.push_back(Node{0, NodeKind::ControlCenter, 0.0, 0.0, {}, 0});

  Rng rng(seed, /*stream=*/0);
  auto add_node = [&](NodeKind kind, double x, double y, NodeId parent,
                      std::uint16_t cell, LinkTechnology tech, double ul,
                      double dl) {
    NodeId id = static_cast<NodeId>(t.nodes.size());
    t.nodes.push_back(Node{id, kind, x, y, parent, cell});
    t.links.push_back(
        Link{parent, id, tech, dist_m(t.nodes[parent], t.nodes[id]), ul, dl});
    return id;
  };

  double fiber = t.channels.fiber.rate_bps;
  double rf = t.channels.rf.data_rate_bps;
  for (int c = 0; c < spec.cell_count; ++c) {
    auto [cx, cy] = centers[c];
    std::uint16_t cell = static_cast<std::uint16_t>(c);
    NodeId bs = add_node(NodeKind::BaseStation, cx, cy, 0, cell,
                         LinkTechnology::Fiber, fiber, fiber);
    for (int d = 0; d < spec.concentrators_per_cell; ++d) {
      auto [dx, dy] = sample_in_hexagon(rng, cx, cy, t.cell_radius_miles);
      NodeId dc =
          add_node(NodeKind::DataConcentrator, dx, dy, bs, cell, bb_tech,
                   bb_ul, bb_dl);
      for (int m = 0; m < spec.meters_per_concentrator; ++m) {
        auto [mx, my] = sample_in_hexagon(rng, cx, cy, t.cell_radius_miles);
        add_node(NodeKind::SmartMeter, mx, my, dc, cell, LinkTechnology::Rf900,
                 rf, rf);
      }
    }
    for (int f = 0; f < spec.field_devices_per_cell; ++f) {
      auto [fx, fy] = sample_in_hexagon(rng, cx, cy, t.cell_radius_miles);
      add_node(NodeKind::FieldDevice, fx, fy, bs, cell, bb_tech, bb_ul, bb_dl);
    }
  }
  return t;
}

namespace {

bool technology_allowed(NodeKind up, NodeKind down, LinkTechnology tech,
                        Backbone backbone) {
  LinkTechnology bb = backbone == Backbone::Wimax ? LinkTechnology::Wimax
                                                  : LinkTechnology::Lte;
  if (up == NodeKind::ControlCenter && down == NodeKind::BaseStation)
    return tech == LinkTechnology::Fiber;
  if (up == NodeKind::BaseStation && down == NodeKind::DataConcentrator)
    return tech == bb;
  if (up == NodeKind::BaseStation && down == NodeKind::FieldDevice)
    return tech == bb;
  if (up == NodeKind::DataConcentrator && down == NodeKind::SmartMeter)
    return tech == LinkTechnology::Rf900;
  return false;
}

}  // namespace

std::vector<std::string> validate_topology(const Topology& t) {
  std::vector<std::string> v;
  auto fail = [&](const std::string& msg) { v.push_back(msg); };

  if (t.nodes.empty()) {
    fail("topology has no nodes");
    return v;
  }
  if (t.nodes.front().kind != NodeKind::ControlCenter)
    fail("node 0 is not the control center");
  std::size_t cc = t.count(NodeKind::ControlCenter);
  if (cc != 1)
    fail("expected exactly one control center, found " + std::to_string(cc));

  // Spec arithmetic.
  const ServiceAreaSpec& s = t.spec;
  auto expect = [&](NodeKind k, std::size_t want) {
    std::size_t got = t.count(k);
    if (got != want)
      fail(std::string("expected ") + std::to_string(want) + " " +
           to_string(k) + " nodes, found " + std::to_string(got));
  };
  expect(NodeKind::BaseStation, static_cast<std::size_t>(s.cell_count));
  expect(NodeKind::DataConcentrator,
         static_cast<std::size_t>(s.cell_count) * s.concentrators_per_cell);
  expect(NodeKind::SmartMeter, static_cast<std::size_t>(s.meter_count()));
  expect(NodeKind::FieldDevice,
         static_cast<std::size_t>(s.cell_count) * s.field_devices_per_cell);

  double r = t.cell_radius_miles;
  if (std::fabs(1.5 * std::sqrt(3.0) * r * r - s.cell_area()) >
      1e-9 * std::max(1.0, s.cell_area()))
    fail("cell radius does not match cell area");

  if (t.links.size() != t.nodes.size() - 1)
    fail("link count " + std::to_string(t.links.size()) + " != nodes-1 " +
         std::to_string(t.nodes.size() - 1));

  // Node ids, parent pointers and per-node upstream links.
  std::vector<std::pair<double, double>> cell_center(s.cell_count,
                                                     {0.0, 0.0});
  for (const Node& n : t.nodes) {
    if (n.id != static_cast<NodeId>(&n - t.nodes.data())) {
      fail("node ids are not dense/ordered");
      return v;
    }
    if (n.kind == NodeKind::BaseStation && n.cell < cell_center.size())
      cell_center[n.cell] = {n.x_miles, n.y_miles};
  }

  for (const Node& n : t.nodes) {
    if (n.kind == NodeKind::ControlCenter) {
      if (n.parent) fail("control center has a parent");
      continue;
    }
    if (!n.parent) {
      fail("node " + std::to_string(n.id) + " (" + to_string(n.kind) +
           ") has no parent");
      continue;
    }
    if (*n.parent >= t.nodes.size()) {
      fail("node " + std::to_string(n.id) + " parent id out of range");
      continue;
    }
    const Node& p = t.nodes[*n.parent];
    bool kind_ok = (n.kind == NodeKind::BaseStation &&
                    p.kind == NodeKind::ControlCenter) ||
                   (n.kind == NodeKind::DataConcentrator &&
                    p.kind == NodeKind::BaseStation) ||
                   (n.kind == NodeKind::SmartMeter &&
                    p.kind == NodeKind::DataConcentrator) ||
                   (n.kind == NodeKind::FieldDevice &&
                    p.kind == NodeKind::BaseStation);
    if (!kind_ok)
      fail("node " + std::to_string(n.id) + " (" + to_string(n.kind) +
           ") has parent of kind " + to_string(p.kind));
    if (n.kind != NodeKind::BaseStation && p.cell != n.cell)
      fail("node " + std::to_string(n.id) + " cell differs from its parent");

    // Upstream link consistency.
    std::size_t li = t.parent_link(n.id);
    if (li >= t.links.size()) {
      fail("node " + std::to_string(n.id) + " has no upstream link");
      continue;
    }
    const Link& l = t.links[li];
    if (l.b != n.id || l.a != *n.parent)
      fail("upstream link of node " + std::to_string(n.id) +
           " does not connect it to its parent");

    // Position inside the owning cell.
    if (n.kind != NodeKind::BaseStation) {
      if (n.cell >= cell_center.size()) {
        fail("node " + std::to_string(n.id) + " cell index out of range");
      } else {
        auto [cx, cy] = cell_center[n.cell];
        if (!point_in_hexagon(n.x_miles, n.y_miles, cx, cy, r * (1 + 1e-9)))
          fail("node " + std::to_string(n.id) + " lies outside its cell");
      }
    }
  }

  // Reachability: walk up the tree; the hierarchy is at most 3 hops deep,
  // so a longer chain means a cycle or tampered parents.
  for (const Node& n : t.nodes) {
    if (n.kind == NodeKind::ControlCenter) continue;
    NodeId cur = n.id;
    bool rooted = false;
    for (int hop = 0; hop < 4; ++hop) {
      const std::optional<NodeId>& p = t.nodes[cur].parent;
      if (!p || *p >= t.nodes.size()) break;
      cur = *p;
      if (t.nodes[cur].kind == NodeKind::ControlCenter) {
        rooted = true;
        break;
      }
    }
    if (!rooted)
      fail("node " + std::to_string(n.id) +
           " cannot reach the control center");
  }

  for (std::size_t i = 0; i < t.links.size(); ++i) {
    const Link& l = t.links[i];
    if (l.a >= t.nodes.size() || l.b >= t.nodes.size()) {
      fail("link " + std::to_string(i) + " has dangling endpoints");
      continue;
    }
    const Node& up = t.nodes[l.a];
    const Node& down = t.nodes[l.b];
    if (!technology_allowed(up.kind, down.kind, l.technology, t.backbone))
      fail("link " + std::to_string(i) + " (" + to_string(up.kind) + "->" +
           to_string(down.kind) + ") carries technology " +
           to_string(l.technology));
    if (!(l.ul_rate_bps > 0.0) || !(l.dl_rate_bps > 0.0))
      fail("link " + std::to_string(i) + " has unpopulated rates");
    if (l.distance_m < 0.0)
      fail("link " + std::to_string(i) + " has negative distance");
    double want = dist_m(up, down);
    if (std::fabs(l.distance_m - want) > 1e-6 * std::max(1.0, want))
      fail("link " + std::to_string(i) +
           " distance does not match endpoint positions");
  }
  return v;
}

void write_topology_csv(const Topology& t, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "id,kind,x_miles,y_miles,parent\n";
  for (const Node& n : t.nodes) {
    out << n.id << ',' << to_string(n.kind) << ',' << fmt_g(n.x_miles) << ','
        << fmt_g(n.y_miles) << ',';
    if (n.parent) out << *n.parent;
    out << '\n';
  }
  out << "\n";
  out << "a,b,technology,distance_m,ul_bps,dl_bps\n";
  for (const Link& l : t.links) {
    out << l.a << ',' << l.b << ',' << to_string(l.technology) << ','
        << fmt_g(l.distance_m) << ',' << fmt_g(l.ul_rate_bps) << ','
        << fmt_g(l.dl_rate_bps) << '\n';
  }
}

}  // namespace ami
