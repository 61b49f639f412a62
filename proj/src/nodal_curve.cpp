#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "lane_emden/errors.hpp"
#include "lane_emden/planar.hpp"

namespace lane_emden::planar {

// Marching squares on the full-circle (tau, phi) grid. The sector values are
// repeated m times, which is exact for a rotation-invariant solution.
NodalCurve extract_nodal_curve(const PlanarSolution& sol) {
  const SymmetricDomain& d = sol.domain;
  const int ns = d.n_s();
  const int nt = d.n_theta();
  const int K = d.m() * nt;
  const auto val = [&](int j, int k) { return sol.at(j, k % nt); };
  const auto positive = [&](int j, int k) { return val(j, k) > 0.0; };

  // Edge ids: 2*(j*K + k) for the tau-edge (j,k)-(j+1,k), +1 for the phi-edge
  // (j,k)-(j,k+1).
  const auto tau_edge = [K](int j, int k) {
    return 2 * (static_cast<std::int64_t>(j) * K + k);
  };
  const auto phi_edge = [K](int j, int k) {
    return 2 * (static_cast<std::int64_t>(j) * K + k) + 1;
  };

  std::unordered_map<std::int64_t, std::vector<std::int64_t>> adjacency;
  const auto link = [&](std::int64_t a, std::int64_t b) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  };

  // Cells touching the boundary row (u = 0) are skipped: a zero there is not
  // a sign change.
  for (int j = 0; j + 1 < ns; ++j) {
    for (int k = 0; k < K; ++k) {
      const int k1 = (k + 1) % K;
      const bool c0 = positive(j, k);
      const bool c1 = positive(j, k1);
      const bool c2 = positive(j + 1, k1);
      const bool c3 = positive(j + 1, k);
      const std::int64_t e0 = phi_edge(j, k);
      const std::int64_t e1 = tau_edge(j, k1);
      const std::int64_t e2 = phi_edge(j + 1, k);
      const std::int64_t e3 = tau_edge(j, k);
      std::vector<std::int64_t> cut;
      if (c0 != c1) cut.push_back(e0);
      if (c1 != c2) cut.push_back(e1);
      if (c2 != c3) cut.push_back(e2);
      if (c3 != c0) cut.push_back(e3);
      if (cut.size() == 2) {
        link(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const double centre = 0.25 * (val(j, k) + val(j, k1) + val(j + 1, k1) + val(j + 1, k));
        if ((centre > 0.0) == c0) {
          link(e0, e1);
          link(e2, e3);
        } else {
          link(e3, e0);
          link(e1, e2);
        }
      }
    }
  }
  if (adjacency.empty()) throw StructureError("extract_nodal_curve: no nodal line");

  const auto crossing = [&](std::int64_t id) {
    const bool is_phi = (id & 1) != 0;
    const std::int64_t cell = id / 2;
    const int j = static_cast<int>(cell / K);
    const int k = static_cast<int>(cell % K);
    const int j1 = is_phi ? j : j + 1;
    const int k1 = is_phi ? (k + 1) % K : k;
    const double u0 = val(j, k);
    const double u1 = val(j1, k1);
    const double s = u0 / (u0 - u1);
    const double t = d.tau(j) + (is_phi ? 0.0 : s * d.h_tau());
    const double ph = (k + (is_phi ? s : 0.0)) * d.h_phi();
    const double r = std::exp(t) * d.rho(ph);
    return Point{r * std::cos(ph), r * std::sin(ph)};
  };

  for (const auto& [id, nbrs] : adjacency) {
    if (nbrs.size() != 2) {
      throw StructureError("extract_nodal_curve: nodal line is not a closed curve");
    }
  }

  NodalCurve curve;
  const std::int64_t start = adjacency.begin()->first;
  std::int64_t prev = -1;
  std::int64_t cur = start;
  std::size_t visited = 0;
  do {
    curve.vertices.push_back(crossing(cur));
    ++visited;
    const auto& nb = adjacency.at(cur);
    const std::int64_t next = nb[0] != prev ? nb[0] : nb[1];
    prev = cur;
    cur = next;
  } while (cur != start && visited <= adjacency.size());
  if (visited != adjacency.size()) {
    throw StructureError("extract_nodal_curve: found " +
                         std::string(visited < adjacency.size() ? "several" : "malformed") +
                         " nodal curves");
  }

  double turn = 0.0;
  curve.max_radius = 0.0;
  curve.min_radius = std::numeric_limits<double>::infinity();
  const std::size_t n = curve.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = curve.vertices[i];
    const Point b = curve.vertices[(i + 1) % n];
    turn += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
    curve.max_radius = std::max(curve.max_radius, a.norm());
    curve.min_radius = std::min(curve.min_radius, a.norm());
  }
  curve.winding_about_origin = static_cast<int>(std::lround(turn / (2.0 * std::numbers::pi)));
  if (curve.winding_about_origin < 0) {
    // Orient counter-clockwise.
    std::reverse(curve.vertices.begin(), curve.vertices.end());
    curve.winding_about_origin = -curve.winding_about_origin;
  }
  return curve;
}

}  // namespace lane_emden::planar
