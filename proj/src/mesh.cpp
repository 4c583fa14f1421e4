#include "elast/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "elast/errors.hpp"

namespace elast {

namespace {

constexpr double kGeomTol = 1e-12;

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool near(double a, double b) { return std::abs(a - b) <= kGeomTol; }

}  // namespace

std::string_view to_string(RefinementKind kind) {
  switch (kind) {
    case RefinementKind::root: return "root";
    case RefinementKind::red: return "red";
    case RefinementKind::green: return "green";
    case RefinementKind::blue: return "blue";
  }
  return "root";
}

RefinementKind refinement_kind_from_string(std::string_view name) {
  if (name == "root") return RefinementKind::root;
  if (name == "red") return RefinementKind::red;
  if (name == "green") return RefinementKind::green;
  if (name == "blue") return RefinementKind::blue;
  throw MeshError("unknown refinement kind '" + std::string(name) + "'");
}

double Mesh::signed_area(int t) const {
  const auto& [i, j, k] = triangles[t];
  const Point a = vertices[i], b = vertices[j], c = vertices[k];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += signed_area(t);
  return sum;
}

Point Mesh::centroid(int t) const {
  const auto& [i, j, k] = triangles[t];
  return {(vertices[i].x + vertices[j].x + vertices[k].x) / 3.0,
          (vertices[i].y + vertices[j].y + vertices[k].y) / 3.0};
}

double Mesh::diameter(int t) const {
  const auto& v = triangles[t];
  return std::max({distance(vertices[v[0]], vertices[v[1]]),
                   distance(vertices[v[1]], vertices[v[2]]),
                   distance(vertices[v[2]], vertices[v[0]])});
}

double Mesh::min_angle(int t) const {
  const auto& v = triangles[t];
  double best = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const Point p = vertices[v[i]];
    const Point q = vertices[v[(i + 1) % 3]];
    const Point r = vertices[v[(i + 2) % 3]];
    const double ux = q.x - p.x, uy = q.y - p.y;
    const double wx = r.x - p.x, wy = r.y - p.y;
    const double angle = std::atan2(std::abs(ux * wy - uy * wx), ux * wx + uy * wy);
    best = std::min(best, angle);
  }
  return best;
}

double Mesh::min_angle() const {
  double best = std::numbers::pi;
  for (int t = 0; t < num_triangles(); ++t) best = std::min(best, min_angle(t));
  return best;
}

bool on_domain_boundary(Domain domain, Point p) {
  if (domain == Domain::unit_square) {
    return near(p.x, 0.0) || near(p.x, 1.0) || near(p.y, 0.0) || near(p.y, 1.0);
  }
  if (near(std::abs(p.x), 1.0) || near(std::abs(p.y), 1.0)) return true;
  // re-entrant edges {0} x [-1,0] and [-1,0] x {0}
  if (near(p.x, 0.0) && p.y <= kGeomTol) return true;
  if (near(p.y, 0.0) && p.x <= kGeomTol) return true;
  return false;
}

Mesh generate_initial_mesh(Domain domain, int refinement_level) {
  if (refinement_level < 1) {
    throw MeshError("initial refinement level must be >= 1 so that every "
                    "triangle has a red parent");
  }
  std::vector<Point> corners;
  if (domain == Domain::unit_square) {
    corners = {{0.0, 0.0}};
  } else {
    corners = {{-1.0, 0.0}, {0.0, 0.0}, {0.0, -1.0}};
  }

  Mesh mesh;
  std::map<std::pair<double, double>, int> index;
  auto vertex = [&](double x, double y) {
    auto [it, inserted] = index.try_emplace({x, y}, mesh.num_vertices());
    if (inserted) mesh.vertices.push_back({x, y});
    return it->second;
  };
  // criss-cross: a diagonal split would leave corner triangles with two
  // boundary edges at every level, which the local bubble problems reject
  for (const Point c : corners) {
    const int v00 = vertex(c.x, c.y);
    const int v10 = vertex(c.x + 1.0, c.y);
    const int v11 = vertex(c.x + 1.0, c.y + 1.0);
    const int v01 = vertex(c.x, c.y + 1.0);
    const int mid = vertex(c.x + 0.5, c.y + 0.5);
    mesh.triangles.push_back({v00, v10, mid});
    mesh.triangles.push_back({v10, v11, mid});
    mesh.triangles.push_back({v11, v01, mid});
    mesh.triangles.push_back({v01, v00, mid});
  }
  mesh.on_boundary.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    mesh.on_boundary[i] = on_domain_boundary(domain, mesh.vertices[i]) ? 1 : 0;
  }
  mesh.parent.assign(mesh.triangles.size(), -1);
  mesh.kind.assign(mesh.triangles.size(), RefinementKind::root);

  for (int level = 0; level < refinement_level; ++level) mesh = refine_uniform(mesh);
  return mesh;
}

int EdgeTopology::num_boundary_edges() const {
  int n = 0;
  for (int e = 0; e < num_edges(); ++e) n += is_boundary(e) ? 1 : 0;
  return n;
}

int EdgeTopology::interior_edge_count(int t) const {
  int n = 0;
  for (int e : triangle_edges[t]) n += is_boundary(e) ? 0 : 1;
  return n;
}

EdgeTopology build_edge_topology(const Mesh& mesh) {
  struct HalfEdge {
    int v0, v1, tri, local;
  };
  std::vector<HalfEdge> half;
  half.reserve(3 * mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      int a = v[(i + 1) % 3], b = v[(i + 2) % 3];
      if (a > b) std::swap(a, b);
      if (a == b) throw TopologyError("triangle " + std::to_string(t) + " is degenerate");
      half.push_back({a, b, t, i});
    }
  }
  std::sort(half.begin(), half.end(), [](const HalfEdge& l, const HalfEdge& r) {
    return std::tie(l.v0, l.v1, l.tri) < std::tie(r.v0, r.v1, r.tri);
  });

  EdgeTopology topo;
  topo.triangle_edges.assign(mesh.triangles.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].v0 == half[i].v0 && half[j].v1 == half[i].v1) ++j;
    if (j - i > 2) {
      throw TopologyError("edge (" + std::to_string(half[i].v0) + "," +
                          std::to_string(half[i].v1) + ") has " +
                          std::to_string(j - i) + " adjacent triangles");
    }
    const int e = topo.num_edges();
    topo.edges.push_back({half[i].v0, half[i].v1});
    topo.length.push_back(distance(mesh.vertices[half[i].v0], mesh.vertices[half[i].v1]));
    topo.edge_triangles.push_back({half[i].tri, j - i == 2 ? half[i + 1].tri : -1});
    for (std::size_t k = i; k < j; ++k) topo.triangle_edges[half[k].tri][half[k].local] = e;
    i = j;
  }
  return topo;
}

MacroPartition derive_macroelements(const Mesh& mesh, const EdgeTopology& topo) {
  const int nt = mesh.num_triangles();
  for (int t = 0; t < nt; ++t) {
    if (mesh.parent[t] < 0 || mesh.kind[t] == RefinementKind::root) {
      throw PartitionError("triangle " + std::to_string(t) +
                           " has no parent; macroelements need refined meshes");
    }
  }

  // edge-connected components of each sibling group
  std::vector<int> component(nt, -1);
  int ncomp = 0;
  for (int seed = 0; seed < nt; ++seed) {
    if (component[seed] >= 0) continue;
    std::queue<int> todo;
    todo.push(seed);
    component[seed] = ncomp;
    while (!todo.empty()) {
      const int t = todo.front();
      todo.pop();
      for (int e : topo.triangle_edges[t]) {
        if (topo.is_boundary(e)) continue;
        const auto [k1, k2] = topo.edge_triangles[e];
        const int other = k1 == t ? k2 : k1;
        if (component[other] < 0 && mesh.parent[other] == mesh.parent[t]) {
          component[other] = ncomp;
          todo.push(other);
        }
      }
    }
    ++ncomp;
  }

  std::vector<int> size(ncomp, 0);
  for (int t = 0; t < nt; ++t) ++size[component[t]];

  // single-triangle pieces join an edge neighbour, preferring a real group
  std::vector<int> link(ncomp);
  std::iota(link.begin(), link.end(), 0);
  auto find = [&](int c) {
    while (link[c] != c) c = link[c] = link[link[c]];
    return c;
  };
  for (int t = 0; t < nt; ++t) {
    if (size[component[t]] != 1) continue;
    int target = -1;
    for (int e : topo.triangle_edges[t]) {
      if (topo.is_boundary(e)) continue;
      const auto [k1, k2] = topo.edge_triangles[e];
      const int other = k1 == t ? k2 : k1;
      const bool better = target < 0 || (size[component[other]] > 1 &&
                                         size[component[target]] == 1);
      if (better) target = other;
    }
    if (target >= 0) {
      const int a = find(component[t]), b = find(component[target]);
      if (a != b) link[a] = b;
    }
  }
  std::vector<int> group(nt);
  for (int t = 0; t < nt; ++t) group[t] = find(component[t]);

  MacroPartition part;
  part.macro_of.assign(nt, -1);
  std::map<int, int> renumber;
  for (int t = 0; t < nt; ++t) {
    auto [it, inserted] = renumber.try_emplace(group[t], part.num_macros());
    if (inserted) part.members.emplace_back();
    part.macro_of[t] = it->second;
    part.members[it->second].push_back(t);
  }
  part.interior_edges.resize(part.members.size());
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (topo.is_boundary(e)) continue;
    const auto [k1, k2] = topo.edge_triangles[e];
    if (part.macro_of[k1] == part.macro_of[k2]) {
      part.interior_edges[part.macro_of[k1]].push_back(e);
    }
  }
  return part;
}

MarkedSet mark_dorfler(std::span<const double> indicator_squares, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("Dorfler parameter theta must lie in (0,1]");
  }
  std::vector<int> order(indicator_squares.size());
  std::iota(order.begin(), order.end(), 0);
  for (double v : indicator_squares) {
    if (!(v >= 0.0)) throw std::invalid_argument("indicators must be nonnegative");
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return indicator_squares[a] > indicator_squares[b];
  });
  double total = 0.0;
  for (int i : order) total += indicator_squares[i];

  MarkedSet result;
  if (total <= 0.0) {
    result.all_zero = true;
    return result;
  }
  const double target = theta * total;
  double sum = 0.0;
  for (int i : order) {
    if (indicator_squares[i] <= 0.0) break;
    result.marked.push_back(i);
    sum += indicator_squares[i];
    if (sum >= target) break;
  }
  return result;
}

void check_mesh(const Mesh& mesh, Domain domain) {
  const int nt = mesh.num_triangles();
  if (mesh.parent.size() != mesh.triangles.size() ||
      mesh.kind.size() != mesh.triangles.size() ||
      mesh.on_boundary.size() != mesh.vertices.size()) {
    throw MeshError("mesh arrays have inconsistent sizes");
  }
  for (int t = 0; t < nt; ++t) {
    if (!(mesh.signed_area(t) > 0.0)) {
      throw MeshError("triangle " + std::to_string(t) + " has nonpositive area");
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if ((mesh.on_boundary[v] != 0) != on_domain_boundary(domain, mesh.vertices[v])) {
      throw MeshError("boundary flag of vertex " + std::to_string(v) + " is wrong");
    }
  }
  const EdgeTopology topo = build_edge_topology(mesh);
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (!topo.is_boundary(e)) continue;
    const Point a = mesh.vertices[topo.edges[e][0]];
    const Point b = mesh.vertices[topo.edges[e][1]];
    const Point m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    if (!on_domain_boundary(domain, a) || !on_domain_boundary(domain, b) ||
        !on_domain_boundary(domain, m)) {
      throw MeshError("edge " + std::to_string(e) +
                      " has one neighbour but is not on the boundary (hanging node)");
    }
  }
}

}  // namespace elast
