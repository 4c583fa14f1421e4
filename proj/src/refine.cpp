#include <map>

#include "elast/errors.hpp"
#include "elast/mesh.hpp"

namespace elast {

namespace {

// Local index of the longest edge (edge i is opposite vertex i); ties go to
// the lower index so the choice is reproducible.
int longest_edge(const EdgeTopology& topo, int t) {
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (topo.length[topo.triangle_edges[t][i]] >
        topo.length[topo.triangle_edges[t][best]] * (1.0 + 1e-12)) {
      best = i;
    }
  }
  return best;
}

}  // namespace

Mesh refine_rgb(const Mesh& mesh, const MarkedSet& marked) {
  if (marked.marked.empty()) return mesh;

  const int nt = mesh.num_triangles();
  const EdgeTopology topo = build_edge_topology(mesh);
  std::vector<std::uint8_t> edge_marked(topo.num_edges(), 0);
  for (int t : marked.marked) {
    if (t < 0 || t >= nt) throw MeshError("marked triangle out of range");
    for (int e : topo.triangle_edges[t]) edge_marked[e] = 1;
  }

  std::vector<int> longest(nt);
  for (int t = 0; t < nt; ++t) longest[t] = longest_edge(topo, t);

  // closure: a triangle with any refined edge also refines its longest edge
  for (bool changed = true; changed;) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      const auto& te = topo.triangle_edges[t];
      const int e_long = te[longest[t]];
      if (edge_marked[e_long]) continue;
      if (edge_marked[te[0]] || edge_marked[te[1]] || edge_marked[te[2]]) {
        edge_marked[e_long] = 1;
        changed = true;
      }
    }
  }

  Mesh out;
  out.vertices = mesh.vertices;
  out.on_boundary = mesh.on_boundary;
  std::vector<int> midpoint(topo.num_edges(), -1);
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (!edge_marked[e]) continue;
    const Point a = mesh.vertices[topo.edges[e][0]];
    const Point b = mesh.vertices[topo.edges[e][1]];
    midpoint[e] = out.num_vertices();
    out.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    out.on_boundary.push_back(topo.is_boundary(e) ? 1 : 0);
  }

  std::map<int, int> carried_family;
  auto emit = [&](std::array<int, 3> tri, int parent, RefinementKind kind) {
    out.triangles.push_back(tri);
    out.parent.push_back(parent);
    out.kind.push_back(kind);
  };

  for (int t = 0; t < nt; ++t) {
    const auto& v = mesh.triangles[t];
    const auto& te = topo.triangle_edges[t];
    const int count = edge_marked[te[0]] + edge_marked[te[1]] + edge_marked[te[2]];

    if (count == 0) {
      int family = mesh.parent[t];
      if (family >= 0) {
        auto [it, inserted] =
            carried_family.try_emplace(family, nt + static_cast<int>(carried_family.size()));
        family = it->second;
      }
      emit(v, family, mesh.kind[t]);
      continue;
    }

    if (count == 3) {
      const int m0 = midpoint[te[0]], m1 = midpoint[te[1]], m2 = midpoint[te[2]];
      emit({v[0], m2, m1}, t, RefinementKind::red);
      emit({m2, v[1], m0}, t, RefinementKind::red);
      emit({m1, m0, v[2]}, t, RefinementKind::red);
      emit({m0, m1, m2}, t, RefinementKind::red);
      continue;
    }

    // rotate so the longest edge is opposite local vertex 0
    const int l = longest[t];
    const int a = v[l], b = v[(l + 1) % 3], c = v[(l + 2) % 3];
    const int m = midpoint[te[l]];
    if (m < 0) throw MeshError("refinement closure left the longest edge unmarked");
    if (count == 1) {
      emit({a, b, m}, t, RefinementKind::green);
      emit({a, m, c}, t, RefinementKind::green);
      continue;
    }
    const int q_ab = midpoint[te[(l + 2) % 3]];  // edge a-b is opposite c
    const int q_ca = midpoint[te[(l + 1) % 3]];  // edge c-a is opposite b
    if (q_ab >= 0) {
      emit({a, q_ab, m}, t, RefinementKind::blue);
      emit({q_ab, b, m}, t, RefinementKind::blue);
      emit({a, m, c}, t, RefinementKind::blue);
    } else {
      emit({a, b, m}, t, RefinementKind::blue);
      emit({a, m, q_ca}, t, RefinementKind::blue);
      emit({m, c, q_ca}, t, RefinementKind::blue);
    }
  }
  return out;
}

Mesh refine_uniform(const Mesh& mesh) {
  MarkedSet all;
  all.marked.resize(mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) all.marked[t] = t;
  return refine_rgb(mesh, all);
}

}  // namespace elast
