#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elast {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Domain { unit_square, l_shape };

enum class RefinementKind : std::uint8_t { root, red, green, blue };

std::string_view to_string(RefinementKind kind);
RefinementKind refinement_kind_from_string(std::string_view name);

/// Conforming triangulation with counterclockwise triangles.
///
/// `parent[t]` identifies the sibling group a triangle was created in. For
/// triangles produced by the most recent refinement it is the index of the
/// refined triangle in the pre-refinement mesh; triangles carried over
/// unchanged keep their group under a fresh id above that range. Root
/// triangles have parent -1.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> on_boundary;
  std::vector<int> parent;
  std::vector<RefinementKind> kind;

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices.size()); }
  [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles.size()); }

  /// Displacement dofs (both components, all vertices) plus one pressure dof
  /// per triangle.
  [[nodiscard]] long dof_count() const {
    return 2L * num_vertices() + num_triangles();
  }

  [[nodiscard]] double signed_area(int t) const;
  [[nodiscard]] double total_area() const;
  [[nodiscard]] Point centroid(int t) const;
  /// Longest edge length.
  [[nodiscard]] double diameter(int t) const;
  /// Smallest interior angle of triangle t, in radians.
  [[nodiscard]] double min_angle(int t) const;
  [[nodiscard]] double min_angle() const;
};

/// Structured criss-cross mesh of the unit square or the L-shape
/// (-1,1)^2 \ (-1,0]^2, red-refined `refinement_level` times.
Mesh generate_initial_mesh(Domain domain, int refinement_level);

struct EdgeTopology {
  /// Vertex pairs with v0 < v1.
  std::vector<std::array<int, 2>> edges;
  std::vector<double> length;
  /// Adjacent triangles; the second entry is -1 for boundary edges.
  std::vector<std::array<int, 2>> edge_triangles;
  /// Local edge i of a triangle is opposite its local vertex i.
  std::vector<std::array<int, 3>> triangle_edges;

  [[nodiscard]] int num_edges() const { return static_cast<int>(edges.size()); }
  [[nodiscard]] bool is_boundary(int e) const { return edge_triangles[e][1] < 0; }
  [[nodiscard]] int num_boundary_edges() const;
  /// Number of edges of triangle t that are interior to the domain.
  [[nodiscard]] int interior_edge_count(int t) const;
};

EdgeTopology build_edge_topology(const Mesh& mesh);

struct MacroPartition {
  std::vector<int> macro_of;
  /// Gamma_M: edges interior to each macroelement.
  std::vector<std::vector<int>> interior_edges;
  std::vector<std::vector<int>> members;

  [[nodiscard]] int num_macros() const { return static_cast<int>(members.size()); }
};

/// Groups triangles into macroelements by sibling group. A group that has
/// lost siblings to later refinement is split into edge-connected pieces,
/// and a piece consisting of a single triangle is merged into an
/// edge-adjacent macroelement.
MacroPartition derive_macroelements(const Mesh& mesh, const EdgeTopology& topo);

struct MarkedSet {
  std::vector<int> marked;
  /// Set when every indicator was zero and nothing could be marked.
  bool all_zero = false;
};

/// Dorfler bulk marking: the shortest prefix of the indicators sorted in
/// descending order (ties by lower index) whose sum reaches theta * total.
MarkedSet mark_dorfler(std::span<const double> indicator_squares, double theta);

/// Red refinement of the marked triangles followed by green/blue closure.
Mesh refine_rgb(const Mesh& mesh, const MarkedSet& marked);

/// Marks and red-refines every triangle.
Mesh refine_uniform(const Mesh& mesh);

/// Throws MeshError when an invariant is broken: nonpositive area,
/// nonconforming edges, or wrong boundary flags for `domain`.
void check_mesh(const Mesh& mesh, Domain domain);

bool on_domain_boundary(Domain domain, Point p);

void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::string& path, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::string& path);

}  // namespace elast
