#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "elast/errors.hpp"
#include "elast/mesh.hpp"

namespace elast {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  out << std::setprecision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << mesh.vertices[v].x << ' ' << mesh.vertices[v].y << ' '
        << static_cast<int>(mesh.on_boundary[v]) << '\n';
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.parent[t] << ' '
        << to_string(mesh.kind[t]) << '\n';
  }
}

void write_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MeshError("cannot open '" + path + "' for writing");
  write_mesh(out, mesh);
  if (!out) throw MeshError("failed writing mesh to '" + path + "'");
}

Mesh read_mesh(std::istream& in) {
  // strip '#' comments, then read whitespace-separated tokens
  std::ostringstream clean;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    clean << line << '\n';
  }
  std::istringstream tokens(clean.str());

  long nv = -1, nt = -1;
  if (!(tokens >> nv >> nt) || nv < 0 || nt < 0) throw MeshError("bad mesh header");
  Mesh mesh;
  mesh.vertices.resize(nv);
  mesh.on_boundary.resize(nv);
  for (long v = 0; v < nv; ++v) {
    int flag = 0;
    if (!(tokens >> mesh.vertices[v].x >> mesh.vertices[v].y >> flag)) {
      throw MeshError("truncated vertex list at vertex " + std::to_string(v));
    }
    mesh.on_boundary[v] = flag != 0 ? 1 : 0;
  }
  mesh.triangles.resize(nt);
  mesh.parent.resize(nt);
  mesh.kind.resize(nt);
  for (long t = 0; t < nt; ++t) {
    auto& tri = mesh.triangles[t];
    std::string kind;
    if (!(tokens >> tri[0] >> tri[1] >> tri[2] >> mesh.parent[t] >> kind)) {
      throw MeshError("truncated triangle list at triangle " + std::to_string(t));
    }
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(t) + " has a bad vertex index");
    }
    mesh.kind[t] = refinement_kind_from_string(kind);
    if ((mesh.kind[t] == RefinementKind::root) != (mesh.parent[t] < 0)) {
      throw MeshError("triangle " + std::to_string(t) + ": parent -1 iff kind root");
    }
  }
  return mesh;
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open '" + path + "'");
  return read_mesh(in);
}

}  // namespace elast
