#include "softcopter/drone_model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace softcopter {

void DroneSpec::validate() const {
  require(mass > 0.0, "spec: mass must be > 0");
  require(youngs_modulus > 0.0, "spec: youngs_modulus must be > 0");
  require(poisson_ratio >= 0.0 && poisson_ratio < 0.5, "spec: poisson_ratio must be in [0, 0.5)");
  require(max_thrust > 0.0, "spec: max_thrust must be > 0");
  require(damping_coeff >= 0.0, "spec: damping_coeff must be >= 0");
  require(size_x > 0.0 && size_y > 0.0, "spec: dimensions must be > 0");
}

DroneSpec make_rod_spec() {
  DroneSpec spec;
  spec.name = "rod";
  spec.mass = 1.0;
  spec.youngs_modulus = 6e3;
  spec.size_x = 8.0;
  spec.size_y = 0.1;
  spec.rod_segments = 40;
  spec.max_thrust = 10.0;
  const double top = spec.size_y / 2.0;
  for (int i = 1; i <= 5; ++i)
    spec.rotor_sites.emplace_back(spec.size_x * (i / 6.0 - 0.5), top);
  for (int j = 1; j <= 8; ++j)
    spec.sensor_sites.emplace_back(spec.size_x * (j / 9.0 - 0.5), top);
  return spec;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

DroneSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "spec: cannot open " + path);
  DroneSpec spec;
  spec.rotor_sites.clear();
  spec.sensor_sites.clear();
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "name") {
      ls >> spec.name;
    } else if (key == "mass") {
      ls >> spec.mass;
    } else if (key == "modulus") {
      ls >> spec.youngs_modulus;
    } else if (key == "poisson") {
      ls >> spec.poisson_ratio;
    } else if (key == "geometry") {
      std::string kind;
      ls >> kind >> spec.size_x >> spec.size_y >> spec.rod_segments;
      require(kind == "rod", "spec: unknown geometry kind '" + kind + "'");
    } else if (key == "rotor") {
      double x, y;
      ls >> x >> y;
      spec.rotor_sites.emplace_back(x, y);
    } else if (key == "sensor") {
      double x, y;
      ls >> x >> y;
      spec.sensor_sites.emplace_back(x, y);
    } else if (key == "max_thrust") {
      ls >> spec.max_thrust;
    } else if (key == "damping") {
      ls >> spec.damping_coeff;
    } else {
      throw ContractViolation("spec: unknown key '" + key + "' in " + path);
    }
  }
  spec.validate();
  return spec;
}

void save_spec(const DroneSpec& spec, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "spec: cannot write " + path);
  out << "name " << spec.name << "\n";
  out << "mass " << fmt_num(spec.mass) << "\n";
  out << "modulus " << fmt_num(spec.youngs_modulus) << "\n";
  out << "poisson " << fmt_num(spec.poisson_ratio) << "\n";
  out << "geometry rod " << fmt_num(spec.size_x) << " " << fmt_num(spec.size_y) << " "
      << spec.rod_segments << "\n";
  for (const auto& r : spec.rotor_sites)
    out << "rotor " << fmt_num(r.x()) << " " << fmt_num(r.y()) << "\n";
  for (const auto& s : spec.sensor_sites)
    out << "sensor " << fmt_num(s.x()) << " " << fmt_num(s.y()) << "\n";
  out << "max_thrust " << fmt_num(spec.max_thrust) << "\n";
  out << "damping " << fmt_num(spec.damping_coeff) << "\n";
}

double TriMesh::signed_area(int tri) const {
  const auto& t = triangles[tri];
  const Vec2 e1 = vertices[t[1]] - vertices[t[0]];
  const Vec2 e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * cross2(e1, e2);
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (int i = 0; i < static_cast<int>(triangles.size()); ++i) a += signed_area(i);
  return a;
}

Vec2 TriMesh::area_centroid() const {
  Vec2 c = Vec2::Zero();
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(triangles.size()); ++i) {
    const auto& t = triangles[i];
    const double a = signed_area(i);
    c += a / 3.0 * (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]);
    total += a;
  }
  require(total > 0.0, "mesh: degenerate total area");
  return c / total;
}

void TriMesh::rebuild_boundary() {
  // Edge -> usage count, keyed by the undirected pair; keep directed form.
  std::map<std::pair<int, int>, std::pair<int, std::array<int, 2>>> edges;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto& e = edges[{key.first, key.second}];
      e.first += 1;
      e.second = {a, b};
    }
  }
  boundary_segments.clear();
  for (const auto& [key, e] : edges) {
    if (e.first == 1) boundary_segments.push_back(e.second);
  }
  // Deterministic order: sort by first vertex then second.
  std::sort(boundary_segments.begin(), boundary_segments.end());
}

void TriMesh::validate() const {
  const int nv = static_cast<int>(vertices.size());
  for (const auto& t : triangles)
    for (int v : t) require(v >= 0 && v < nv, "mesh: triangle index out of range");
  for (int i = 0; i < static_cast<int>(triangles.size()); ++i)
    require(signed_area(i) > 0.0, "mesh: triangle " + std::to_string(i) + " is not CCW");
  // Closed loops: every boundary vertex has exactly one outgoing and one
  // incoming segment.
  std::map<int, int> out_deg, in_deg;
  for (const auto& s : boundary_segments) {
    out_deg[s[0]] += 1;
    in_deg[s[1]] += 1;
  }
  require(out_deg.size() == in_deg.size(), "mesh: open boundary chain");
  for (const auto& [v, d] : out_deg)
    require(d == 1 && in_deg[v] == 1, "mesh: boundary is not a set of simple closed loops");
}

TriMesh make_rod_mesh(double length, double thickness, int n_segments) {
  require(length > 0.0 && thickness > 0.0, "make_rod_mesh: dimensions must be > 0");
  require(n_segments >= 2, "make_rod_mesh: n_segments must be >= 2");
  TriMesh mesh;
  const double half_t = thickness / 2.0;
  for (int i = 0; i <= n_segments; ++i) {
    const double x = -length / 2.0 + length * static_cast<double>(i) / n_segments;
    mesh.vertices.emplace_back(x, -half_t);  // bottom: id 2i
    mesh.vertices.emplace_back(x, half_t);   // top: id 2i+1
  }
  for (int i = 0; i < n_segments; ++i) {
    const int b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * (i + 1), t1 = 2 * (i + 1) + 1;
    mesh.triangles.push_back({b0, b1, t1});
    mesh.triangles.push_back({b0, t1, t0});
  }
  mesh.rebuild_boundary();
  mesh.validate();
  return mesh;
}

TriMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "mesh: cannot open " + path);
  std::string tag;
  int nv = 0, nt = 0;
  in >> tag >> nv >> nt;
  require(tag == "trimesh" && nv > 0 && nt > 0, "mesh: bad header in " + path);
  TriMesh mesh;
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices) in >> v.x() >> v.y();
  mesh.triangles.resize(nt);
  for (auto& t : mesh.triangles) in >> t[0] >> t[1] >> t[2];
  require(in.good(), "mesh: truncated file " + path);
  mesh.rebuild_boundary();
  mesh.validate();
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "mesh: cannot write " + path);
  out << "trimesh " << mesh.vertices.size() << " " << mesh.triangles.size() << "\n";
  for (const auto& v : mesh.vertices) out << fmt_num(v.x()) << " " << fmt_num(v.y()) << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

std::vector<int> boundary_vertex_ids(const TriMesh& mesh) {
  std::vector<int> ids;
  for (const auto& s : mesh.boundary_segments) ids.push_back(s[0]);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<int> nearest_boundary_vertices(const TriMesh& mesh, const Vec2& site, int k) {
  auto ids = boundary_vertex_ids(mesh);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    const double da = (mesh.vertices[a] - site).norm(), db = (mesh.vertices[b] - site).norm();
    if (da != db) return da < db;
    return a < b;
  });
  ids.resize(std::min<std::size_t>(k, ids.size()));
  return ids;
}

// Position of a vertex along the boundary loop order, for chord orientation.
std::map<int, int> boundary_loop_positions(const TriMesh& mesh) {
  std::map<int, int> next;
  for (const auto& s : mesh.boundary_segments) next[s[0]] = s[1];
  std::map<int, int> pos;
  int counter = 0;
  for (const auto& [start, unused] : next) {
    if (pos.count(start)) continue;
    int v = start;
    while (!pos.count(v)) {
      pos[v] = counter++;
      v = next.at(v);
    }
  }
  return pos;
}

Binding make_binding(const TriMesh& mesh, BindingKind kind, const Vec2& site, const Vec2& com,
                     const std::string& label) {
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& s : mesh.boundary_segments)
    dist = std::min(dist, point_segment_distance(site, mesh.vertices[s[0]], mesh.vertices[s[1]]));
  if (dist > 0.05) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "bind_sites: %s site (%g, %g) is %.3g m from the boundary",
                  label.c_str(), site.x(), site.y(), dist);
    throw ContractViolation(buf);
  }

  Binding binding;
  binding.kind = kind;
  binding.vertex_ids = nearest_boundary_vertices(mesh, site, 3);
  require(!binding.vertex_ids.empty(), "bind_sites: mesh has no boundary vertices");

  const auto in_set = [&](int v) {
    return std::find(binding.vertex_ids.begin(), binding.vertex_ids.end(), v) !=
           binding.vertex_ids.end();
  };
  for (const auto& s : mesh.boundary_segments)
    if (in_set(s[0]) && in_set(s[1])) binding.segments.push_back(s);
  if (binding.segments.empty()) {
    // Fall back to the segments adjacent to the nearest bound vertex.
    const int anchor = binding.vertex_ids.front();
    for (const auto& s : mesh.boundary_segments)
      if (s[0] == anchor || s[1] == anchor) binding.segments.push_back(s);
  }
  require(!binding.segments.empty(), "bind_sites: no boundary segments near site");

  Vec2 n = Vec2::Zero();
  for (const auto& s : binding.segments) {
    const Vec2 un = edge_outward_normal(mesh.vertices[s[0]], mesh.vertices[s[1]]);
    require(un.norm() > 1e-12, "bind_sites: degenerate boundary segment");
    n += un.normalized();
  }
  require(n.norm() > 1e-12, "bind_sites: adjacent normals cancel");
  binding.rest_normal = n.normalized();
  binding.rest_offset = site - com;

  // Chord between the extreme bound vertices in boundary order.
  const auto pos = boundary_loop_positions(mesh);
  auto sorted = binding.vertex_ids;
  std::sort(sorted.begin(), sorted.end(),
            [&](int a, int b) { return pos.at(a) < pos.at(b); });
  binding.chord = {sorted.front(), sorted.back()};
  binding.rest_chord = mesh.vertices[binding.chord[1]] - mesh.vertices[binding.chord[0]];
  require(binding.rest_chord.norm() > 1e-12, "bind_sites: degenerate binding chord");
  return binding;
}

}  // namespace

std::vector<Binding> bind_sites(const TriMesh& mesh, const DroneSpec& spec) {
  const Vec2 com = mesh.area_centroid();
  std::vector<Binding> bindings;
  for (std::size_t i = 0; i < spec.rotor_sites.size(); ++i)
    bindings.push_back(make_binding(mesh, BindingKind::kRotor, spec.rotor_sites[i], com,
                                    "rotor " + std::to_string(i)));
  for (std::size_t i = 0; i < spec.sensor_sites.size(); ++i)
    bindings.push_back(make_binding(mesh, BindingKind::kImu, spec.sensor_sites[i], com,
                                    "sensor " + std::to_string(i)));
  return bindings;
}

Binding make_central_binding(const TriMesh& mesh) {
  const Vec2 com = mesh.area_centroid();
  const int a = nearest_boundary_vertices(mesh, com, 1).front();
  const Vec2 antipode = 2.0 * com - mesh.vertices[a];
  int b = a;
  double best = std::numeric_limits<double>::infinity();
  for (int v : boundary_vertex_ids(mesh)) {
    if (v == a) continue;
    const double d = (mesh.vertices[v] - antipode).norm();
    if (d < best) {
      best = d;
      b = v;
    }
  }
  require(b != a, "central binding: mesh has a single boundary vertex");
  Binding binding;
  binding.kind = BindingKind::kImu;
  binding.vertex_ids = {a, b};
  binding.chord = {a, b};
  binding.rest_chord = mesh.vertices[b] - mesh.vertices[a];
  require(binding.rest_chord.norm() > 1e-12, "central binding: degenerate chord");
  binding.rest_offset = 0.5 * (mesh.vertices[a] + mesh.vertices[b]) - com;
  // Central normal is only used for reporting; take the chord's left normal.
  binding.rest_normal = Vec2(-binding.rest_chord.normalized().y(),
                             binding.rest_chord.normalized().x());
  return binding;
}

}  // namespace softcopter
