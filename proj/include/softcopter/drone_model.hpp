#pragma once

#include <array>
#include <string>
#include <vector>

#include "softcopter/types.hpp"

namespace softcopter {

/// Drone description as loaded from a .spec file. Sites are rest-frame
/// coordinates and must lie on the mesh boundary.
struct DroneSpec {
  std::string name;
  double mass = 1.0;               // kg
  double youngs_modulus = 6e3;     // N/m^2
  double poisson_ratio = 0.3;      // paper gives only the modulus; 0.3 is the repo default
  double size_x = 8.0;             // m
  double size_y = 0.1;             // m
  int rod_segments = 40;           // procedural rod resolution
  std::vector<Vec2> rotor_sites;
  std::vector<Vec2> sensor_sites;
  double max_thrust = 10.0;        // N
  double damping_coeff = 1.0;      // 1/s, mass-proportional

  void validate() const;

  /// mu = E / (2(1+nu)), lambda = E nu / ((1+nu)(1-2nu)).
  double lame_mu() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }
  double lame_lambda() const {
    return youngs_modulus * poisson_ratio /
           ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
};

/// Canonical long-rod drone: 5 rotors and 8 sensors evenly spaced along the
/// top face. The site layout is a repo convention; the paper gives only the
/// counts and overall dimensions.
DroneSpec make_rod_spec();

DroneSpec load_spec(const std::string& path);
void save_spec(const DroneSpec& spec, const std::string& path);

struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;          // CCW winding
  std::vector<std::array<int, 2>> boundary_segments;  // directed, interior on the left

  double signed_area(int tri) const;
  double total_area() const;
  Vec2 area_centroid() const;

  /// Rebuilds boundary_segments from the triangle list: edges used by exactly
  /// one triangle, oriented as they appear in it.
  void rebuild_boundary();

  /// Throws unless all triangles are CCW and the boundary forms closed loops.
  void validate() const;
};

/// Regular triangle strip along local X, centered at the origin:
/// (n_segments+1)*2 vertices and 2*n_segments triangles.
TriMesh make_rod_mesh(double length, double thickness, int n_segments);

TriMesh load_mesh(const std::string& path);
void save_mesh(const TriMesh& mesh, const std::string& path);

enum class BindingKind { kRotor, kImu };

/// A rotor or virtual IMU rigidly attached to a small set of boundary
/// vertices. `segments` are the boundary segments with both endpoints bound;
/// they define the current outward normal. `chord` runs between the two
/// extreme bound vertices in boundary order and defines the orientation
/// reading relative to `rest_chord`.
struct Binding {
  BindingKind kind = BindingKind::kImu;
  std::vector<int> vertex_ids;
  Vec2 rest_normal = Vec2(0, 1);
  Vec2 rest_offset = Vec2::Zero();  // site relative to the rest center of mass
  std::vector<std::array<int, 2>> segments;
  std::array<int, 2> chord = {0, 0};
  Vec2 rest_chord = Vec2(1, 0);
};

/// Binds every rotor and sensor site of `spec` to its 3 nearest boundary
/// vertices. Rotors come first, in spec order. Sites farther than 0.05 m from
/// the boundary are rejected by name.
std::vector<Binding> bind_sites(const TriMesh& mesh, const DroneSpec& spec);

/// Central IMU: a diameter chord through the area centroid, built from the
/// boundary vertex nearest the centroid and the one nearest its antipode.
Binding make_central_binding(const TriMesh& mesh);

}  // namespace softcopter
