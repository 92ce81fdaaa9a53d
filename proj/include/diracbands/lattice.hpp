#pragma once

#include <cmath>
#include <compare>
#include <map>
#include <utility>
#include <vector>

namespace diracbands {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

// Direct periods u1, u2 with their dual pair (ui . kj = 2 pi delta_ij), the
// three-fold subcell periods v1 = (2 u1 - u2)/3, v2 = (u1 + u2)/3 and the
// dual pair q1 = k1 - k2, q2 = k1 + 2 k2 of the v-lattice.
struct LatticeBasis {
    Vec2 u1, u2;
    Vec2 k1, k2;
    Vec2 v1, v2;
    Vec2 q1, q2;
    double cell_area = 0.0;

    static LatticeBasis from_periods(Vec2 u1, Vec2 u2);

    // Unit hexagonal lattice: u1 = (sqrt3/2, 1/2), u2 = (sqrt3/2, -1/2).
    static LatticeBasis hexagonal();
};

// Throws ConfigError when u1, u2 are (nearly) collinear.
std::pair<Vec2, Vec2> dual_basis(Vec2 u1, Vec2 u2);

struct MillerIndex {
    int m1 = 0;
    int m2 = 0;
    auto operator<=>(const MillerIndex&) const = default;
};

inline MillerIndex operator+(MillerIndex a, MillerIndex b) { return {a.m1 + b.m1, a.m2 + b.m2}; }
inline MillerIndex operator-(MillerIndex a, MillerIndex b) { return {a.m1 - b.m1, a.m2 - b.m2}; }
inline MillerIndex operator-(MillerIndex a) { return {-a.m1, -a.m2}; }

// Index action of the 2 pi/3 rotation on reciprocal vectors: R(m1 k1 + m2 k2)
// = -m2 k1 + (m1 - m2) k2. Applying it three times is the identity.
inline MillerIndex rotate_index(MillerIndex m) { return {-m.m2, m.m1 - m.m2}; }

enum class TranslationSector { S, Plus, Minus };

// Sector of exp(i G . x) under translation by v1: (m1 + m2) mod 3 mapped to
// 0 -> S, 1 -> Plus, 2 -> Minus.
TranslationSector classify_index(MillerIndex m);

// Rotation orbit {m, Rm, R^2 m}, listed with the lexicographically least
// member first and then its successive rotations. Size 1 only for (0,0).
std::vector<MillerIndex> orbit(MillerIndex m);

// Plane-wave index set |m1 k1 + m2 k2|^2 <= ecut in a deterministic order:
// ascending |G|^2, ties broken lexicographically by (m1, m2). The set is
// closed under rotation and inversion because |G|^2 is invariant under both.
struct PlaneWaveBasis {
    LatticeBasis lattice;
    double ecut = 0.0;
    std::vector<MillerIndex> indices;

    std::size_t size() const { return indices.size(); }
    Vec2 g_vector(MillerIndex m) const { return m.m1 * lattice.k1 + m.m2 * lattice.k2; }
    Vec2 g_vector(std::size_t i) const { return g_vector(indices[i]); }

    // Position of m in the ordering, or -1 when m is outside the cutoff.
    int position(MillerIndex m) const;

  private:
    friend PlaneWaveBasis build_basis(const LatticeBasis&, double);
    std::map<MillerIndex, int> pos_;
};

PlaneWaveBasis build_basis(const LatticeBasis& lattice, double ecut);

struct PathPoint {
    Vec2 k;
    double arclen = 0.0;
};

// Samples each waypoint segment uniformly with samples_per_segment points,
// endpoints included; interior waypoints are not duplicated. Arclength is
// cumulative and monotone (zero-length segments advance it by zero).
std::vector<PathPoint> k_path(const std::vector<Vec2>& waypoints, int samples_per_segment);

}  // namespace diracbands
