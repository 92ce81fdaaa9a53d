#include "diracbands/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "diracbands/errors.hpp"

namespace diracbands {

std::pair<Vec2, Vec2> dual_basis(Vec2 u1, Vec2 u2) {
    const double det = cross(u1, u2);
    if (std::abs(det) < 1e-12 * norm(u1) * norm(u2))
        throw ConfigError("degenerate lattice basis: periods are collinear");
    const double s = 2.0 * std::numbers::pi / det;
    Vec2 k1{s * u2.y, -s * u2.x};
    Vec2 k2{-s * u1.y, s * u1.x};
    return {k1, k2};
}

LatticeBasis LatticeBasis::from_periods(Vec2 u1, Vec2 u2) {
    LatticeBasis L;
    L.u1 = u1;
    L.u2 = u2;
    std::tie(L.k1, L.k2) = dual_basis(u1, u2);
    L.v1 = (1.0 / 3.0) * (2.0 * u1 - u2);
    L.v2 = (1.0 / 3.0) * (u1 + u2);
    L.q1 = L.k1 - L.k2;
    L.q2 = L.k1 + 2.0 * L.k2;
    L.cell_area = std::abs(cross(u1, u2));
    return L;
}

LatticeBasis LatticeBasis::hexagonal() {
    const double h = std::sqrt(3.0) / 2.0;
    return from_periods({h, 0.5}, {h, -0.5});
}

TranslationSector classify_index(MillerIndex m) {
    const int r = ((m.m1 + m.m2) % 3 + 3) % 3;
    switch (r) {
        case 0: return TranslationSector::S;
        case 1: return TranslationSector::Plus;
        default: return TranslationSector::Minus;
    }
}

std::vector<MillerIndex> orbit(MillerIndex m) {
    if (m == MillerIndex{0, 0}) return {m};
    const MillerIndex a = m, b = rotate_index(m), c = rotate_index(b);
    MillerIndex least = std::min({a, b, c});
    return {least, rotate_index(least), rotate_index(rotate_index(least))};
}

PlaneWaveBasis build_basis(const LatticeBasis& lattice, double ecut) {
    if (ecut < 0.0) throw ConfigError("empty basis: ecut is negative");

    // Gram matrix of (k1, k2); its smallest eigenvalue bounds |G|^2 from
    // below by lam_min * (m1^2 + m2^2), which bounds the search box.
    const double g11 = norm2(lattice.k1);
    const double g22 = norm2(lattice.k2);
    const double g12 = dot(lattice.k1, lattice.k2);
    const double half_tr = 0.5 * (g11 + g22);
    const double lam_min = half_tr - std::sqrt(0.25 * (g11 - g22) * (g11 - g22) + g12 * g12);
    const int mmax = static_cast<int>(std::ceil(std::sqrt(ecut / lam_min))) + 1;

    struct Entry {
        double e;
        MillerIndex m;
    };
    std::vector<Entry> entries;
    for (int m1 = -mmax; m1 <= mmax; ++m1)
        for (int m2 = -mmax; m2 <= mmax; ++m2) {
            const double e = m1 * m1 * g11 + 2.0 * m1 * m2 * g12 + m2 * m2 * g22;
            if (e <= ecut) entries.push_back({e, {m1, m2}});
        }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.e, a.m) < std::tie(b.e, b.m);
    });
    // Magnitudes that agree mathematically can differ by rounding, so a
    // plain float sort would order shell members by noise. Regroup runs of
    // near-equal |G|^2 and order each run lexicographically.
    for (std::size_t lo = 0; lo < entries.size();) {
        std::size_t hi = lo + 1;
        while (hi < entries.size() &&
               entries[hi].e - entries[lo].e <= 1e-9 * std::max(entries[lo].e, 1e-300))
            ++hi;
        std::sort(entries.begin() + lo, entries.begin() + hi,
                  [](const Entry& a, const Entry& b) { return a.m < b.m; });
        lo = hi;
    }

    PlaneWaveBasis basis;
    basis.lattice = lattice;
    basis.ecut = ecut;
    basis.indices.reserve(entries.size());
    for (const auto& [e, m] : entries) {
        basis.pos_.emplace(m, static_cast<int>(basis.indices.size()));
        basis.indices.push_back(m);
    }
    return basis;
}

int PlaneWaveBasis::position(MillerIndex m) const {
    auto it = pos_.find(m);
    return it == pos_.end() ? -1 : it->second;
}

std::vector<PathPoint> k_path(const std::vector<Vec2>& waypoints, int samples_per_segment) {
    if (waypoints.size() < 2) throw ConfigError("k path needs at least two waypoints");
    if (samples_per_segment < 2) throw ConfigError("k path needs at least two samples per segment");

    std::vector<PathPoint> path;
    double arclen = 0.0;
    for (std::size_t s = 0; s + 1 < waypoints.size(); ++s) {
        const Vec2 a = waypoints[s], b = waypoints[s + 1];
        const double step = norm(b - a) / (samples_per_segment - 1);
        const int j0 = (s == 0) ? 0 : 1;  // interior waypoints appear once
        for (int j = j0; j < samples_per_segment; ++j) {
            const double t = static_cast<double>(j) / (samples_per_segment - 1);
            path.push_back({a + t * (b - a), arclen + j * step});
        }
        arclen += norm(b - a);
    }
    return path;
}

}  // namespace diracbands
