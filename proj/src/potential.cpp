#include "diracbands/potential.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "diracbands/errors.hpp"

namespace diracbands {

double FourierPotential::max_abs() const {
    double m = 0.0;
    for (const auto& [idx, c] : coeffs) m = std::max(m, std::abs(c));
    return m;
}

void FourierPotential::prune(double rel_tol) {
    const double cut = rel_tol * max_abs();
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (std::abs(it->second) <= cut)
            it = coeffs.erase(it);
        else
            ++it;
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::NotHoneycomb: return "not_honeycomb";
        case Verdict::Honeycomb: return "honeycomb";
        case Verdict::SuperHoneycomb: return "super_honeycomb";
        default: return "degenerate_super_honeycomb";
    }
}

namespace {

// Sets 1/2 on the inversion-closed rotation orbit of `seed`.
FourierPotential three_cosine(const LatticeBasis& lattice, MillerIndex seed) {
    FourierPotential V;
    V.lattice = lattice;
    V.real = true;
    for (MillerIndex m : orbit(seed)) {
        V.coeffs[m] = cxd{0.5, 0.0};
        V.coeffs[-m] = cxd{0.5, 0.0};
    }
    return V;
}

}  // namespace

FourierPotential superhoneycomb_cosine(const LatticeBasis& lattice) {
    return three_cosine(lattice, {1, -1});
}

FourierPotential perturbation_cosine(const LatticeBasis& lattice) {
    return three_cosine(lattice, {1, 0});
}

FourierPotential from_samples(const RealSpaceGrid& grid, const LatticeBasis& lattice) {
    const int n1 = grid.n1, n2 = grid.n2;
    if (n1 < 1 || n2 < 1 || grid.values.size() != static_cast<std::size_t>(n1) * n2)
        throw ConfigError("grid dimensions do not match the sample count");
    for (double v : grid.values)
        if (!std::isfinite(v)) throw ConfigError("grid samples must be finite");

    // Retained window: the hexagonal index ball max(|m1|,|m2|,|m1-m2|) <= M
    // with M = min(n1,n2)/4. It is closed under rotation and inversion, and
    // the factor-4 margin keeps every retained coefficient alias-free for
    // grids obeying the 2x sampling rule.
    const int M = std::min(n1, n2) / 4;
    const int w = 2 * M + 1;

    // Forward DFT restricted to the window rows, as two matrix products:
    // fhat = F1 * samples * F2^T / (n1 n2), F[r][a] = exp(-2 pi i m_r a / n).
    Eigen::MatrixXcd samples(n1, n2);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) samples(a, b) = grid.at(a, b);

    auto dft_rows = [&](int n) {
        Eigen::MatrixXcd F(w, n);
        for (int r = 0; r < w; ++r) {
            const int m = r - M;
            for (int a = 0; a < n; ++a)
                F(r, a) = std::polar(1.0, -2.0 * std::numbers::pi * m * a / n);
        }
        return F;
    };
    Eigen::MatrixXcd fhat =
        dft_rows(n1) * samples * dft_rows(n2).transpose() / (static_cast<double>(n1) * n2);

    FourierPotential V;
    V.lattice = lattice;
    for (int r1 = 0; r1 < w; ++r1)
        for (int r2 = 0; r2 < w; ++r2) {
            const int m1 = r1 - M, m2 = r2 - M;
            if (std::abs(m1 - m2) > M) continue;
            V.coeffs[{m1, m2}] = fhat(r1, r2);
        }

    // Real samples give a conjugate-symmetric transform up to rounding;
    // enforce the symmetry exactly so downstream assembly is Hermitian.
    // The window is inversion-closed, so every partner is present.
    for (auto& [m, c] : V.coeffs) {
        auto it = V.coeffs.find(-m);
        const cxd s = 0.5 * (c + std::conj(it->second));
        c = s;
        it->second = std::conj(s);
    }
    V.real = true;
    V.prune();
    return V;
}

FourierPotential apply_symmetry(const FourierPotential& V, const SymmetryOp& op) {
    FourierPotential out;
    out.lattice = V.lattice;
    out.real = V.real;  // all four operations preserve conjugate symmetry
    if (std::holds_alternative<Parity>(op)) {
        for (const auto& [m, c] : V.coeffs) out.coeffs[-m] = c;
    } else if (std::holds_alternative<Conjugation>(op)) {
        for (const auto& [m, c] : V.coeffs) out.coeffs[-m] = std::conj(c);
    } else if (std::holds_alternative<Rotation>(op)) {
        for (const auto& [m, c] : V.coeffs) out.coeffs[rotate_index(m)] = c;
    } else {
        const Vec2 t = std::get<Translation>(op).t;
        for (const auto& [m, c] : V.coeffs) {
            const Vec2 G = m.m1 * V.lattice.k1 + m.m2 * V.lattice.k2;
            out.coeffs[m] = std::polar(1.0, dot(G, t)) * c;
        }
    }
    return out;
}

namespace {

SymmetryReport analyze(const FourierPotential& V, double tol_rel) {
    SymmetryReport rep;
    const double scale = V.max_abs();
    const double tol = tol_rel * scale;

    for (const auto& [m, c] : V.coeffs) {
        rep.real_residual = std::max(rep.real_residual, std::abs(c - std::conj(V.at(-m))));
        rep.even_residual = std::max(rep.even_residual, std::abs(c - V.at(-m)));
        rep.rotation_residual = std::max(rep.rotation_residual, std::abs(c - V.at(rotate_index(m))));
        if (classify_index(m) != TranslationSector::S)
            rep.sub_period_residual = std::max(rep.sub_period_residual, std::abs(c));
    }
    rep.is_real = rep.real_residual <= tol;
    rep.is_even = rep.even_residual <= tol;
    rep.is_rotation_invariant = rep.rotation_residual <= tol;
    rep.has_sub_period = rep.sub_period_residual <= tol;
    rep.c1 = V.at({0, 0});
    rep.c2 = V.at({1, -1});

    if (!(rep.is_real && rep.is_even && rep.is_rotation_invariant))
        rep.verdict = Verdict::NotHoneycomb;
    else if (!rep.has_sub_period)
        rep.verdict = Verdict::Honeycomb;
    else if (std::abs(rep.c2) > tol)
        rep.verdict = Verdict::SuperHoneycomb;
    else
        rep.verdict = Verdict::DegenerateSuperHoneycomb;
    return rep;
}

}  // namespace

SymmetryReport check_honeycomb(const FourierPotential& V, double tol_rel) {
    return analyze(V, tol_rel);
}

SymmetryReport check_super_honeycomb(const FourierPotential& V, double tol_rel) {
    return analyze(V, tol_rel);
}

FourierPotential dimer_build(const FourierPotential& f, double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("dimer ratio r must lie in [0, 1]");
    const Vec2 u3 = f.lattice.u2 - f.lattice.u1;

    auto ghat = [&](MillerIndex m) {
        const Vec2 G = m.m1 * f.lattice.k1 + m.m2 * f.lattice.k2;
        return 2.0 * std::cos(dot(G, 0.5 * r * u3)) * f.at(m);
    };

    // g + Rg + R^2g is constant on each rotation orbit; summing once per
    // orbit in canonical order keeps the result exactly rotation-invariant.
    // Nonzero orbits pair up under inversion, so summing only the lead orbit
    // of each pair and conjugating keeps real input exactly real.
    FourierPotential W;
    W.lattice = f.lattice;
    W.real = f.real;
    std::set<MillerIndex> seen;
    for (const auto& [m, c] : f.coeffs) {
        const auto orb = orbit(m);
        if (seen.count(orb[0])) continue;
        const auto mirror = orbit(-m);
        const bool self = mirror[0] == orb[0];  // only the (0,0) orbit
        const bool lead_is_orb = self || orb[0] < mirror[0];
        const auto& lead = lead_is_orb ? orb : mirror;
        const auto& trail = lead_is_orb ? mirror : orb;
        seen.insert(orb[0]);
        seen.insert(mirror[0]);

        cxd s{0.0, 0.0};
        for (MillerIndex o : lead) s += ghat(o);
        // Each of the three rotated copies contributes one orbit member, so
        // the fixed point (0,0), whose orbit has size 1, collects its term
        // three times over.
        s *= 3.0 / static_cast<double>(lead.size());
        for (MillerIndex o : lead) W.coeffs[o] = s;
        if (!self) {
            cxd t{0.0, 0.0};
            if (f.real) {
                t = std::conj(s);
            } else {
                for (MillerIndex o : trail) t += ghat(o);
            }
            for (MillerIndex o : trail) W.coeffs[o] = t;
        }
    }
    W.prune();
    return W;
}

FourierPotential dimer_build(const RealSpaceGrid& f, const LatticeBasis& lattice, double r) {
    return dimer_build(from_samples(f, lattice), r);
}

RealSpaceGrid disk_potential(const LatticeBasis& lattice, std::pair<double, double> center_frac,
                             double radius, double inside, double outside, int n) {
    if (radius <= 0.0) throw ConfigError("disk radius must be positive");
    if (n < 16) throw ConfigError("disk grid must be at least 16x16");

    const Vec2 center = center_frac.first * lattice.u1 + center_frac.second * lattice.u2;
    RealSpaceGrid grid;
    grid.n1 = grid.n2 = n;
    grid.values.assign(static_cast<std::size_t>(n) * n, outside);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Vec2 x = (static_cast<double>(a) / n) * lattice.u1 +
                           (static_cast<double>(b) / n) * lattice.u2;
            double d2 = std::numeric_limits<double>::infinity();
            for (int i = -1; i <= 1; ++i)
                for (int j = -1; j <= 1; ++j)
                    d2 = std::min(d2, norm2(x - center - static_cast<double>(i) * lattice.u1 -
                                            static_cast<double>(j) * lattice.u2));
            if (d2 < radius * radius) grid.at(a, b) = inside;
        }
    return grid;
}

FourierPotential scaled(const FourierPotential& V, double factor) {
    FourierPotential out = V;
    for (auto& [m, c] : out.coeffs) c *= factor;
    return out;
}

FourierPotential sum(const FourierPotential& a, const FourierPotential& b) {
    if (!same_lattice(a.lattice, b.lattice)) throw ConfigError("potential lattices differ");
    FourierPotential out = a;
    for (const auto& [m, c] : b.coeffs) out.coeffs[m] += c;
    out.real = a.real && b.real;
    out.prune();
    return out;
}

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b, double rel_tol) {
    const double scale = std::max(norm(a.u1) + norm(a.u2), norm(b.u1) + norm(b.u2));
    return norm(a.u1 - b.u1) + norm(a.u2 - b.u2) <= rel_tol * scale;
}

}  // namespace diracbands
