#pragma once

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "diracbands/lattice.hpp"

namespace diracbands {

using cxd = std::complex<double>;

// Sparse Fourier coefficients V(x) = sum_G vhat_G exp(i G . x) over the
// reciprocal lattice of `lattice`. When `real` is set the stored map is
// exactly conjugate-symmetric: vhat_{-G} = conj(vhat_G) entry for entry.
struct FourierPotential {
    LatticeBasis lattice;
    std::map<MillerIndex, cxd> coeffs;
    bool real = false;

    cxd at(MillerIndex m) const {
        auto it = coeffs.find(m);
        return it == coeffs.end() ? cxd{0.0, 0.0} : it->second;
    }
    double max_abs() const;

    // Drops entries at or below rel_tol * max|vhat|, so exact zeros never
    // survive. Conjugate pairs have exactly equal moduli, so pruning
    // preserves the realness invariant.
    void prune(double rel_tol = 1e-14);
};

// Row-major samples on the uniform cell grid x = (a/n1) u1 + (b/n2) u2.
struct RealSpaceGrid {
    int n1 = 0;
    int n2 = 0;
    std::vector<double> values;

    double& at(int a, int b) { return values[static_cast<std::size_t>(a) * n2 + b]; }
    double at(int a, int b) const { return values[static_cast<std::size_t>(a) * n2 + b]; }
};

enum class Verdict { NotHoneycomb, Honeycomb, SuperHoneycomb, DegenerateSuperHoneycomb };

std::string to_string(Verdict v);

// Residuals are maximal coefficient mismatches under each symmetry rule;
// booleans compare them against tol_rel * max|vhat|. c1 and c2 are the
// coefficients at (0,0) and (1,-1); |c2| above tolerance separates the
// super honeycomb verdict from the degenerate one.
struct SymmetryReport {
    bool is_real = false;
    bool is_even = false;
    bool is_rotation_invariant = false;
    bool has_sub_period = false;
    double real_residual = 0.0;
    double even_residual = 0.0;
    double rotation_residual = 0.0;
    double sub_period_residual = 0.0;
    cxd c1{0.0, 0.0};
    cxd c2{0.0, 0.0};
    Verdict verdict = Verdict::NotHoneycomb;
};

// cos(q1.x) + cos(q2.x) + cos(q3.x), q3 = -q1 - q2: coefficient 1/2 on the
// rotation orbit of (1,-1) and its inversion. Sub-period by construction.
FourierPotential superhoneycomb_cosine(const LatticeBasis& lattice);

// cos(k1.x) + cos(k2.x) + cos(k3.x), k3 = -k1 - k2: coefficient 1/2 on
// +-(1,0), +-(0,1), +-(-1,-1). Breaks the sub-period while keeping the
// honeycomb symmetries.
FourierPotential perturbation_cosine(const LatticeBasis& lattice);

// Forward DFT of grid samples. Retains the rotation- and inversion-closed
// hexagonal index window max(|m1|,|m2|,|m1-m2|) <= min(n1,n2)/4, which is
// alias-free when the grid resolves twice the index range of interest (the
// caller's responsibility). Real input is conjugate-symmetrized exactly.
FourierPotential from_samples(const RealSpaceGrid& grid, const LatticeBasis& lattice);

struct Parity {};       // V(x) -> V(-x)
struct Conjugation {};  // V(x) -> conj(V(-x))
struct Rotation {};     // V(x) -> V(R^{-1} x), index map m -> Rm
struct Translation {    // V(x) -> V(x + t), phase exp(i G . t)
    Vec2 t;
};
using SymmetryOp = std::variant<Parity, Conjugation, Rotation, Translation>;

FourierPotential apply_symmetry(const FourierPotential& V, const SymmetryOp& op);

// Both checks fill the full report; neither mutates V. The verdict is
// not_honeycomb unless real, even and rotation-invariant all hold;
// super_honeycomb additionally needs the sub-period and |c2| > tol;
// sub-period with |c2| <= tol is degenerate_super_honeycomb.
SymmetryReport check_honeycomb(const FourierPotential& V, double tol_rel = 1e-10);
SymmetryReport check_super_honeycomb(const FourierPotential& V, double tol_rel = 1e-10);

// Two-center construction: f displaced to the two centers +-(r/2) u3 with
// u3 = u2 - u1, then summed over the three rotations. Each index collects
// ghat_G = 2 cos(G . (r/2) u3) fhat_G over its rotation orbit, the fixed
// point (0,0) three times over, so the result is exactly rotation-invariant
// coefficient for coefficient. r must lie in [0, 1].
FourierPotential dimer_build(const FourierPotential& f, double r);
FourierPotential dimer_build(const RealSpaceGrid& f, const LatticeBasis& lattice, double r);

// Indicator-well samples: `inside` where the periodic-image distance to
// center_frac.first * u1 + center_frac.second * u2 is below radius,
// `outside` elsewhere.
RealSpaceGrid disk_potential(const LatticeBasis& lattice,
                             std::pair<double, double> center_frac = {0.5, 0.5},
                             double radius = 0.1, double inside = 1.0, double outside = 30.0,
                             int n = 128);

FourierPotential scaled(const FourierPotential& V, double factor);

// Coefficient-wise sum; lattices must match.
FourierPotential sum(const FourierPotential& a, const FourierPotential& b);

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b, double rel_tol = 1e-12);

}  // namespace diracbands
