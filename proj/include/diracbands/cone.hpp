#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "diracbands/lattice.hpp"
#include "diracbands/potential.hpp"
#include "diracbands/symmetry.hpp"

namespace diracbands {

// A maximal run of consecutive eigenvalues of width <= the cluster tolerance,
// separated from its neighbors by more than the gap tolerance. Band indices
// are 1-based; boundary clusters report an infinite outer gap. mu_D is the
// cluster mean.
struct DegeneracyReport {
    double mu_D = 0.0;
    int first_band = 0;
    int last_band = 0;
    int multiplicity = 0;
    double cluster_width = 0.0;
    double gap_below = 0.0;
    double gap_above = 0.0;
};

// Splits sorted values at every gap > gap_tol and reports the groups whose
// width stays within cluster_tol. Requires cluster_tol < gap_tol, so a value
// inserted inside a cluster can never split it.
std::vector<DegeneracyReport> detect_degeneracy(const std::vector<double>& values,
                                                double cluster_tol, double gap_tol);

// Effective two-band model offsets from mu_D at quasimomentum k:
// +-sqrt((delta c)^2 + v_F^2 |k|^2), each twice.
std::array<double, 4> model_bands(double v_F, double c_sharp, double delta, Vec2 k);

// Bands along one ray: bands[i] holds the four cluster bands at radius
// radii[i] along `direction` (unit vector), as absolute values.
struct RayData {
    Vec2 direction;
    std::vector<double> radii;
    std::vector<std::array<double, 4>> bands;
};

// Radial slope fit of the four cluster bands. Per direction the two branches
// below mu_D and the two above are fitted separately: the two-point Richardson
// rule is iterated over the shrinking radius pairs (a full extrapolation
// tableau to radius zero), which removes the slope contamination that grows
// towards the outer edge of the window. v_F_fit pools all of them.
// anisotropy is (max - min)/mean of the per-direction means and eta_max the
// worst relative deviation of a raw slope from v_F_fit inside the window.
struct ConeFit {
    std::vector<Vec2> directions;
    std::vector<double> v_F_lower;
    std::vector<double> v_F_upper;
    double v_F_fit = 0.0;
    double anisotropy = 0.0;
    double eta_max = 0.0;
};

// Throws NumericalError when a branch's pairwise slope estimates change sign
// across the radii (non-conical data) and ConfigError when the window exceeds
// max_radius_rel.
ConeFit fit_cone(const std::vector<RayData>& rays, double mu_D, double k1_norm,
                 double max_radius_rel = 0.05);

struct DegeneracyOptions {
    double cluster_rel = 1e-7;  // times the spectral scale near the cluster
    double gap_rel = 1e-2;
};

// Gamma-point analysis bundle: the fourfold cluster, its (plus, tau)
// eigenfunction with velocity data, the per-sector distance from mu_D to the
// nearest other sector eigenvalue, and the sector weights of phi1. The gap
// coefficient is filled when a perturbation is supplied.
struct GammaDiagnostics {
    DegeneracyReport quartet;
    GammaEigenfunction phi1;
    VSharp vsharp;
    std::optional<double> c_sharp;
    SectorWeights sector_gaps;
    SectorWeights phi1_weights;
};

GammaDiagnostics gamma_diagnostics(const FourierPotential& V, const PlaneWaveBasis& basis,
                                   const FourierPotential* W = nullptr,
                                   const DegeneracyOptions& opts = {});

struct ConeScanOptions {
    int n_directions = 8;
    int n_radii = 5;
    double r_min_rel = 2e-3;  // times |k1|
    double r_max_rel = 2e-2;
};

ConeFit analyze_cone(const FourierPotential& V, const PlaneWaveBasis& basis,
                     const DegeneracyReport& quartet, const ConeScanOptions& opts = {});

// Gamma gap between the second and third members of the split quartet per
// delta, for H with potential V + delta W. fitted_slope extrapolates
// gap/|delta| to delta -> 0; c_sharp_ref is the independently computed gap
// coefficient. When |c_sharp_ref| sits below tolerance the linear law
// degenerates and the scan is flagged inconclusive instead of asserting.
struct GapScan {
    std::vector<double> deltas;
    std::vector<double> gaps;
    double fitted_slope = 0.0;
    double c_sharp_ref = 0.0;
    bool conclusive = true;
    std::string note;
};

GapScan gap_scan(const FourierPotential& V, const FourierPotential& W,
                 const std::vector<double>& deltas, const PlaneWaveBasis& basis);

// Gamma-point shifts of the fourfold cluster (lowest (plus, tau) value) and
// the twofold cluster (lowest (plus, 1) value) of eps V relative to |k1|^2,
// identified by sector label rather than eigenvalue order. Fitted slopes
// come from a least-squares fit shift = s eps + q eps^2; the references are
// c1 - c2 and c1 + 2 c2.
struct ShallowReport {
    std::vector<double> epsilons;
    std::vector<double> fourfold_shift;
    std::vector<double> twofold_shift;
    double quartet_slope = 0.0;
    double doublet_slope = 0.0;
    double quartet_slope_ref = 0.0;
    double doublet_slope_ref = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

ShallowReport shallow_scan(const FourierPotential& V, const std::vector<double>& epsilons,
                           const PlaneWaveBasis& basis);

}  // namespace diracbands
