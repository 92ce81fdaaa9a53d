#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "diracbands/lattice.hpp"
#include "diracbands/potential.hpp"

namespace diracbands {

// Eigenvalue of the 2 pi/3 rotation on a symmetry-adapted function:
// 1, tau = exp(2 pi i/3) or conj(tau).
enum class RotationSector { One, Tau, TauBar };

cxd xi_value(RotationSector xi);
RotationSector conjugate_xi(RotationSector xi);

// S is fixed under parity; Plus and Minus swap.
TranslationSector parity_sector(TranslationSector sigma);

struct SectorId {
    TranslationSector sigma = TranslationSector::S;
    RotationSector xi = RotationSector::One;
    bool operator==(const SectorId&) const = default;
};

std::string to_string(TranslationSector sigma);
std::string to_string(SectorId id);

// Orthonormal columns spanning one of the nine translation x rotation
// sectors at the Gamma point. Each rotation orbit {c, Rc, R^2c} of the
// sector's index set contributes one column with weights (1, conj(xi), xi)
// / sqrt(3) in that order, the lexicographically least member c first. The
// (0,0) singleton contributes a unit column to (S, 1) only.
struct SymmetrizedBasis {
    SectorId sector;
    std::vector<MillerIndex> orbit_reps;
    Eigen::MatrixXcd columns;  // basis.size() x orbit_reps.size()
};

SymmetrizedBasis sector_basis(const PlaneWaveBasis& basis, TranslationSector sigma,
                              RotationSector xi);

// Gamma-point eigenfunction as plane-wave coefficients over `basis`,
// unit-normalized, with a deterministic overall phase (the first coefficient
// of maximal modulus is rotated to the positive real axis).
struct GammaEigenfunction {
    Eigen::VectorXcd coeffs;
    double value = 0.0;
    SectorId sector;
};

// Lowest n eigenvalues of H(0) restricted to one sector, with eigenfunctions
// lifted back to full plane-wave coefficients. Throws when the sector has no
// columns in this basis.
std::vector<GammaEigenfunction> sector_spectrum(const FourierPotential& V,
                                                TranslationSector sigma, RotationSector xi,
                                                const PlaneWaveBasis& basis, int n);

// Squared projection weights of a unit vector on the nine sector bases;
// they sum to 1 because the sector columns jointly form a unitary.
struct SectorWeights {
    std::array<std::array<double, 3>, 3> w{};  // [sigma][xi]

    double& at(TranslationSector sigma, RotationSector xi) {
        return w[static_cast<int>(sigma)][static_cast<int>(xi)];
    }
    double at(TranslationSector sigma, RotationSector xi) const {
        return w[static_cast<int>(sigma)][static_cast<int>(xi)];
    }
    double total() const;
};

SectorWeights classify_eigenvector(const Eigen::VectorXcd& v, const PlaneWaveBasis& basis);

// Images of phi1 under the antiunitary and parity symmetries, coefficient
// rules: phi2 = PC phi1: a_G -> conj(a_G); phi3 = P phi1: a_G -> a_{-G};
// phi4 = C phi1: a_G -> conj(a_{-G}). All share phi1's eigenvalue.
struct Partners {
    GammaEigenfunction phi2, phi3, phi4;
};

Partners symmetry_partners(const GammaEigenfunction& phi1, const PlaneWaveBasis& basis);

// First-order velocity data of the degenerate pair: v = i sum_G G conj(a_G)^2
// (each component complex), the Fermi velocity v_F = sqrt(2) |v| and the
// internal angle of the (1, +-i) factorization. Requires sector (Plus, tau).
struct VSharp {
    cxd x{0.0, 0.0};
    cxd y{0.0, 0.0};
    double v_F = 0.0;
    double theta = 0.0;
};

VSharp v_sharp(const GammaEigenfunction& phi1, const PlaneWaveBasis& basis);

// <f, W g> = sum_{G,G'} conj(f_G) what_{G-G'} g_{G'} on the given basis.
cxd potential_element(const GammaEigenfunction& f, const FourierPotential& W,
                      const GammaEigenfunction& g, const PlaneWaveBasis& basis);

// Gap coefficient <phi1, W phi3>. W must be real, even and rotation
// invariant; the value is then real up to roundoff (enforced to 1e-8 of the
// element or of max|what|, whichever is larger) and the real part is
// returned.
double c_sharp(const GammaEigenfunction& phi1, const GammaEigenfunction& phi3,
               const FourierPotential& W, const PlaneWaveBasis& basis);

struct DiracInvariants {
    VSharp vsharp;
    double c_sharp = 0.0;
};

}  // namespace diracbands
