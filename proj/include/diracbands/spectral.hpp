#pragma once

#include <Eigen/Dense>
#include <vector>

#include "diracbands/lattice.hpp"
#include "diracbands/potential.hpp"

namespace diracbands {

// Plane-wave matrix of -(grad + ik).(grad + ik) + V on the given basis:
// entry (a, b) = |k + G_a|^2 delta_ab + vhat_{G_a - G_b}. Exactly Hermitian
// for real-flagged V because stored coefficient pairs are exact conjugates.
struct BlochHamiltonian {
    Vec2 k;
    PlaneWaveBasis basis;
    Eigen::MatrixXcd matrix;
};

// Throws ConfigError when V and basis disagree on the lattice or V is not
// real-flagged (Hermiticity would be lost).
BlochHamiltonian assemble(const FourierPotential& V, Vec2 k, const PlaneWaveBasis& basis);

// Lowest n eigenpairs, values ascending, columns orthonormal. h_norm is the
// spectral norm (largest |eigenvalue|); residuals hold ||H v - mu v|| per
// pair and are enforced to stay below 1e-8 * h_norm.
struct EigenSolution {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd residuals;
    double h_norm = 0.0;
};

EigenSolution eigensolve(const BlochHamiltonian& H, int n_lowest);

struct BandStructure {
    std::vector<PathPoint> samples;
    std::vector<std::vector<double>> bands;  // bands[i][b], sample-major
    int n_bands = 0;
    double ecut = 0.0;
};

// Band sweep along a sampled path. `bands` distributes samples over OpenMP
// workers; `bands_serial` is the plain-loop reference. Both produce
// bit-identical output for any worker count, as each sample is solved
// independently and stored by its path position.
BandStructure bands(const FourierPotential& V, const std::vector<PathPoint>& path,
                    const PlaneWaveBasis& basis, int n_bands);
BandStructure bands_serial(const FourierPotential& V, const std::vector<PathPoint>& path,
                           const PlaneWaveBasis& basis, int n_bands);

}  // namespace diracbands
