#include "diracbands/spectral.hpp"

#include <cmath>
#include <string>

#include "diracbands/errors.hpp"
#include "diracbands/parallel.hpp"

namespace diracbands {

BlochHamiltonian assemble(const FourierPotential& V, Vec2 k, const PlaneWaveBasis& basis) {
    if (!same_lattice(V.lattice, basis.lattice))
        throw ConfigError("potential and basis live on different lattices");
    if (!V.real) throw ConfigError("assembly requires a real-flagged potential");

    const int n = static_cast<int>(basis.size());
    BlochHamiltonian H{k, basis, Eigen::MatrixXcd(n, n)};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) H.matrix(a, b) = V.at(basis.indices[a] - basis.indices[b]);
    for (int a = 0; a < n; ++a) {
        const Vec2 kg = k + basis.g_vector(a);
        H.matrix(a, a) += norm2(kg);
    }
    return H;
}

EigenSolution eigensolve(const BlochHamiltonian& H, int n_lowest) {
    const int n = static_cast<int>(H.matrix.rows());
    if (n_lowest < 1 || n_lowest > n)
        throw ConfigError("requested eigenpair count exceeds the basis size");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.matrix);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigensolver failed to converge");

    EigenSolution sol;
    sol.h_norm = std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(n - 1)));
    sol.values = solver.eigenvalues().head(n_lowest);
    sol.vectors = solver.eigenvectors().leftCols(n_lowest);
    sol.residuals.resize(n_lowest);
    for (int j = 0; j < n_lowest; ++j) {
        sol.residuals(j) =
            (H.matrix * sol.vectors.col(j) - sol.values(j) * sol.vectors.col(j)).norm();
        if (sol.residuals(j) > 1e-8 * sol.h_norm)
            throw NumericalError("eigenpair residual " + std::to_string(sol.residuals(j)) +
                                 " exceeds 1e-8 * ||H||");
    }
    return sol;
}

namespace {

template <class Loop>
BandStructure sweep(const FourierPotential& V, const std::vector<PathPoint>& path,
                    const PlaneWaveBasis& basis, int n_bands, Loop&& loop) {
    if (n_bands < 1 || static_cast<std::size_t>(n_bands) > basis.size())
        throw ConfigError("band count must lie in [1, basis size]");

    BandStructure bs;
    bs.samples = path;
    bs.n_bands = n_bands;
    bs.ecut = basis.ecut;
    bs.bands.assign(path.size(), {});
    loop(static_cast<std::int64_t>(path.size()), [&](std::int64_t i) {
        const EigenSolution sol = eigensolve(assemble(V, path[i].k, basis), n_bands);
        bs.bands[i].assign(sol.values.data(), sol.values.data() + n_bands);
    });
    return bs;
}

}  // namespace

BandStructure bands(const FourierPotential& V, const std::vector<PathPoint>& path,
                    const PlaneWaveBasis& basis, int n_bands) {
    return sweep(V, path, basis, n_bands,
                 [](std::int64_t n, auto&& f) { parallel_for(n, f); });
}

BandStructure bands_serial(const FourierPotential& V, const std::vector<PathPoint>& path,
                           const PlaneWaveBasis& basis, int n_bands) {
    return sweep(V, path, basis, n_bands, [](std::int64_t n, auto&& f) {
        for (std::int64_t i = 0; i < n; ++i) f(i);
    });
}

}  // namespace diracbands
