#include "diracbands/symmetry.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "diracbands/errors.hpp"
#include "diracbands/spectral.hpp"

namespace diracbands {

cxd xi_value(RotationSector xi) {
    switch (xi) {
        case RotationSector::One: return {1.0, 0.0};
        case RotationSector::Tau: return std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
        default: return std::polar(1.0, -2.0 * std::numbers::pi / 3.0);
    }
}

RotationSector conjugate_xi(RotationSector xi) {
    switch (xi) {
        case RotationSector::One: return RotationSector::One;
        case RotationSector::Tau: return RotationSector::TauBar;
        default: return RotationSector::Tau;
    }
}

TranslationSector parity_sector(TranslationSector sigma) {
    switch (sigma) {
        case TranslationSector::S: return TranslationSector::S;
        case TranslationSector::Plus: return TranslationSector::Minus;
        default: return TranslationSector::Plus;
    }
}

std::string to_string(TranslationSector sigma) {
    switch (sigma) {
        case TranslationSector::S: return "s";
        case TranslationSector::Plus: return "plus";
        default: return "minus";
    }
}

std::string to_string(SectorId id) {
    std::string xi;
    switch (id.xi) {
        case RotationSector::One: xi = "1"; break;
        case RotationSector::Tau: xi = "tau"; break;
        default: xi = "taubar"; break;
    }
    return to_string(id.sigma) + "." + xi;
}

SymmetrizedBasis sector_basis(const PlaneWaveBasis& basis, TranslationSector sigma,
                              RotationSector xi) {
    const int n = static_cast<int>(basis.size());
    SymmetrizedBasis sb;
    sb.sector = {sigma, xi};

    std::vector<std::pair<MillerIndex, int>> reps;  // canonical rep, its basis position
    std::set<MillerIndex> seen;
    for (int i = 0; i < n; ++i) {
        const MillerIndex m = basis.indices[i];
        if (classify_index(m) != sigma) continue;
        const MillerIndex rep = orbit(m)[0];
        if (seen.insert(rep).second) reps.push_back({rep, basis.position(rep)});
    }
    // Orbit columns in basis order of their canonical representatives.
    std::sort(reps.begin(), reps.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });

    const cxd w0{1.0 / std::sqrt(3.0), 0.0};
    const cxd xi_conj = std::conj(xi_value(xi));
    std::vector<Eigen::VectorXcd> cols;
    for (const auto& [rep, pos] : reps) {
        if (rep == MillerIndex{0, 0}) {
            if (xi != RotationSector::One) continue;
            Eigen::VectorXcd col = Eigen::VectorXcd::Zero(n);
            col(pos) = 1.0;
            cols.push_back(col);
            sb.orbit_reps.push_back(rep);
            continue;
        }
        Eigen::VectorXcd col = Eigen::VectorXcd::Zero(n);
        const auto orb = orbit(rep);
        col(basis.position(orb[0])) = w0;
        col(basis.position(orb[1])) = w0 * xi_conj;
        col(basis.position(orb[2])) = w0 * xi_value(xi);
        cols.push_back(col);
        sb.orbit_reps.push_back(rep);
    }

    sb.columns.resize(n, static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sb.columns.col(static_cast<int>(c)) = cols[c];
    return sb;
}

namespace {

// Rotates the first coefficient of maximal modulus (within 1e-9 relative)
// onto the positive real axis, making the overall phase deterministic.
void normalize_phase(Eigen::VectorXcd& v) {
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= m * (1.0 - 1e-9)) {
            v *= std::conj(v(i)) / std::abs(v(i));
            return;
        }
    }
}

}  // namespace

std::vector<GammaEigenfunction> sector_spectrum(const FourierPotential& V,
                                                TranslationSector sigma, RotationSector xi,
                                                const PlaneWaveBasis& basis, int n) {
    const SymmetrizedBasis sb = sector_basis(basis, sigma, xi);
    const int cols = static_cast<int>(sb.columns.cols());
    if (cols == 0)
        throw ConfigError("sector " + to_string(sb.sector) + " is empty in this basis");
    if (n < 1 || n > cols) n = std::min(std::max(n, 1), cols);

    const BlochHamiltonian H = assemble(V, Vec2{0.0, 0.0}, basis);
    Eigen::MatrixXcd projected = sb.columns.adjoint() * H.matrix * sb.columns;
    projected = 0.5 * (projected + projected.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(projected);
    if (solver.info() != Eigen::Success)
        throw NumericalError("sector eigensolver failed to converge");

    std::vector<GammaEigenfunction> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        GammaEigenfunction phi;
        phi.value = solver.eigenvalues()(j);
        phi.sector = sb.sector;
        phi.coeffs = sb.columns * solver.eigenvectors().col(j);
        normalize_phase(phi.coeffs);
        out.push_back(std::move(phi));
    }
    return out;
}

double SectorWeights::total() const {
    double t = 0.0;
    for (const auto& row : w)
        for (double x : row) t += x;
    return t;
}

SectorWeights classify_eigenvector(const Eigen::VectorXcd& v, const PlaneWaveBasis& basis) {
    SectorWeights weights;
    for (TranslationSector sigma :
         {TranslationSector::S, TranslationSector::Plus, TranslationSector::Minus})
        for (RotationSector xi : {RotationSector::One, RotationSector::Tau, RotationSector::TauBar}) {
            const SymmetrizedBasis sb = sector_basis(basis, sigma, xi);
            weights.at(sigma, xi) =
                sb.columns.cols() == 0 ? 0.0 : (sb.columns.adjoint() * v).squaredNorm();
        }
    return weights;
}

Partners symmetry_partners(const GammaEigenfunction& phi1, const PlaneWaveBasis& basis) {
    const int n = static_cast<int>(basis.size());
    Partners p;

    p.phi2.coeffs = phi1.coeffs.conjugate();
    p.phi2.value = phi1.value;
    p.phi2.sector = {phi1.sector.sigma, conjugate_xi(phi1.sector.xi)};

    p.phi3.coeffs.resize(n);
    for (int i = 0; i < n; ++i)
        p.phi3.coeffs(basis.position(-basis.indices[i])) = phi1.coeffs(i);
    p.phi3.value = phi1.value;
    p.phi3.sector = {parity_sector(phi1.sector.sigma), phi1.sector.xi};

    p.phi4.coeffs = p.phi3.coeffs.conjugate();
    p.phi4.value = phi1.value;
    p.phi4.sector = {p.phi3.sector.sigma, conjugate_xi(phi1.sector.xi)};
    return p;
}

VSharp v_sharp(const GammaEigenfunction& phi1, const PlaneWaveBasis& basis) {
    if (!(phi1.sector == SectorId{TranslationSector::Plus, RotationSector::Tau}))
        throw ConfigError("velocity data is defined for the (plus, tau) eigenfunction");

    VSharp v;
    cxd vx{0.0, 0.0}, vy{0.0, 0.0};
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const cxd c = std::conj(phi1.coeffs(static_cast<Eigen::Index>(i)));
        const Vec2 G = basis.g_vector(i);
        vx += G.x * c * c;
        vy += G.y * c * c;
    }
    const cxd im{0.0, 1.0};
    v.x = im * vx;
    v.y = im * vy;
    const double mod = std::sqrt(std::norm(v.x) + std::norm(v.y));
    v.v_F = std::sqrt(2.0) * mod;
    v.theta = v.v_F > 0.0 ? std::arg(2.0 * v.x / v.v_F) : 0.0;
    return v;
}

cxd potential_element(const GammaEigenfunction& f, const FourierPotential& W,
                      const GammaEigenfunction& g, const PlaneWaveBasis& basis) {
    cxd acc{0.0, 0.0};
    for (std::size_t a = 0; a < basis.size(); ++a) {
        const cxd fa = f.coeffs(static_cast<Eigen::Index>(a));
        if (fa == cxd{0.0, 0.0}) continue;
        cxd row{0.0, 0.0};
        for (const auto& [d, wd] : W.coeffs) {
            const int pos = basis.position(basis.indices[a] - d);
            if (pos >= 0) row += wd * g.coeffs(pos);
        }
        acc += std::conj(fa) * row;
    }
    return acc;
}

double c_sharp(const GammaEigenfunction& phi1, const GammaEigenfunction& phi3,
               const FourierPotential& W, const PlaneWaveBasis& basis) {
    const SymmetryReport rep = check_honeycomb(W);
    if (!(rep.is_real && rep.is_even && rep.is_rotation_invariant))
        throw ConfigError("gap coefficient requires a real, even, rotation-invariant perturbation");

    // The eligible class makes the element real; roundoff is judged against
    // the perturbation magnitude so a legitimately vanishing coefficient
    // (cancelling mixes) is not mistaken for a phase error.
    const cxd raw = potential_element(phi1, W, phi3, basis);
    if (std::abs(raw.imag()) > 1e-8 * std::max(std::abs(raw), W.max_abs()))
        throw NumericalError("gap coefficient has a non-negligible imaginary part");
    return raw.real();
}

}  // namespace diracbands
