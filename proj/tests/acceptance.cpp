// Acceptance gate for the double Dirac cone pipeline. Each criterion prints
// exactly one [PASS]/[FAIL] line; the process exit status is the number of
// failures. Tolerances are fixed here, not configurable.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "diracbands/cone.hpp"
#include "diracbands/lattice.hpp"
#include "diracbands/potential.hpp"
#include "diracbands/spectral.hpp"
#include "diracbands/symmetry.hpp"

using namespace diracbands;

namespace {

int failures = 0;

void run(int n, const char* what, const std::function<bool()>& body) {
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        ok = false;
        note = std::string(" (") + e.what() + ")";
    }
    std::printf("[%s] criterion %d: %s%s\n", ok ? "PASS" : "FAIL", n, what, note.c_str());
    if (!ok) ++failures;
}

// <f, grad g> = sum_G conj(f_G) (iG) g_G, one complex number per component.
std::array<cxd, 2> gradient_element(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                                    const PlaneWaveBasis& basis) {
    std::array<cxd, 2> out{cxd{0.0, 0.0}, cxd{0.0, 0.0}};
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const Vec2 G = basis.g_vector(i);
        const cxd w = std::conj(f(static_cast<Eigen::Index>(i))) * g(static_cast<Eigen::Index>(i));
        out[0] += w * cxd{0.0, G.x};
        out[1] += w * cxd{0.0, G.y};
    }
    return out;
}

// Integer solvability of m1 - shift = n1 + n2, m2 = 2 n2 - n1: whether
// G - shift k1 lies on the reciprocal lattice of the sub-cell periods.
bool shifted_system_solvable(int m1, int m2, int shift) {
    for (int n1 = -45; n1 <= 45; ++n1)
        for (int n2 = -45; n2 <= 45; ++n2)
            if (n1 + n2 == m1 - shift && 2 * n2 - n1 == m2) return true;
    return false;
}

}  // namespace

int main() {
    const LatticeBasis L = LatticeBasis::hexagonal();
    const double k1sq = norm2(L.k1);
    const PlaneWaveBasis B8 = build_basis(L, 8.0 * k1sq);
    const PlaneWaveBasis B16 = build_basis(L, 16.0 * k1sq);
    const PlaneWaveBasis B32 = build_basis(L, 32.0 * k1sq);
    const FourierPotential V = superhoneycomb_cosine(L);
    const FourierPotential W = perturbation_cosine(L);

    run(1, "free Gamma spectrum is {0, |k1|^2 x6} to 1e-10 relative", [&] {
        FourierPotential zero;
        zero.lattice = L;
        zero.real = true;
        const EigenSolution s = eigensolve(assemble(zero, {0.0, 0.0}, B8), 7);
        bool ok = std::abs(s.values[0]) <= 1e-10 * k1sq;
        for (int i = 1; i < 7; ++i) ok = ok && std::abs(s.values[i] - k1sq) <= 1e-10 * k1sq;
        return ok;
    });

    run(2, "translation sectors match brute-force lattice membership for |m| <= 20", [&] {
        for (int m1 = -20; m1 <= 20; ++m1)
            for (int m2 = -20; m2 <= 20; ++m2) {
                const bool in_s = shifted_system_solvable(m1, m2, 0);
                const bool in_plus = shifted_system_solvable(m1, m2, 1);
                const bool in_minus = shifted_system_solvable(m1, m2, -1);
                if (in_s + in_plus + in_minus != 1) return false;
                const TranslationSector expected = in_s      ? TranslationSector::S
                                                   : in_plus ? TranslationSector::Plus
                                                             : TranslationSector::Minus;
                if (classify_index({m1, m2}) != expected) return false;
            }
        return true;
    });

    run(3, "nine sector spectra reproduce the lowest 30 full eigenvalues to 1e-8", [&] {
        const EigenSolution full = eigensolve(assemble(V, {0.0, 0.0}, B8), 30);
        std::vector<double> merged;
        for (TranslationSector sigma :
             {TranslationSector::S, TranslationSector::Plus, TranslationSector::Minus})
            for (RotationSector xi : {RotationSector::One, RotationSector::Tau, RotationSector::TauBar})
                for (const GammaEigenfunction& f :
                     sector_spectrum(V, sigma, xi, B8, static_cast<int>(B8.size())))
                    merged.push_back(f.value);
        std::sort(merged.begin(), merged.end());
        if (merged.size() < 30) return false;
        for (int i = 0; i < 30; ++i)
            if (std::abs(merged[i] - full.values[i]) > 1e-8) return false;
        return true;
    });

    run(4, "bands 2-5 form a fourfold Gamma cluster, isolated by 1e-2 mu_D", [&] {
        const GammaDiagnostics d = gamma_diagnostics(V, B8);
        return d.quartet.first_band == 2 && d.quartet.last_band == 5 &&
               d.quartet.multiplicity == 4 &&
               d.quartet.cluster_width <= 1e-7 * d.quartet.mu_D &&
               d.quartet.gap_below > 1e-2 * d.quartet.mu_D &&
               d.quartet.gap_above > 1e-2 * d.quartet.mu_D;
    });

    run(5, "shallow quartet/doublet slopes are -1/2 and 1 within 2%, ordered by sign", [&] {
        const ShallowReport rep =
            shallow_scan(V, {-0.04, -0.02, -0.01, 0.01, 0.02, 0.04}, B8);
        bool ok = std::abs(rep.quartet_slope - (-0.5)) <= 0.02 * 0.5 &&
                  std::abs(rep.doublet_slope - 1.0) <= 0.02;
        for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
            const double sg = rep.epsilons[i] > 0.0 ? 1.0 : -1.0;
            ok = ok && sg * rep.fourfold_shift[i] < 0.0 && sg * rep.twofold_shift[i] > 0.0;
        }
        return ok;
    });

    run(6, "radial cone fit matches the eigenfunction velocity within 0.5%", [&] {
        const GammaDiagnostics d = gamma_diagnostics(V, B8);
        const ConeFit fit = analyze_cone(V, B8, d.quartet);
        return std::abs(fit.v_F_fit - d.vsharp.v_F) <= 0.005 * d.vsharp.v_F &&
               fit.anisotropy <= 0.005;
    });

    run(7, "gap slope matches 2|c_sharp| within 5% and closes at delta = 0", [&] {
        const GapScan gs =
            gap_scan(V, W, {-0.1, -0.05, -0.025, 0.0, 0.025, 0.05, 0.1}, B8);
        const double ratio = gs.fitted_slope / (2.0 * std::abs(gs.c_sharp_ref));
        return gs.conclusive && ratio >= 0.95 && ratio <= 1.05 && gs.gaps[3] <= 1e-7;
    });

    run(8, "disk dimer: sub-period verdicts and 3-4 Gamma gaps across separations", [&] {
        const RealSpaceGrid disk = disk_potential(L);
        auto gap34 = [&](const FourierPotential& D) {
            const EigenSolution s = eigensolve(assemble(D, {0.0, 0.0}, B8), 4);
            return s.values[3] - s.values[2];
        };

        const FourierPotential tuned = dimer_build(disk, L, 1.0 / 3.0);
        bool ok = check_super_honeycomb(tuned).verdict == Verdict::SuperHoneycomb &&
                  gap34(tuned) <= 1e-6;

        const struct {
            double r;
            double gap;
        } detuned[] = {{1.05 / 3.0, 8.925393455059e-01}, {0.975 / 3.0, 4.580299140562e-01}};
        for (const auto& c : detuned) {
            const FourierPotential D = dimer_build(disk, L, c.r);
            const SymmetryReport rep = check_super_honeycomb(D);
            const double g = gap34(D);
            ok = ok && rep.verdict == Verdict::Honeycomb && rep.is_real && rep.is_even &&
                 rep.is_rotation_invariant && !rep.has_sub_period && g > 0.0 &&
                 std::abs(g - c.gap) <= 1e-6 * c.gap;
        }
        return ok;
    });

    run(9, "residuals, Hermiticity and cutoff doubling at 10 random k", [&] {
        const FourierPotential perturbed = sum(V, scaled(W, 0.1));
        const FourierPotential dimer = dimer_build(disk_potential(L), L, 0.35);

        std::mt19937 rng(42);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (int trial = 0; trial < 10; ++trial) {
            const double a = u(rng), b = u(rng);
            const Vec2 k = a * L.k1 + b * L.k2;

            for (const FourierPotential* P : {&V, &perturbed, &dimer}) {
                const BlochHamiltonian H = assemble(*P, k, B8);
                if ((H.matrix - H.matrix.adjoint()).cwiseAbs().maxCoeff() >
                    1e-13 * H.matrix.cwiseAbs().maxCoeff())
                    return false;
                const EigenSolution s = eigensolve(H, 7);
                for (int j = 0; j < 7; ++j) {
                    const double res =
                        (H.matrix * s.vectors.col(j) - s.values[j] * s.vectors.col(j)).norm();
                    if (res > 1e-8 * s.h_norm) return false;
                }
            }

            // Doubling probes truncation decay, so it runs on the smooth
            // cosine pair; the discontinuous disk dimer converges slower by
            // construction and is covered by the residual checks above.
            // Bands 4-7 at generic k still carry ~6e-5 relative truncation
            // error in the 31-wave ball, so the refinement pair starts one
            // step finer, where the tail sits firmly below the bound.
            for (const FourierPotential* P : {&V, &perturbed}) {
                const EigenSolution s16 = eigensolve(assemble(*P, k, B16), 7);
                const EigenSolution s32 = eigensolve(assemble(*P, k, B32), 7);
                for (int j = 0; j < 7; ++j) {
                    const double scale = std::max(std::abs(s32.values[j]), 1e-2 * k1sq);
                    if (std::abs(s32.values[j] - s16.values[j]) > 1e-6 * scale) return false;
                }
            }
        }
        return true;
    });

    run(10, "rotation commutes with H(0); same-sector gradient and gap elements", [&] {
        // Permutation of the index rotation on the basis ordering.
        Eigen::MatrixXcd P_R = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(B8.size()),
                                                      static_cast<Eigen::Index>(B8.size()));
        for (std::size_t i = 0; i < B8.size(); ++i)
            P_R(B8.position(rotate_index(B8.indices[i])), static_cast<Eigen::Index>(i)) = 1.0;

        const FourierPotential perturbed = sum(V, scaled(W, 0.1));
        const FourierPotential dimer = dimer_build(disk_potential(L), L, 0.35);
        for (const FourierPotential* P : {&V, &W, &perturbed, &dimer}) {
            const BlochHamiltonian H = assemble(*P, {0.0, 0.0}, B8);
            if ((H.matrix * P_R - P_R * H.matrix).norm() > 1e-12 * H.matrix.norm())
                return false;
        }

        // Gradient matrix elements vanish between states of equal rotation
        // eigenvalue.
        const std::vector<GammaEigenfunction> pt =
            sector_spectrum(V, TranslationSector::Plus, RotationSector::Tau, B8, 2);
        for (const auto& f : pt)
            for (const auto& g : pt)
                for (const cxd& c : gradient_element(f.coeffs, g.coeffs, B8))
                    if (std::abs(c) > 1e-10) return false;

        // The gap matrix element is real up to a scaled 1e-8 roundoff bound.
        const GammaEigenfunction phi1 = pt[0];
        const Partners partners = symmetry_partners(phi1, B8);
        const cxd raw = potential_element(phi1, W, partners.phi3, B8);
        return std::abs(raw.imag()) <= 1e-8 * std::max(std::abs(raw), W.max_abs());
    });

    return failures;
}
