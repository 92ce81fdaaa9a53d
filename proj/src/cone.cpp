#include "diracbands/cone.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "diracbands/errors.hpp"
#include "diracbands/parallel.hpp"
#include "diracbands/spectral.hpp"

namespace diracbands {

std::vector<DegeneracyReport> detect_degeneracy(const std::vector<double>& values,
                                                double cluster_tol, double gap_tol) {
    if (!(cluster_tol < gap_tol))
        throw ConfigError("cluster tolerance must be smaller than the gap tolerance");
    if (!std::is_sorted(values.begin(), values.end()))
        throw ConfigError("degeneracy detection expects ascending values");

    std::vector<DegeneracyReport> out;
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t start = 0;
    while (start < values.size()) {
        std::size_t end = start + 1;  // one past the current group
        while (end < values.size() && values[end] - values[end - 1] <= gap_tol) ++end;

        const double width = values[end - 1] - values[start];
        if (width <= cluster_tol) {
            DegeneracyReport rep;
            rep.first_band = static_cast<int>(start) + 1;
            rep.last_band = static_cast<int>(end);
            rep.multiplicity = static_cast<int>(end - start);
            rep.cluster_width = width;
            double mean = 0.0;
            for (std::size_t i = start; i < end; ++i) mean += values[i];
            rep.mu_D = mean / rep.multiplicity;
            rep.gap_below = start == 0 ? inf : values[start] - values[start - 1];
            rep.gap_above = end == values.size() ? inf : values[end] - values[end - 1];
            out.push_back(rep);
        }
        start = end;
    }
    return out;
}

std::array<double, 4> model_bands(double v_F, double c_sharp, double delta, Vec2 k) {
    const double s = std::hypot(delta * c_sharp, v_F * norm(k));
    return {-s, -s, s, s};
}

ConeFit fit_cone(const std::vector<RayData>& rays, double mu_D, double k1_norm,
                 double max_radius_rel) {
    if (rays.empty()) throw ConfigError("cone fit needs at least one ray");

    ConeFit fit;
    std::vector<double> all_branch_estimates;
    std::vector<double> per_direction_mean;
    struct BranchSlopes {
        std::vector<double> s;  // parallel to radii, ascending radius
    };

    for (const RayData& ray : rays) {
        if (ray.radii.size() != ray.bands.size() || ray.radii.empty())
            throw ConfigError("ray radii and band rows disagree");

        // Work on radii in ascending order regardless of input order.
        std::vector<std::size_t> order(ray.radii.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return ray.radii[a] < ray.radii[b]; });
        if (ray.radii[order.front()] <= 0.0)
            throw ConfigError("cone fit radii must be positive");
        if (ray.radii[order.back()] > max_radius_rel * k1_norm)
            throw ConfigError("cone fit radii exceed the linear window");

        std::array<BranchSlopes, 4> branches;
        for (std::size_t oi : order) {
            const double r = ray.radii[oi];
            const auto& b = ray.bands[oi];
            branches[0].s.push_back((mu_D - b[0]) / r);
            branches[1].s.push_back((mu_D - b[1]) / r);
            branches[2].s.push_back((b[2] - mu_D) / r);
            branches[3].s.push_back((b[3] - mu_D) / r);
        }

        std::vector<double> rr(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) rr[i] = ray.radii[order[i]];

        std::array<double, 4> est{};
        for (int j = 0; j < 4; ++j) {
            std::vector<double> t = branches[j].s;
            if (t.size() > 1) {
                // Iterated two-point Richardson: each stage removes one more
                // power of r from s(r) = v + c1 r + c2 r^2 + ...; the first
                // stage doubles as the conical-data check, since a cone has
                // strictly positive extrapolated slope on every radius pair.
                for (std::size_t m = 1; m < rr.size(); ++m) {
                    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                        t[i] = (rr[i + m] * t[i] - rr[i] * t[i + 1]) / (rr[i + m] - rr[i]);
                        if (m == 1 && t[i] <= 0.0)
                            throw NumericalError(
                                "non-conical data: branch slope estimate changes sign");
                    }
                    t.resize(t.size() - 1);
                }
            }
            est[j] = t[0];
            all_branch_estimates.push_back(est[j]);
        }

        fit.directions.push_back(ray.direction);
        fit.v_F_lower.push_back(0.5 * (est[0] + est[1]));
        fit.v_F_upper.push_back(0.5 * (est[2] + est[3]));
        per_direction_mean.push_back(0.25 * (est[0] + est[1] + est[2] + est[3]));
        fit.v_F_fit += per_direction_mean.back();
    }
    fit.v_F_fit /= static_cast<double>(rays.size());

    const auto [lo, hi] = std::minmax_element(per_direction_mean.begin(), per_direction_mean.end());
    const double mean =
        std::accumulate(per_direction_mean.begin(), per_direction_mean.end(), 0.0) /
        static_cast<double>(per_direction_mean.size());
    fit.anisotropy = mean != 0.0 ? (*hi - *lo) / mean : 0.0;

    // Worst raw-slope deviation from the pooled fit across the window.
    double eta = 0.0;
    for (const RayData& ray : rays)
        for (std::size_t i = 0; i < ray.radii.size(); ++i) {
            const double r = ray.radii[i];
            const auto& b = ray.bands[i];
            const double s[4] = {(mu_D - b[0]) / r, (mu_D - b[1]) / r, (b[2] - mu_D) / r,
                                 (b[3] - mu_D) / r};
            for (double v : s) eta = std::max(eta, std::abs(v / fit.v_F_fit - 1.0));
        }
    fit.eta_max = eta;
    return fit;
}

namespace {

constexpr double kSectorSimpleRel = 1e-9;

double spectral_scale(const std::vector<double>& values) {
    return values.size() > 1 ? std::max(1.0, std::abs(values[1])) : 1.0;
}

}  // namespace

GammaDiagnostics gamma_diagnostics(const FourierPotential& V, const PlaneWaveBasis& basis,
                                   const FourierPotential* W, const DegeneracyOptions& opts) {
    const BlochHamiltonian H = assemble(V, Vec2{0.0, 0.0}, basis);
    const EigenSolution sol = eigensolve(H, static_cast<int>(basis.size()));
    const std::vector<double> values(sol.values.data(), sol.values.data() + sol.values.size());

    const double scale = spectral_scale(values);
    const double cluster_tol = opts.cluster_rel * scale;
    const auto clusters = detect_degeneracy(values, cluster_tol, opts.gap_rel * scale);

    GammaDiagnostics diag;
    bool found = false;
    for (const auto& c : clusters)
        if (c.multiplicity == 4) {
            diag.quartet = c;
            found = true;
            break;
        }
    if (!found) throw NumericalError("no fourfold cluster at the Gamma point");

    // The (plus, tau) member of the cluster; it must be simple within its
    // sector for the velocity data to be well defined.
    auto plus_tau =
        sector_spectrum(V, TranslationSector::Plus, RotationSector::Tau, basis, INT_MAX);
    std::size_t best = 0;
    for (std::size_t j = 1; j < plus_tau.size(); ++j)
        if (std::abs(plus_tau[j].value - diag.quartet.mu_D) <
            std::abs(plus_tau[best].value - diag.quartet.mu_D))
            best = j;
    if (std::abs(plus_tau[best].value - diag.quartet.mu_D) > 10.0 * cluster_tol)
        throw NumericalError("fourfold cluster has no (plus, tau) member");
    for (std::size_t j = 0; j < plus_tau.size(); ++j)
        if (j != best &&
            std::abs(plus_tau[j].value - plus_tau[best].value) < kSectorSimpleRel * scale)
            throw NumericalError(
                "cluster eigenvalue is degenerate within its sector; velocity data withheld");

    diag.phi1 = plus_tau[best];
    diag.vsharp = v_sharp(diag.phi1, basis);
    diag.phi1_weights = classify_eigenvector(diag.phi1.coeffs, basis);
    if (W) {
        const Partners p = symmetry_partners(diag.phi1, basis);
        diag.c_sharp = c_sharp(diag.phi1, p.phi3, *W, basis);
    }

    // Distance from mu_D to the nearest eigenvalue outside the cluster,
    // sector by sector.
    for (TranslationSector sigma :
         {TranslationSector::S, TranslationSector::Plus, TranslationSector::Minus})
        for (RotationSector xi :
             {RotationSector::One, RotationSector::Tau, RotationSector::TauBar}) {
            double gap = std::numeric_limits<double>::infinity();
            if (sector_basis(basis, sigma, xi).columns.cols() > 0) {
                for (const auto& phi : sector_spectrum(V, sigma, xi, basis, INT_MAX)) {
                    const double d = std::abs(phi.value - diag.quartet.mu_D);
                    if (d > cluster_tol) gap = std::min(gap, d);
                }
            }
            diag.sector_gaps.at(sigma, xi) = gap;
        }
    return diag;
}

ConeFit analyze_cone(const FourierPotential& V, const PlaneWaveBasis& basis,
                     const DegeneracyReport& quartet, const ConeScanOptions& opts) {
    if (quartet.multiplicity != 4) throw ConfigError("cone analysis needs a fourfold cluster");
    if (opts.n_directions < 1 || opts.n_radii < 2)
        throw ConfigError("cone analysis needs at least one direction and two radii");

    const double k1n = norm(basis.lattice.k1);
    std::vector<double> radii(opts.n_radii);
    for (int i = 0; i < opts.n_radii; ++i) {
        const double t = static_cast<double>(i) / (opts.n_radii - 1);
        radii[i] = k1n * opts.r_min_rel * std::pow(opts.r_max_rel / opts.r_min_rel, t);
    }

    std::vector<RayData> rays(opts.n_directions);
    for (int d = 0; d < opts.n_directions; ++d) {
        const double ang = 2.0 * std::numbers::pi * d / opts.n_directions;
        rays[d].direction = {std::cos(ang), std::sin(ang)};
        rays[d].radii = radii;
        rays[d].bands.resize(radii.size());
    }

    const int n_lowest = quartet.first_band + 3;
    parallel_for(static_cast<std::int64_t>(opts.n_directions) * opts.n_radii,
                 [&](std::int64_t idx) {
                     const int d = static_cast<int>(idx / opts.n_radii);
                     const int i = static_cast<int>(idx % opts.n_radii);
                     const Vec2 k = radii[i] * rays[d].direction;
                     const EigenSolution sol = eigensolve(assemble(V, k, basis), n_lowest);
                     for (int j = 0; j < 4; ++j)
                         rays[d].bands[i][j] = sol.values(quartet.first_band - 1 + j);
                 });

    return fit_cone(rays, quartet.mu_D, k1n);
}

GapScan gap_scan(const FourierPotential& V, const FourierPotential& W,
                 const std::vector<double>& deltas, const PlaneWaveBasis& basis) {
    // The perturbation class for the linear gap law: real, even, rotation
    // invariant and supported away from the sub-period sectors.
    const SymmetryReport wrep = check_honeycomb(W);
    if (!(wrep.is_real && wrep.is_even && wrep.is_rotation_invariant))
        throw ConfigError("gap scan perturbation must be real, even and rotation invariant");
    const double wtol = 1e-10 * W.max_abs();
    for (const auto& [m, c] : W.coeffs)
        if (classify_index(m) == TranslationSector::S && std::abs(c) > wtol)
            throw ConfigError("gap scan perturbation must have no sub-period component");

    const GammaDiagnostics diag = gamma_diagnostics(V, basis, &W);

    GapScan scan;
    scan.deltas = deltas;
    scan.gaps.assign(deltas.size(), 0.0);
    scan.c_sharp_ref = diag.c_sharp.value();

    const int b0 = diag.quartet.first_band - 1;  // 0-based index of the first cluster band
    parallel_for(static_cast<std::int64_t>(deltas.size()), [&](std::int64_t i) {
        const FourierPotential Vp = sum(V, scaled(W, deltas[i]));
        const EigenSolution sol = eigensolve(assemble(Vp, Vec2{0.0, 0.0}, basis), b0 + 4);
        scan.gaps[i] = sol.values(b0 + 2) - sol.values(b0 + 1);
    });

    // Slope of gap vs |delta| at zero: average the +- pair per magnitude,
    // then Richardson-extrapolate from the two smallest magnitudes.
    std::map<double, std::pair<double, int>> levels;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] == 0.0) continue;
        auto& [acc, cnt] = levels[std::abs(deltas[i])];
        acc += scan.gaps[i];
        ++cnt;
    }
    if (levels.empty()) {
        scan.fitted_slope = 0.0;
        scan.note = "no nonzero delta supplied";
    } else if (levels.size() == 1) {
        const auto& [d, g] = *levels.begin();
        scan.fitted_slope = (g.first / g.second) / d;
    } else {
        auto it = levels.begin();
        const double d1 = it->first, g1 = it->second.first / it->second.second;
        ++it;
        const double d2 = it->first, g2 = it->second.first / it->second.second;
        const double s1 = g1 / d1, s2 = g2 / d2;
        scan.fitted_slope = (d2 * s1 - d1 * s2) / (d2 - d1);
    }

    if (std::abs(scan.c_sharp_ref) <= 1e-8 * W.max_abs()) {
        scan.conclusive = false;
        scan.note = "inconclusive: c_sharp below tolerance";
    }
    return scan;
}

ShallowReport shallow_scan(const FourierPotential& V, const std::vector<double>& epsilons,
                           const PlaneWaveBasis& basis) {
    if (epsilons.empty()) throw ConfigError("shallow scan needs at least one epsilon");

    ShallowReport rep;
    rep.epsilons = epsilons;
    rep.fourfold_shift.assign(epsilons.size(), 0.0);
    rep.twofold_shift.assign(epsilons.size(), 0.0);
    rep.c1 = V.at({0, 0}).real();
    rep.c2 = V.at({1, -1}).real();
    rep.quartet_slope_ref = rep.c1 - rep.c2;
    rep.doublet_slope_ref = rep.c1 + 2.0 * rep.c2;

    const double mu_free = norm2(basis.lattice.k1);
    parallel_for(static_cast<std::int64_t>(epsilons.size()), [&](std::int64_t i) {
        const FourierPotential Ve = scaled(V, epsilons[i]);
        const double quartet =
            sector_spectrum(Ve, TranslationSector::Plus, RotationSector::Tau, basis, 1)[0].value;
        const double doublet =
            sector_spectrum(Ve, TranslationSector::Plus, RotationSector::One, basis, 1)[0].value;
        if (std::abs(quartet - doublet) <= 1e-9 * std::max(1.0, mu_free))
            throw NumericalError("shallow scan could not resolve the 4+2 split at eps = " +
                                 std::to_string(epsilons[i]));
        rep.fourfold_shift[i] = quartet - mu_free;
        rep.twofold_shift[i] = doublet - mu_free;
    });

    // Least squares shift = s eps + q eps^2; the eps^2 column absorbs the
    // quadratic correction so s estimates the true linear coefficient.
    auto fit_slope = [&](const std::vector<double>& y) {
        double s2 = 0, s3 = 0, s4 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < epsilons.size(); ++i) {
            const double e = epsilons[i];
            s2 += e * e;
            s3 += e * e * e;
            s4 += e * e * e * e;
            b1 += e * y[i];
            b2 += e * e * y[i];
        }
        const double det = s2 * s4 - s3 * s3;
        if (det <= 1e-12 * s2 * s4) return b1 / s2;  // single magnitude: plain slope
        return (s4 * b1 - s3 * b2) / det;
    };
    rep.quartet_slope = fit_slope(rep.fourfold_shift);
    rep.doublet_slope = fit_slope(rep.twofold_shift);
    return rep;
}

}  // namespace diracbands
