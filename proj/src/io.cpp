#include "diracbands/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "diracbands/errors.hpp"

namespace diracbands {

using nlohmann::json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_potential_json(const std::filesystem::path& path, const FourierPotential& V) {
    std::ofstream out = open_out(path);
    out << "{\n";
    out << "  \"lattice\": {\n";
    out << "    \"u1\": [" << fmt17(V.lattice.u1.x) << ", " << fmt17(V.lattice.u1.y) << "],\n";
    out << "    \"u2\": [" << fmt17(V.lattice.u2.x) << ", " << fmt17(V.lattice.u2.y) << "]\n";
    out << "  },\n";
    out << "  \"real\": " << (V.real ? "true" : "false") << ",\n";
    out << "  \"coefficients\": [";
    bool first = true;
    for (const auto& [m, c] : V.coeffs) {  // map order: lexicographic (m1, m2)
        out << (first ? "\n" : ",\n");
        first = false;
        out << "    {\"m1\": " << m.m1 << ", \"m2\": " << m.m2 << ", \"re\": " << fmt17(c.real())
            << ", \"im\": " << fmt17(c.imag()) << "}";
    }
    out << "\n  ]\n}\n";
    if (!out) throw ConfigError("failed writing " + path.string());
}

FourierPotential read_potential_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid potential file " + path.string() + ": " + e.what());
    }

    FourierPotential V;
    try {
        const auto& lat = doc.at("lattice");
        const Vec2 u1{lat.at("u1").at(0).get<double>(), lat.at("u1").at(1).get<double>()};
        const Vec2 u2{lat.at("u2").at(0).get<double>(), lat.at("u2").at(1).get<double>()};
        V.lattice = LatticeBasis::from_periods(u1, u2);
        V.real = doc.at("real").get<bool>();
        for (const auto& entry : doc.at("coefficients")) {
            const MillerIndex m{entry.at("m1").get<int>(), entry.at("m2").get<int>()};
            V.coeffs[m] = cxd{entry.at("re").get<double>(), entry.at("im").get<double>()};
        }
    } catch (const json::exception& e) {
        throw ConfigError("invalid potential file " + path.string() + ": " + e.what());
    }

    if (V.real) {
        // Trust but verify: a hand-edited file may claim realness it lacks.
        const double tol = 1e-12 * V.max_abs();
        for (const auto& [m, c] : V.coeffs)
            if (std::abs(c - std::conj(V.at(-m))) > tol)
                throw ConfigError("potential file " + path.string() +
                                  " is flagged real but coefficients are not conjugate-symmetric");
        for (auto& [m, c] : V.coeffs) {
            auto it = V.coeffs.find(-m);
            const cxd s = it == V.coeffs.end() ? cxd{c.real(), 0.0}
                                               : 0.5 * (c + std::conj(it->second));
            c = s;
            if (it != V.coeffs.end()) it->second = std::conj(s);
        }
    }
    return V;
}

void write_band_csv(const std::filesystem::path& path, const BandStructure& bs) {
    std::ofstream out = open_out(path);
    out << "index,kx,ky,arclen";
    for (int b = 1; b <= bs.n_bands; ++b) out << ",band" << b;
    out << "\n";
    for (std::size_t i = 0; i < bs.samples.size(); ++i) {
        out << i << "," << fmt17(bs.samples[i].k.x) << "," << fmt17(bs.samples[i].k.y) << ","
            << fmt17(bs.samples[i].arclen);
        for (double v : bs.bands[i]) out << "," << fmt17(v);
        out << "\n";
    }
    if (!out) throw ConfigError("failed writing " + path.string());
}

void write_gap_csv(const std::filesystem::path& path, const GapScan& scan) {
    std::ofstream out = open_out(path);
    out << "delta,gap\n";
    for (std::size_t i = 0; i < scan.deltas.size(); ++i)
        out << fmt17(scan.deltas[i]) << "," << fmt17(scan.gaps[i]) << "\n";
    if (!out) throw ConfigError("failed writing " + path.string());
}

void write_shallow_csv(const std::filesystem::path& path, const ShallowReport& rep) {
    std::ofstream out = open_out(path);
    out << "epsilon,quartet_shift,doublet_shift\n";
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
        out << fmt17(rep.epsilons[i]) << "," << fmt17(rep.fourfold_shift[i]) << ","
            << fmt17(rep.twofold_shift[i]) << "\n";
    if (!out) throw ConfigError("failed writing " + path.string());
}

json symmetry_report_json(const SymmetryReport& rep) {
    return json{{"verdict", to_string(rep.verdict)},
                {"is_real", rep.is_real},
                {"is_even", rep.is_even},
                {"is_rotation_invariant", rep.is_rotation_invariant},
                {"has_sub_period", rep.has_sub_period},
                {"real_residual", rep.real_residual},
                {"even_residual", rep.even_residual},
                {"rotation_residual", rep.rotation_residual},
                {"sub_period_residual", rep.sub_period_residual},
                {"c1", {rep.c1.real(), rep.c1.imag()}},
                {"c2", {rep.c2.real(), rep.c2.imag()}}};
}

namespace {

json sector_table_json(const SectorWeights& table) {
    json out = json::object();
    for (TranslationSector sigma :
         {TranslationSector::S, TranslationSector::Plus, TranslationSector::Minus})
        for (RotationSector xi :
             {RotationSector::One, RotationSector::Tau, RotationSector::TauBar}) {
            const double v = table.at(sigma, xi);
            out[to_string(SectorId{sigma, xi})] = std::isfinite(v) ? json(v) : json(nullptr);
        }
    return out;
}

}  // namespace

json diagnostics_json(const GammaDiagnostics& diag) {
    json out{{"mu_D", diag.quartet.mu_D},
             {"multiplicity", diag.quartet.multiplicity},
             {"first_band", diag.quartet.first_band},
             {"last_band", diag.quartet.last_band},
             {"cluster_width", diag.quartet.cluster_width},
             {"sector_gaps", sector_table_json(diag.sector_gaps)},
             {"v_sharp", {diag.vsharp.x.real(), diag.vsharp.x.imag(), diag.vsharp.y.real(),
                          diag.vsharp.y.imag()}},
             {"v_F", diag.vsharp.v_F},
             {"sector_weights", sector_table_json(diag.phi1_weights)}};
    out["c_sharp"] = diag.c_sharp ? json(*diag.c_sharp) : json(nullptr);
    return out;
}

json cone_fit_json(const ConeFit& fit) {
    json dirs = json::array();
    for (std::size_t i = 0; i < fit.directions.size(); ++i)
        dirs.push_back(json{{"direction", {fit.directions[i].x, fit.directions[i].y}},
                            {"v_F_lower", fit.v_F_lower[i]},
                            {"v_F_upper", fit.v_F_upper[i]}});
    return json{{"v_F_fit", fit.v_F_fit},
                {"anisotropy", fit.anisotropy},
                {"eta_max", fit.eta_max},
                {"rays", dirs}};
}

json gap_scan_json(const GapScan& scan) {
    json rows = json::array();
    for (std::size_t i = 0; i < scan.deltas.size(); ++i)
        rows.push_back(json{{"delta", scan.deltas[i]}, {"gap", scan.gaps[i]}});
    json out{{"fitted_slope", scan.fitted_slope},
             {"c_sharp_ref", scan.c_sharp_ref},
             {"conclusive", scan.conclusive},
             {"samples", rows}};
    if (!scan.note.empty()) out["note"] = scan.note;
    return out;
}

json shallow_report_json(const ShallowReport& rep) {
    json rows = json::array();
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
        rows.push_back(json{{"epsilon", rep.epsilons[i]},
                            {"quartet_shift", rep.fourfold_shift[i]},
                            {"doublet_shift", rep.twofold_shift[i]}});
    return json{{"quartet_slope", rep.quartet_slope},
                {"doublet_slope", rep.doublet_slope},
                {"quartet_slope_ref", rep.quartet_slope_ref},
                {"doublet_slope_ref", rep.doublet_slope_ref},
                {"c1", rep.c1},
                {"c2", rep.c2},
                {"samples", rows}};
}

}  // namespace diracbands
