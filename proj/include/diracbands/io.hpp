#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "diracbands/cone.hpp"
#include "diracbands/potential.hpp"
#include "diracbands/spectral.hpp"

namespace diracbands {

// Shortest exact decimal form capped at 17 significant digits; round-trips
// IEEE doubles bit for bit.
std::string fmt17(double x);

// Potential files: {"lattice":{"u1":[x,y],"u2":[x,y]},"real":bool,
// "coefficients":[{"m1":..,"m2":..,"re":..,"im":..},...]} with coefficients
// in lexicographic (m1, m2) order and 17-significant-digit floats. Writing
// then reading reproduces the coefficients exactly.
void write_potential_json(const std::filesystem::path& path, const FourierPotential& V);
FourierPotential read_potential_json(const std::filesystem::path& path);

// Band CSV: header index,kx,ky,arclen,band1,...,bandN; one row per sample in
// path order.
void write_band_csv(const std::filesystem::path& path, const BandStructure& bs);

// Scan CSVs: delta,gap and epsilon,quartet_shift,doublet_shift.
void write_gap_csv(const std::filesystem::path& path, const GapScan& scan);
void write_shallow_csv(const std::filesystem::path& path, const ShallowReport& rep);

nlohmann::json symmetry_report_json(const SymmetryReport& rep);
nlohmann::json diagnostics_json(const GammaDiagnostics& diag);
nlohmann::json cone_fit_json(const ConeFit& fit);
nlohmann::json gap_scan_json(const GapScan& scan);
nlohmann::json shallow_report_json(const ShallowReport& rep);

}  // namespace diracbands
