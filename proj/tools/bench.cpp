// Compares the parallel k-sweep against the serial reference on the same
// inputs and confirms the results agree bitwise.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "diracbands/lattice.hpp"
#include "diracbands/potential.hpp"
#include "diracbands/spectral.hpp"

using namespace diracbands;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    double ecut_mult = 24.0;
    int samples = 120;
    int n_bands = 12;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const double v = std::atof(argv[i + 1]);
        if (flag == "--ecut-mult") ecut_mult = v;
        else if (flag == "--samples") samples = static_cast<int>(v);
        else if (flag == "--bands") n_bands = static_cast<int>(v);
    }

    const FourierPotential V = superhoneycomb_cosine(LatticeBasis::hexagonal());
    const PlaneWaveBasis basis = build_basis(V.lattice, ecut_mult * norm2(V.lattice.k1));
    const auto path =
        k_path({-0.5 * V.lattice.k1, Vec2{0.0, 0.0}, 0.5 * V.lattice.k2}, samples);

    std::printf("basis size %zu, %zu k samples, %d bands\n", basis.size(), path.size(), n_bands);

    const auto t0 = std::chrono::steady_clock::now();
    const BandStructure serial = bands_serial(V, path, basis, n_bands);
    const double t_serial = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const BandStructure parallel = bands(V, path, basis, n_bands);
    const double t_parallel = seconds_since(t1);

    double max_diff = 0.0;
    bool identical = true;
    for (std::size_t i = 0; i < serial.bands.size(); ++i)
        for (std::size_t b = 0; b < serial.bands[i].size(); ++b) {
            const double d = std::abs(serial.bands[i][b] - parallel.bands[i][b]);
            max_diff = std::max(max_diff, d);
            if (serial.bands[i][b] != parallel.bands[i][b]) identical = false;
        }

    std::printf("serial   %8.3f s\n", t_serial);
    std::printf("parallel %8.3f s\n", t_parallel);
    std::printf("speedup  %8.2fx\n", t_serial / t_parallel);
    std::printf("max |serial - parallel| = %.3g (%s)\n", max_diff,
                identical ? "bitwise identical" : "DIFFERS");
    return identical ? 0 : 1;
}
