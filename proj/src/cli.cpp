#include "diracbands/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "diracbands/cone.hpp"
#include "diracbands/errors.hpp"
#include "diracbands/io.hpp"
#include "diracbands/parallel.hpp"
#include "diracbands/potential.hpp"
#include "diracbands/spectral.hpp"

namespace diracbands {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MissingFileError : ConfigError {
    using ConfigError::ConfigError;
};
struct SchemaError : ConfigError {
    using ConfigError::ConfigError;
};

// Optional experiment file; flag values win over config values, and paths
// taken from the config resolve relative to the config's directory.
struct ConfigOverlay {
    json doc = json::object();
    fs::path dir;

    static ConfigOverlay load(const std::string& path) {
        ConfigOverlay overlay;
        if (path.empty()) return overlay;
        if (!fs::exists(path)) throw MissingFileError("config file not found: " + path);
        std::ifstream in(path);
        try {
            overlay.doc = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError("invalid config " + path + ": " + e.what());
        }
        overlay.dir = fs::path(path).parent_path();
        return overlay;
    }

    template <class T>
    void apply(const CLI::Option* opt, const std::string& key, T& target) const {
        if (opt->count() > 0 || !doc.contains(key)) return;
        try {
            target = doc.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }

    void apply_path(const CLI::Option* opt, const std::string& key, std::string& target) const {
        if (opt->count() > 0 || !doc.contains(key)) return;
        std::string value;
        try {
            value = doc.at(key).get<std::string>();
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
        fs::path p(value);
        target = p.is_absolute() ? p.string() : (dir / p).string();
    }

    // Accepts either a JSON array of numbers or a comma-separated string.
    void apply_list(const CLI::Option* opt, const std::string& key, std::string& target) const {
        if (opt->count() > 0 || !doc.contains(key)) return;
        const json& v = doc.at(key);
        if (v.is_string()) {
            target = v.get<std::string>();
        } else if (v.is_array()) {
            std::ostringstream joined;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) joined << ",";
                joined << fmt17(v[i].get<double>());
            }
            target = joined.str();
        } else {
            throw ConfigError("config key '" + key + "' must be a string or array");
        }
    }
};

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("invalid number '" + item + "' in " + what);
        }
    }
    if (out.empty()) throw ConfigError(what + " is empty");
    return out;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto v = parse_number_list(text, what);
    if (v.size() != 2) throw ConfigError(what + " must have exactly two components");
    return {v[0], v[1]};
}

void require_input(const std::string& path, const std::string& what) {
    if (path.empty()) throw ConfigError(what + " is required");
    if (!fs::exists(path)) throw MissingFileError(what + " not found: " + path);
}

PlaneWaveBasis basis_for(const FourierPotential& V, double ecut_mult) {
    if (ecut_mult <= 0.0) throw ConfigError("ecut multiple must be positive");
    return build_basis(V.lattice, ecut_mult * norm2(V.lattice.k1));
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------- potential

struct BuildArgs {
    std::string config, kind, out, center = "0.5,0.5", u1, u2;
    double epsilon = 1.0, delta = 0.0, r = 1.0 / 3.0;
    double disk_radius = 0.1, disk_inside = 1.0, disk_outside = 30.0;
    int disk_n = 128;
};

int run_potential_build(const BuildArgs& a) {
    LatticeBasis lattice = LatticeBasis::hexagonal();
    if (!a.u1.empty() || !a.u2.empty()) {
        if (a.u1.empty() || a.u2.empty())
            throw ConfigError("custom lattices need both u1 and u2");
        const auto [x1, y1] = parse_pair(a.u1, "u1");
        const auto [x2, y2] = parse_pair(a.u2, "u2");
        lattice = LatticeBasis::from_periods({x1, y1}, {x2, y2});
    }

    FourierPotential V;
    if (a.kind == "cosine") {
        V = scaled(superhoneycomb_cosine(lattice), a.epsilon);
    } else if (a.kind == "cosine_perturbed") {
        V = sum(scaled(superhoneycomb_cosine(lattice), a.epsilon),
                scaled(perturbation_cosine(lattice), a.delta));
    } else if (a.kind == "dimer_disk") {
        const auto center = parse_pair(a.center, "disk center");
        const RealSpaceGrid grid = disk_potential(lattice, center, a.disk_radius, a.disk_inside,
                                                  a.disk_outside, a.disk_n);
        V = dimer_build(grid, lattice, a.r);
    } else {
        throw ConfigError("unknown potential kind '" + a.kind +
                          "' (expected cosine, cosine_perturbed or dimer_disk)");
    }
    if (a.out.empty()) throw ConfigError("output path is required");
    write_potential_json(a.out, V);
    return 0;
}

int run_potential_check(const std::string& potential, const std::string& out) {
    require_input(potential, "potential file");
    const FourierPotential V = read_potential_json(potential);
    const json rep = symmetry_report_json(check_super_honeycomb(V));
    if (out.empty())
        std::cout << rep.dump(2) << "\n";
    else
        write_json_file(out, rep);
    return 0;
}

// -------------------------------------------------------------------- bands

struct BandsArgs {
    std::string config, potential, out, path_spec = "-0.5k1:0.5k1";
    int samples = 201, n_bands = 7;
    double ecut_mult = 8.0;
    bool serial = false;
};

int run_bands_compute(const BandsArgs& a) {
    require_input(a.potential, "potential file");
    if (a.out.empty()) throw ConfigError("output path is required");
    const FourierPotential V = read_potential_json(a.potential);
    const PlaneWaveBasis basis = basis_for(V, a.ecut_mult);
    const auto path = k_path(parse_k_waypoints(a.path_spec, V.lattice), a.samples);
    const BandStructure bs = a.serial ? bands_serial(V, path, basis, a.n_bands)
                                      : bands(V, path, basis, a.n_bands);
    write_band_csv(a.out, bs);
    return 0;
}

// --------------------------------------------------------------------- cone

struct ConeArgs {
    std::string config, potential, perturbation, out;
    double ecut_mult = 8.0, r_min = 2e-3, r_max = 2e-2;
    int directions = 8, radii = 5;
};

int run_cone_analyze(const ConeArgs& a) {
    require_input(a.potential, "potential file");
    if (a.out.empty()) throw ConfigError("output path is required");
    const FourierPotential V = read_potential_json(a.potential);
    std::optional<FourierPotential> W;
    if (!a.perturbation.empty()) {
        require_input(a.perturbation, "perturbation file");
        W = read_potential_json(a.perturbation);
    }
    const PlaneWaveBasis basis = basis_for(V, a.ecut_mult);

    const GammaDiagnostics diag = gamma_diagnostics(V, basis, W ? &*W : nullptr);
    ConeScanOptions opts;
    opts.n_directions = a.directions;
    opts.n_radii = a.radii;
    opts.r_min_rel = a.r_min;
    opts.r_max_rel = a.r_max;
    const ConeFit fit = analyze_cone(V, basis, diag.quartet, opts);

    write_json_file(a.out, json{{"diagnostics", diagnostics_json(diag)},
                                {"cone", cone_fit_json(fit)}});
    return 0;
}

// --------------------------------------------------------------------- scans

struct GapArgs {
    std::string config, potential, perturbation, out, report;
    std::string deltas = "-0.1,-0.05,-0.025,0,0.025,0.05,0.1";
    double ecut_mult = 8.0;
};

int run_gap_scan(const GapArgs& a) {
    require_input(a.potential, "potential file");
    require_input(a.perturbation, "perturbation file");
    if (a.out.empty()) throw ConfigError("output path is required");
    const FourierPotential V = read_potential_json(a.potential);
    const FourierPotential W = read_potential_json(a.perturbation);
    const PlaneWaveBasis basis = basis_for(V, a.ecut_mult);
    const GapScan scan = gap_scan(V, W, parse_number_list(a.deltas, "deltas"), basis);
    write_gap_csv(a.out, scan);
    if (!a.report.empty()) write_json_file(a.report, gap_scan_json(scan));
    return 0;
}

struct ShallowArgs {
    std::string config, potential, out, report;
    std::string epsilons = "-0.04,-0.02,-0.01,0.01,0.02,0.04";
    double ecut_mult = 8.0;
};

int run_shallow_scan(const ShallowArgs& a) {
    require_input(a.potential, "potential file");
    if (a.out.empty()) throw ConfigError("output path is required");
    const FourierPotential V = read_potential_json(a.potential);
    const PlaneWaveBasis basis = basis_for(V, a.ecut_mult);
    const ShallowReport rep = shallow_scan(V, parse_number_list(a.epsilons, "epsilons"), basis);
    write_shallow_csv(a.out, rep);
    if (!a.report.empty()) write_json_file(a.report, shallow_report_json(rep));
    return 0;
}

// --------------------------------------------------------------------- plot

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string python_list(const std::vector<std::string>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += values[i];
    }
    return out + "]";
}

int run_plot_emit(const std::string& input, const std::string& out, double c_sharp,
                  bool c_sharp_set) {
    require_input(input, "input CSV");
    if (out.empty()) throw ConfigError("output path is required");
    const auto rows = read_csv(input);
    if (rows.size() < 2) throw SchemaError("CSV " + input + " has no data rows");
    const auto& header = rows.front();

    auto column = [&](std::size_t c) {
        std::vector<std::string> col;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() != header.size())
                throw SchemaError("CSV " + input + " has a ragged row");
            col.push_back(rows[i][c]);
        }
        return col;
    };

    std::ostringstream py;
    py << "# Generated by diracbands plot emit; self-contained, no file or network access.\n";
    py << "import matplotlib\n";
    py << "matplotlib.use(\"Agg\")\n";
    py << "import matplotlib.pyplot as plt\n\n";

    const fs::path png = fs::path(out).replace_extension(".png");
    if (header.size() >= 5 && header[0] == "index" && header[1] == "kx" && header[2] == "ky" &&
        header[3] == "arclen" && header[4].rfind("band", 0) == 0) {
        py << "arclen = " << python_list(column(3)) << "\n";
        for (std::size_t b = 4; b < header.size(); ++b)
            py << header[b] << " = " << python_list(column(b)) << "\n";
        py << "\nfig, ax = plt.subplots(figsize=(6, 4.5))\n";
        for (std::size_t b = 4; b < header.size(); ++b)
            py << "ax.plot(arclen, " << header[b] << ", lw=1.2, label=\"" << header[b] << "\")\n";
        py << "ax.set_xlabel(\"arclength along k path\")\n";
        py << "ax.set_ylabel(\"band energy\")\n";
        py << "ax.legend(fontsize=7, ncol=2)\n";
    } else if (header.size() == 2 && header[0] == "delta" && header[1] == "gap") {
        py << "delta = " << python_list(column(0)) << "\n";
        py << "gap = " << python_list(column(1)) << "\n";
        py << "\nfig, ax = plt.subplots(figsize=(6, 4.5))\n";
        py << "ax.plot([abs(d) for d in delta], gap, \"o\", label=\"measured gap\")\n";
        if (c_sharp_set) {
            py << "ref = [2 * abs(d) * " << fmt17(std::abs(c_sharp)) << " for d in delta]\n";
            py << "ax.plot([abs(d) for d in delta], ref, \"--\", label=\"2|delta||c|\")\n";
        }
        py << "ax.set_xlabel(\"|delta|\")\n";
        py << "ax.set_ylabel(\"Gamma gap\")\n";
        py << "ax.legend()\n";
    } else if (header.size() == 3 && header[0] == "epsilon" && header[1] == "quartet_shift" &&
               header[2] == "doublet_shift") {
        py << "epsilon = " << python_list(column(0)) << "\n";
        py << "quartet = " << python_list(column(1)) << "\n";
        py << "doublet = " << python_list(column(2)) << "\n";
        py << "\nfig, ax = plt.subplots(figsize=(6, 4.5))\n";
        py << "ax.plot(epsilon, quartet, \"o-\", label=\"fourfold shift\")\n";
        py << "ax.plot(epsilon, doublet, \"s-\", label=\"twofold shift\")\n";
        py << "ax.set_xlabel(\"epsilon\")\n";
        py << "ax.set_ylabel(\"shift of cluster relative to |k1|^2\")\n";
        py << "ax.legend()\n";
    } else {
        throw SchemaError("CSV " + input + " does not match a known schema");
    }
    py << "fig.tight_layout()\n";
    py << "fig.savefig(\"" << png.filename().string() << "\", dpi=160)\n";

    std::ofstream script(out);
    if (!script) throw ConfigError("cannot open " + out + " for writing");
    script << py.str();
    return 0;
}

json error_json(const std::string& code, const std::string& message, const std::string& command) {
    return json{{"error", code}, {"message", message}, {"context", {{"command", command}}}};
}

}  // namespace

std::vector<Vec2> parse_k_waypoints(const std::string& spec, const LatticeBasis& lattice) {
    std::vector<Vec2> waypoints;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ':')) {
        std::erase_if(token, [](unsigned char c) { return std::isspace(c); });
        if (token.empty()) throw ConfigError("empty waypoint in path '" + spec + "'");
        Vec2 w{0.0, 0.0};
        std::size_t p = 0;
        while (p < token.size()) {
            double sign = 1.0;
            if (token[p] == '+' || token[p] == '-') {
                sign = token[p] == '-' ? -1.0 : 1.0;
                ++p;
            }
            double coeff = 1.0;
            bool have_coeff = false;
            {
                const char* begin = token.c_str() + p;
                char* end = nullptr;
                const double v = std::strtod(begin, &end);
                if (end != begin && end - token.c_str() <= static_cast<std::ptrdiff_t>(token.size())) {
                    // Reject strtod eating the 'k' suffix as part of a hex/nan form.
                    coeff = v;
                    have_coeff = true;
                    p = static_cast<std::size_t>(end - token.c_str());
                }
            }
            if (p + 1 < token.size() && token[p] == 'k' && (token[p + 1] == '1' || token[p + 1] == '2')) {
                const Vec2 base = token[p + 1] == '1' ? lattice.k1 : lattice.k2;
                w = w + (sign * coeff) * base;
                p += 2;
            } else if (have_coeff && coeff == 0.0) {
                // bare zero term, contributes nothing
            } else {
                throw ConfigError("cannot parse waypoint '" + token + "' in path '" + spec + "'");
            }
        }
        waypoints.push_back(w);
    }
    if (waypoints.size() < 2)
        throw ConfigError("path '" + spec + "' needs at least two waypoints");
    return waypoints;
}

int run_cli(const std::vector<std::string>& args) {
    if (const char* env = std::getenv("DIRACBANDS_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) set_thread_cap(static_cast<int>(n));
    }

    CLI::App app{"Bloch band structures of periodic Schroedinger operators with "
                 "(super) honeycomb lattice potentials"};
    app.require_subcommand(0, 1);

    std::string active_command = "diracbands";
    std::function<int()> action;

    // potential ------------------------------------------------------------
    auto* potential = app.add_subcommand("potential", "Build or inspect potential files");
    {
        auto* build = potential->add_subcommand("build", "Construct a potential and write JSON");
        auto a = std::make_shared<BuildArgs>();
        build->add_option("--config", a->config, "Experiment JSON; flags override");
        auto* kind = build->add_option("--kind", a->kind, "cosine | cosine_perturbed | dimer_disk");
        auto* out = build->add_option("--out", a->out, "Output potential JSON");
        auto* eps = build->add_option("--epsilon", a->epsilon, "Scale of the base potential");
        auto* del = build->add_option("--delta", a->delta, "Scale of the added perturbation");
        auto* r = build->add_option("--r", a->r, "Two-center separation ratio in [0,1]");
        auto* dr = build->add_option("--disk-radius", a->disk_radius, "Disk radius");
        auto* di = build->add_option("--disk-inside", a->disk_inside, "Value inside the disk");
        auto* dout = build->add_option("--disk-outside", a->disk_outside, "Value outside the disk");
        auto* dn = build->add_option("--disk-n", a->disk_n, "Samples per direction");
        auto* dc = build->add_option("--disk-center", a->center, "Disk center as fractions of u1,u2");
        auto* u1 = build->add_option("--u1", a->u1, "Lattice period u1 as x,y");
        auto* u2 = build->add_option("--u2", a->u2, "Lattice period u2 as x,y");
        build->callback([=, &action, &active_command] {
            active_command = "potential build";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(a->config);
                cfg.apply(kind, "kind", a->kind);
                cfg.apply_path(out, "out", a->out);
                cfg.apply(eps, "epsilon", a->epsilon);
                cfg.apply(del, "delta", a->delta);
                cfg.apply(r, "r", a->r);
                cfg.apply(dr, "disk_radius", a->disk_radius);
                cfg.apply(di, "disk_inside", a->disk_inside);
                cfg.apply(dout, "disk_outside", a->disk_outside);
                cfg.apply(dn, "disk_n", a->disk_n);
                cfg.apply(dc, "disk_center", a->center);
                cfg.apply(u1, "u1", a->u1);
                cfg.apply(u2, "u2", a->u2);
                if (a->kind.empty()) throw ConfigError("--kind is required");
                return run_potential_build(*a);
            };
        });

        auto* check = potential->add_subcommand("check", "Report the symmetry class of a potential");
        auto c = std::make_shared<BandsArgs>();  // reuse config/potential/out slots
        check->add_option("--config", c->config, "Experiment JSON; flags override");
        auto* pot = check->add_option("--potential", c->potential, "Potential JSON to inspect");
        auto* outp = check->add_option("--out", c->out, "Report JSON (stdout when omitted)");
        check->callback([=, &action, &active_command] {
            active_command = "potential check";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(c->config);
                cfg.apply_path(pot, "potential", c->potential);
                cfg.apply_path(outp, "out", c->out);
                return run_potential_check(c->potential, c->out);
            };
        });
    }

    // bands ------------------------------------------------------------------
    auto* bandsc = app.add_subcommand("bands", "Band structure computations");
    {
        auto* compute = bandsc->add_subcommand("compute", "Sweep bands along a k path");
        auto a = std::make_shared<BandsArgs>();
        compute->add_option("--config", a->config, "Experiment JSON; flags override");
        auto* pot = compute->add_option("--potential", a->potential, "Potential JSON");
        auto* out = compute->add_option("--out", a->out, "Band CSV output");
        auto* path = compute->add_option("--path", a->path_spec, "Waypoints, e.g. -0.5k1:0.5k1");
        auto* samples = compute->add_option("--samples", a->samples, "Samples per segment");
        auto* nb = compute->add_option("--bands", a->n_bands, "Number of bands");
        auto* ec = compute->add_option("--ecut-mult", a->ecut_mult, "Cutoff as multiple of |k1|^2");
        auto* serial = compute->add_flag("--serial", a->serial, "Use the serial reference sweep");
        compute->callback([=, &action, &active_command] {
            active_command = "bands compute";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(a->config);
                cfg.apply_path(pot, "potential", a->potential);
                cfg.apply_path(out, "out", a->out);
                cfg.apply(path, "path", a->path_spec);
                cfg.apply(samples, "samples", a->samples);
                cfg.apply(nb, "bands", a->n_bands);
                cfg.apply(ec, "ecut_mult", a->ecut_mult);
                cfg.apply(serial, "serial", a->serial);
                return run_bands_compute(*a);
            };
        });
    }

    // cone ---------------------------------------------------------------------
    auto* cone = app.add_subcommand("cone", "Degeneracy and cone analysis at Gamma");
    {
        auto* analyze = cone->add_subcommand("analyze", "Detect the fourfold point and fit slopes");
        auto a = std::make_shared<ConeArgs>();
        analyze->add_option("--config", a->config, "Experiment JSON; flags override");
        auto* pot = analyze->add_option("--potential", a->potential, "Potential JSON");
        auto* pert = analyze->add_option("--perturbation", a->perturbation,
                                         "Optional perturbation JSON for the gap coefficient");
        auto* out = analyze->add_option("--out", a->out, "Analysis JSON output");
        auto* ec = analyze->add_option("--ecut-mult", a->ecut_mult, "Cutoff as multiple of |k1|^2");
        auto* nd = analyze->add_option("--directions", a->directions, "Ray directions");
        auto* nr = analyze->add_option("--radii", a->radii, "Radii per ray");
        auto* rmin = analyze->add_option("--r-min", a->r_min, "Smallest radius over |k1|");
        auto* rmax = analyze->add_option("--r-max", a->r_max, "Largest radius over |k1|");
        analyze->callback([=, &action, &active_command] {
            active_command = "cone analyze";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(a->config);
                cfg.apply_path(pot, "potential", a->potential);
                cfg.apply_path(pert, "perturbation", a->perturbation);
                cfg.apply_path(out, "out", a->out);
                cfg.apply(ec, "ecut_mult", a->ecut_mult);
                cfg.apply(nd, "directions", a->directions);
                cfg.apply(nr, "radii", a->radii);
                cfg.apply(rmin, "r_min", a->r_min);
                cfg.apply(rmax, "r_max", a->r_max);
                return run_cone_analyze(*a);
            };
        });
    }

    // gap -----------------------------------------------------------------------
    auto* gap = app.add_subcommand("gap", "Symmetry-breaking gap scans");
    {
        auto* scan = gap->add_subcommand("scan", "Gamma gap against perturbation strength");
        auto a = std::make_shared<GapArgs>();
        scan->add_option("--config", a->config, "Experiment JSON; flags override");
        auto* pot = scan->add_option("--potential", a->potential, "Potential JSON");
        auto* pert = scan->add_option("--perturbation", a->perturbation, "Perturbation JSON");
        auto* out = scan->add_option("--out", a->out, "Gap CSV output");
        auto* reportp = scan->add_option("--report", a->report, "Optional report JSON");
        auto* deltas = scan->add_option("--deltas", a->deltas, "Comma-separated delta values");
        auto* ec = scan->add_option("--ecut-mult", a->ecut_mult, "Cutoff as multiple of |k1|^2");
        scan->callback([=, &action, &active_command] {
            active_command = "gap scan";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(a->config);
                cfg.apply_path(pot, "potential", a->potential);
                cfg.apply_path(pert, "perturbation", a->perturbation);
                cfg.apply_path(out, "out", a->out);
                cfg.apply_path(reportp, "report", a->report);
                cfg.apply_list(deltas, "deltas", a->deltas);
                cfg.apply(ec, "ecut_mult", a->ecut_mult);
                return run_gap_scan(*a);
            };
        });
    }

    // shallow ---------------------------------------------------------------------
    auto* shallow = app.add_subcommand("shallow", "Shallow-potential cluster scans");
    {
        auto* scan = shallow->add_subcommand("scan", "Cluster shifts against epsilon");
        auto a = std::make_shared<ShallowArgs>();
        scan->add_option("--config", a->config, "Experiment JSON; flags override");
        auto* pot = scan->add_option("--potential", a->potential, "Potential JSON");
        auto* out = scan->add_option("--out", a->out, "Shallow CSV output");
        auto* reportp = scan->add_option("--report", a->report, "Optional report JSON");
        auto* eps = scan->add_option("--epsilons", a->epsilons, "Comma-separated epsilon values");
        auto* ec = scan->add_option("--ecut-mult", a->ecut_mult, "Cutoff as multiple of |k1|^2");
        scan->callback([=, &action, &active_command] {
            active_command = "shallow scan";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(a->config);
                cfg.apply_path(pot, "potential", a->potential);
                cfg.apply_path(out, "out", a->out);
                cfg.apply_path(reportp, "report", a->report);
                cfg.apply_list(eps, "epsilons", a->epsilons);
                cfg.apply(ec, "ecut_mult", a->ecut_mult);
                return run_shallow_scan(*a);
            };
        });
    }

    // plot ------------------------------------------------------------------------
    auto* plot = app.add_subcommand("plot", "Plot script emission");
    {
        auto* emit = plot->add_subcommand("emit", "Write a matplotlib script for a CSV");
        auto input = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto config = std::make_shared<std::string>();
        auto cs = std::make_shared<double>(0.0);
        emit->add_option("--config", *config, "Experiment JSON; flags override");
        auto* in_opt = emit->add_option("--input", *input, "CSV produced by this tool");
        auto* out_opt = emit->add_option("--out", *out, "Python script output");
        auto* cs_opt = emit->add_option("--c-sharp", *cs, "Reference gap coefficient overlay");
        emit->callback([=, &action, &active_command] {
            active_command = "plot emit";
            action = [=] {
                const ConfigOverlay cfg = ConfigOverlay::load(*config);
                cfg.apply_path(in_opt, "input", *input);
                cfg.apply_path(out_opt, "out", *out);
                cfg.apply(cs_opt, "c_sharp", *cs);
                const bool cs_set = cs_opt->count() > 0 || cfg.doc.contains("c_sharp");
                return run_plot_emit(*input, *out, *cs, cs_set);
            };
        });
    }

    // Validate the subcommand words ourselves so misspellings exit with 64.
    static const std::map<std::string, std::vector<std::string>> known = {
        {"potential", {"build", "check"}}, {"bands", {"compute"}}, {"cone", {"analyze"}},
        {"gap", {"scan"}},                 {"shallow", {"scan"}},  {"plot", {"emit"}}};
    if (args.empty()) {
        std::cerr << app.help() << std::flush;
        std::cerr << error_json("unknown_subcommand", "no subcommand given", "diracbands").dump()
                  << "\n";
        return 64;
    }
    if (args[0] != "--help" && args[0] != "-h") {
        auto it = known.find(args[0]);
        if (it == known.end()) {
            std::cerr << error_json("unknown_subcommand", "unknown subcommand '" + args[0] + "'",
                                    "diracbands")
                             .dump()
                      << "\n";
            return 64;
        }
        if (args.size() < 2 || args[1].rfind("-", 0) == 0 ||
            std::find(it->second.begin(), it->second.end(), args[1]) == it->second.end()) {
            const std::string got = args.size() < 2 ? "(none)" : args[1];
            if (got != "--help" && got != "-h") {
                std::cerr << error_json("unknown_subcommand",
                                        "unknown subcommand '" + args[0] + " " + got + "'",
                                        args[0])
                                 .dump()
                          << "\n";
                return 64;
            }
        }
    }

    std::vector<const char*> argv;
    argv.push_back("diracbands");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json("config", e.what(), active_command).dump() << "\n";
        return 2;
    }

    if (!action) {  // subcommand group without leaf, e.g. `diracbands potential`
        std::cerr << error_json("unknown_subcommand", "missing subcommand", active_command).dump()
                  << "\n";
        return 64;
    }

    try {
        return action();
    } catch (const MissingFileError& e) {
        std::cerr << error_json("missing_file", e.what(), active_command).dump() << "\n";
        return 66;
    } catch (const SchemaError& e) {
        std::cerr << error_json("schema_mismatch", e.what(), active_command).dump() << "\n";
        return 65;
    } catch (const ConfigError& e) {
        std::cerr << error_json("config", e.what(), active_command).dump() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << error_json("numerical", e.what(), active_command).dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what(), active_command).dump() << "\n";
        return 70;
    }
}

}  // namespace diracbands
