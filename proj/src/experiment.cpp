#include "hmap/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "hmap/backlund.hpp"
#include "hmap/map_builder.hpp"
#include "hmap/sinh_gordon.hpp"
#include "hmap/verifier.hpp"

namespace fs = std::filesystem;

namespace hmap {

namespace {

const std::vector<std::string> kFamilies = {"example3", "example5",      "example6",
                                            "kenmotsu", "separable_ode", "soliton"};
const std::vector<std::string> kTolNames = {"sinh_gordon", "sine_gordon", "backlund",
                                            "harmonicity", "beltrami",    "hopf",
                                            "derivative_identity"};
const std::vector<std::string> kOutputs = {"w", "theta", "u"};

std::map<std::string, std::vector<std::string>> family_params() {
    return {{"example3", {}},
            {"example5", {}},
            {"example6", {}},
            {"kenmotsu", {"alpha", "beta", "w0"}},
            {"separable_ode", {"A", "B", "C", "F0", "dF0", "G0", "dG0"}},
            {"soliton", {"theta0", "dtheta0", "w00"}}};
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
    try {
        size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size() || !std::isfinite(v))
            throw ConfigError("config: bad number for '" + key + "': " + raw);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + raw);
    }
}

int parse_int(const std::string& key, const std::string& raw) {
    const double v = parse_double(key, raw);
    if (v != std::floor(v)) throw ConfigError("config: '" + key + "' must be an integer");
    return static_cast<int>(v);
}

} // namespace

const std::vector<std::string>& tolerance_names() { return kTolNames; }

double ExperimentConfig::tolerance(const std::string& suite) const {
    auto it = tolerances.find(suite);
    return it == tolerances.end() ? 1e-4 : it->second;
}

void ExperimentConfig::validate() const {
    if (std::find(kFamilies.begin(), kFamilies.end(), family) == kFamilies.end())
        throw ConfigError("config: unknown family '" + family + "'");
    grid.validate();
    if (base.S00 == 0.0) throw ConfigError("config: base S00 must be nonzero");
    const auto table = family_params();
    const auto& required = table.at(family);
    for (const auto& name : required)
        if (!params.count(name))
            throw ConfigError("config: family '" + family + "' requires parameter '" + name + "'");
    for (const auto& [name, _] : params)
        if (std::find(required.begin(), required.end(), name) == required.end())
            throw ConfigError("config: unknown parameter '" + name + "' for family '" + family +
                              "'");
    for (const auto& [name, tol] : tolerances) {
        if (std::find(kTolNames.begin(), kTolNames.end(), name) == kTolNames.end())
            throw ConfigError("config: unknown tolerance '" + name + "'");
        if (!(tol > 0.0)) throw ConfigError("config: tolerance '" + name + "' must be > 0");
    }
    for (const auto& o : outputs)
        if (std::find(kOutputs.begin(), kOutputs.end(), o) == kOutputs.end())
            throw ConfigError("config: unknown output target '" + o + "'");
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    cfg.outputs = kOutputs;
    bool saw_grid_key[6] = {false, false, false, false, false, false};
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "base" && section != "params" &&
                section != "tolerances" && section != "outputs")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");

        if (section.empty()) {
            if (key != "family")
                throw ConfigError("config: unknown top-level key '" + key + "'");
            cfg.family = value;
        } else if (section == "grid") {
            static const std::vector<std::string> keys = {"x_min", "x_max", "y_min",
                                                          "y_max", "nx",    "ny"};
            const auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) throw ConfigError("config: unknown grid key '" + key + "'");
            const size_t pos = static_cast<size_t>(it - keys.begin());
            saw_grid_key[pos] = true;
            switch (pos) {
            case 0: cfg.grid.x_min = parse_double(key, value); break;
            case 1: cfg.grid.x_max = parse_double(key, value); break;
            case 2: cfg.grid.y_min = parse_double(key, value); break;
            case 3: cfg.grid.y_max = parse_double(key, value); break;
            case 4: cfg.grid.nx = parse_int(key, value); break;
            case 5: cfg.grid.ny = parse_int(key, value); break;
            }
        } else if (section == "base") {
            if (key == "R00")
                cfg.base.R00 = parse_double(key, value);
            else if (key == "S00")
                cfg.base.S00 = parse_double(key, value);
            else
                throw ConfigError("config: unknown base key '" + key + "'");
        } else if (section == "params") {
            cfg.params[key] = parse_double(key, value);
        } else if (section == "tolerances") {
            cfg.tolerances[key] = parse_double(key, value);
        } else if (section == "outputs") {
            if (key != "fields") throw ConfigError("config: unknown outputs key '" + key + "'");
            cfg.outputs.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (!item.empty()) cfg.outputs.push_back(item);
            }
        }
    }
    if (cfg.family.empty()) throw ConfigError("config: missing 'family'");
    for (bool saw : saw_grid_key)
        if (!saw) throw ConfigError("config: [grid] must set x_min,x_max,y_min,y_max,nx,ny");
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    return parse_config(is);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

GeneratedFields run_example3(const ExperimentConfig& cfg) {
    const GridSpec& g = cfg.grid;
    auto w_fn = [](double x, double y) { return 2.0 * std::atanh(2.0 * y / std::cosh(2.0 * x)); };
    auto valid = [](double x, double y) {
        return std::abs(2.0 * y / std::cosh(2.0 * x)) < 1.0 - 1e-6;
    };
    BtPair pair;
    pair.tag = BtPair::Tag::BT;
    pair.w = w_fn;
    pair.valid = valid;
    pair.sin_theta = [](double x, double) { return std::tanh(2.0 * x); };
    pair.cos_theta = [](double x, double) { return -1.0 / std::cosh(2.0 * x); };
    pair.theta = [](double x, double) {
        if (x == 0.0) return 3.14159265358979323846; // limit from x > 0
        return 2.0 * std::atan(1.0 / std::tanh(x));
    };
    // theta has a 2-pi branch line at x = 0; keep it away from stencils
    const double excl = 1.2 * g.dx();
    pair.theta_valid = [valid, excl](double x, double y) {
        return valid(x, y) && std::abs(x) > excl;
    };

    GeneratedFields out;
    out.route = "quadrature";
    out.w = mask_singular(pair.w, g, pair.valid);
    out.theta = mask_singular(pair.theta, g, pair.theta_valid);
    out.u = build_quadrature(pair, cfg.base, g);
    return out;
}

GeneratedFields run_bt0(const ExperimentConfig& cfg, std::shared_ptr<SeparableSolution> sol) {
    GeneratedFields out;
    out.route = "newclass";
    out.w = sample_separable_w(*sol, cfg.grid);
    out.theta = sample_theta_bt0(*sol, cfg.grid);
    out.u = build_newclass(*sol, cfg.base, cfg.grid);
    return out;
}

GeneratedFields run_soliton_family(const ExperimentConfig& cfg, double theta0, double dtheta0,
                                   double w00) {
    const GridSpec& g = cfg.grid;
    const double pad = 1e-9 * std::max(1.0, std::abs(g.x_max) + std::abs(g.x_min));
    const Interval xr{g.x_min - pad, g.x_max + pad};
    const Interval yr{g.y_min - pad, g.y_max + pad};
    const SolitonTheta st = soliton_theta(theta0, dtheta0, xr);
    auto wsol = std::make_shared<SeparableSolution>(w_from_theta(st, w00, xr, yr));

    GeneratedFields out;
    out.route = "soliton";
    out.w = sample_separable_w(*wsol, g);
    auto theta_fn = st.theta;
    out.theta = mask_singular([theta_fn](double x, double) { return theta_fn(x); }, g,
                              [](double, double) { return true; });
    out.u = build_soliton(st, w00, cfg.base, g);
    return out;
}

} // namespace

GeneratedFields run_family(const ExperimentConfig& cfg) {
    cfg.validate();
    const GridSpec& g = cfg.grid;
    const double pad = 1e-9 * std::max({1.0, std::abs(g.x_max), std::abs(g.x_min)});
    const Interval xr{g.x_min - pad, g.x_max + pad};
    const Interval yr{g.y_min - pad, g.y_max + pad};

    try {
        if (cfg.family == "example3") return run_example3(cfg);
        if (cfg.family == "example5")
            return run_bt0(cfg, std::make_shared<SeparableSolution>(example5_solution(xr, yr)));
        if (cfg.family == "kenmotsu") {
            KenmotsuParams p{cfg.params.at("alpha"), cfg.params.at("beta"), cfg.params.at("w0")};
            return run_bt0(cfg, std::make_shared<SeparableSolution>(make_kenmotsu(p, xr, yr)));
        }
        if (cfg.family == "separable_ode") {
            OdeCoefficients coeffs{cfg.params.at("A"), cfg.params.at("B"), cfg.params.at("C")};
            auto sol = std::make_shared<SeparableSolution>(
                make_separable(coeffs, cfg.params.at("F0"), cfg.params.at("dF0"),
                               cfg.params.at("G0"), cfg.params.at("dG0"), xr, yr));
            if (!sol->bt0_eligible())
                throw ConfigError(
                    "separable_ode: map construction needs dG0 = 0 (BT0 eligibility)");
            return run_bt0(cfg, sol);
        }
        if (cfg.family == "example6") return run_soliton_family(cfg, 0.0, 1.0, 0.0);
        if (cfg.family == "soliton")
            return run_soliton_family(cfg, cfg.params.at("theta0"), cfg.params.at("dtheta0"),
                                      cfg.params.at("w00"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("family '" + cfg.family + "' failed on this grid: " + e.what());
    }
    throw ConfigError("config: unknown family '" + cfg.family + "'");
}

// ---------------------------------------------------------------------------

VerificationRun run_verification(const ScalarField& w, const ScalarField& theta,
                                 const MapField& u, const std::map<std::string, double>& tol) {
    auto get = [&tol](const char* name) {
        auto it = tol.find(name);
        return it == tol.end() ? 1e-4 : it->second;
    };
    VerificationRun out;
    auto push = [&out](const ResidualReport& r, bool counts) {
        out.reports.push_back(r);
        if (counts && !r.pass) out.all_pass = false;
    };

    // PDE suites certify the scale-normalized residual; the absolute norms
    // are reported alongside.
    push(sinh_gordon_residual(w, get("sinh_gordon")), false);
    push(sinh_gordon_residual_scaled(w, get("sinh_gordon")), true);
    push(sine_gordon_residual(theta, get("sine_gordon")), false);
    push(sine_gordon_residual_scaled(theta, get("sine_gordon")), true);

    const BtResiduals bt = bt_residual(w, theta, get("backlund"));
    push(bt.raw_x, true);
    push(bt.raw_y, true);
    push(bt.poly_x, true);
    push(bt.poly_y, true);

    const HarmonicityReports h = harmonicity_residual(u, get("harmonicity"));
    push(h.orthogonality, true);
    push(h.normalization, true);
    push(beltrami_residual(u, w, get("beltrami")), true);
    push(hopf_residual(u, get("hopf")), true);
    const DerivativeIdentityReports di =
        derivative_identity_check(u, w, theta, get("derivative_identity"));
    push(di.uz, true);
    push(di.uzbar, true);
    return out;
}

namespace {

void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const GeneratedFields& fields, const VerificationRun& ver) {
    ReportNode root("manifest");
    root.add("family", cfg.family);
    root.add("route", fields.route);
    ReportNode& g = root.child("grid");
    g.add("x_min", cfg.grid.x_min);
    g.add("x_max", cfg.grid.x_max);
    g.add("y_min", cfg.grid.y_min);
    g.add("y_max", cfg.grid.y_max);
    g.add("nx", static_cast<long>(cfg.grid.nx));
    g.add("ny", static_cast<long>(cfg.grid.ny));
    ReportNode& b = root.child("base");
    b.add("R00", cfg.base.R00);
    b.add("S00", cfg.base.S00);
    ReportNode& p = root.child("parameters");
    for (const auto& [k, v] : cfg.params) p.add(k, v);
    ReportNode& kn = root.child("kernel");
    kn.add("ode_step_tol", OdeSpec{}.step_tol);
    kn.add("quad_abs_tol", QuadratureSpec{}.abs_tol);
    kn.add("quad_rel_tol", QuadratureSpec{}.rel_tol);
    ReportNode& t = root.child("tolerances");
    for (const auto& name : kTolNames) t.add(name, cfg.tolerance(name));
    ReportNode& rs = root.child("residuals");
    for (const auto& r : ver.reports) add_report(rs, r);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw ConfigError("cannot write manifest: " + path);
        root.print(os);
    }
    fs::rename(tmp, path);
}

std::map<std::string, double> manifest_tolerances(const std::string& dir) {
    std::map<std::string, double> tol;
    const std::string path = dir + "/manifest.txt";
    if (!fs::exists(path)) return tol;
    const ReportNode root = ReportNode::parse_file(path);
    if (const ReportNode* t = root.find("tolerances"))
        for (const auto& [k, v] : t->entries) tol[k] = std::stod(v);
    return tol;
}

} // namespace

int cmd_generate(const std::string& config_path, const std::string& out_dir, std::ostream& log) {
    try {
        const ExperimentConfig cfg = parse_config_file(config_path);
        const GeneratedFields fields = run_family(cfg);
        fs::create_directories(out_dir);

        const VerificationRun ver =
            run_verification(fields.w, fields.theta, fields.u, cfg.tolerances);

        auto wants = [&cfg](const char* name) {
            return std::find(cfg.outputs.begin(), cfg.outputs.end(), name) != cfg.outputs.end();
        };
        if (wants("w")) write_scalar_csv(fields.w, out_dir + "/w.csv");
        if (wants("theta")) write_scalar_csv(fields.theta, out_dir + "/theta.csv");
        if (wants("u")) write_map_csv(fields.u, out_dir + "/u.csv");
        write_manifest(out_dir + "/manifest.txt", cfg, fields, ver);

        log << "generated family " << cfg.family << " (route " << fields.route << ") into "
            << out_dir << "\n";
        for (const auto& r : ver.reports)
            log << "  " << r.name << ": max " << r.max_abs << " rms " << r.rms
                << (r.pass ? " [pass]" : " [fail]") << "\n";
        return 0;
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_verify(const std::string& in_dir, const std::map<std::string, double>& tol_overrides,
               std::ostream& log) {
    try {
        for (const auto& [name, v] : tol_overrides) {
            if (std::find(kTolNames.begin(), kTolNames.end(), name) == kTolNames.end())
                throw ConfigError("verify: unknown tolerance '" + name + "'");
            if (!(v > 0.0)) throw ConfigError("verify: tolerance must be > 0");
        }
        const ScalarField w = read_scalar_csv(in_dir + "/w.csv");
        const ScalarField theta = read_scalar_csv(in_dir + "/theta.csv");
        const MapField u = read_map_csv(in_dir + "/u.csv");
        std::map<std::string, double> tol = manifest_tolerances(in_dir);
        for (const auto& [k, v] : tol_overrides) tol[k] = v;

        const VerificationRun ver = run_verification(w, theta, u, tol);
        verification_tree(ver.reports, w.grid).print(log);
        if (!ver.all_pass) {
            log << "verdict: FAIL\n";
            return 1;
        }
        log << "verdict: PASS\n";
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_plotdata(const std::string& in_dir, int xlines, int ylines, const std::string& out_path,
                 std::ostream& log) {
    try {
        if (xlines < 0 || ylines < 0) throw ConfigError("plotdata: line counts must be >= 0");
        const MapField u = read_map_csv(in_dir + "/u.csv");
        if (u.valid_count() == 0) throw ConfigError("plotdata: map is fully masked");

        std::ostringstream os;
        char buf[80];
        auto point = [&os, &buf](double R, double S) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", R, S);
            os << buf;
        };
        long records = 0;
        auto walk = [&](bool x_const, int fixed) {
            const int n = x_const ? u.grid.ny : u.grid.nx;
            bool open = false;
            for (int t = 0; t < n; ++t) {
                const int i = x_const ? fixed : t;
                const int j = x_const ? t : fixed;
                if (u.valid(i, j)) {
                    point(u.R[u.idx(i, j)], u.S[u.idx(i, j)]);
                    open = true;
                } else if (open) {
                    os << "\n"; // mask gap starts a new polyline record
                    open = false;
                }
            }
            if (open) os << "\n";
            ++records;
        };
        for (int k = 0; k < xlines; ++k) {
            const int i =
                (xlines == 1) ? (u.grid.nx - 1) / 2
                              : static_cast<int>(std::lround(double(k) * (u.grid.nx - 1) /
                                                             (xlines - 1)));
            walk(true, i);
        }
        for (int k = 0; k < ylines; ++k) {
            const int j =
                (ylines == 1) ? (u.grid.ny - 1) / 2
                              : static_cast<int>(std::lround(double(k) * (u.grid.ny - 1) /
                                                             (ylines - 1)));
            walk(false, j);
        }
        const std::string tmp = out_path + ".tmp";
        {
            std::ofstream f(tmp, std::ios::trunc);
            if (!f) throw ConfigError("plotdata: cannot write " + out_path);
            f << os.str();
        }
        fs::rename(tmp, out_path);
        log << "wrote " << records << " grid-line images to " << out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace hmap
