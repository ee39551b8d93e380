#include "hmap/grid.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hmap {

void GridSpec::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("GridSpec: need x_min < x_max and y_min < y_max");
    if (nx < 8 || ny < 8) throw std::invalid_argument("GridSpec: need nx >= 8 and ny >= 8");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
        !std::isfinite(y_max))
        throw std::invalid_argument("GridSpec: non-finite bounds");
}

long ScalarField::valid_count() const {
    long n = 0;
    for (auto m : mask) n += m;
    return n;
}

long MapField::valid_count() const {
    long n = 0;
    for (auto m : mask) n += m;
    return n;
}

namespace {

// full 3x3 neighborhood valid
template <class FieldT>
bool stencil_ok(const FieldT& f, int i, int j) {
    if (i < 1 || j < 1 || i > f.grid.nx - 2 || j > f.grid.ny - 2) return false;
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
            if (!f.valid(i + di, j + dj)) return false;
    return true;
}

} // namespace

GradientFields fd_gradient(const ScalarField& f) {
    GradientFields out{ScalarField(f.grid), ScalarField(f.grid)};
    const double ix2 = 1.0 / (2.0 * f.grid.dx());
    const double iy2 = 1.0 / (2.0 * f.grid.dy());
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            if (!stencil_ok(f, i, j)) continue;
            out.fx.set(i, j, (f.at(i + 1, j) - f.at(i - 1, j)) * ix2);
            out.fy.set(i, j, (f.at(i, j + 1) - f.at(i, j - 1)) * iy2);
        }
    return out;
}

ScalarField fd_laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    const double ixx = 1.0 / (f.grid.dx() * f.grid.dx());
    const double iyy = 1.0 / (f.grid.dy() * f.grid.dy());
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            if (!stencil_ok(f, i, j)) continue;
            const double c = f.at(i, j);
            out.set(i, j, (f.at(i + 1, j) + f.at(i - 1, j) - 2.0 * c) * ixx +
                              (f.at(i, j + 1) + f.at(i, j - 1) - 2.0 * c) * iyy);
        }
    return out;
}

WirtingerFields wirtinger(const MapField& u) {
    WirtingerFields out{ComplexField(u.grid), ComplexField(u.grid)};
    const double ix2 = 1.0 / (2.0 * u.grid.dx());
    const double iy2 = 1.0 / (2.0 * u.grid.dy());
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            if (!stencil_ok(u, i, j)) continue;
            const size_t k = u.idx(i, j);
            const double Rx = (u.R[u.idx(i + 1, j)] - u.R[u.idx(i - 1, j)]) * ix2;
            const double Ry = (u.R[u.idx(i, j + 1)] - u.R[u.idx(i, j - 1)]) * iy2;
            const double Sx = (u.S[u.idx(i + 1, j)] - u.S[u.idx(i - 1, j)]) * ix2;
            const double Sy = (u.S[u.idx(i, j + 1)] - u.S[u.idx(i, j - 1)]) * iy2;
            out.uz.values[k] = 0.5 * std::complex<double>(Rx + Sy, Sx - Ry);
            out.uzbar.values[k] = 0.5 * std::complex<double>(Rx - Sy, Sx + Ry);
            out.uz.mask[k] = 1;
            out.uzbar.mask[k] = 1;
        }
    return out;
}

ScalarField mask_singular(const std::function<double(double, double)>& f, const GridSpec& grid,
                          const std::function<bool(double, double)>& guard) {
    grid.validate();
    ScalarField raw(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            if (!guard(x, y)) continue;
            const double v = f(x, y);
            if (!std::isfinite(v)) continue;
            raw.set(i, j, v);
        }
    // dilate the failure set by one stencil radius
    ScalarField out = raw;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            if (!raw.valid(i, j)) continue;
            bool keep = true;
            for (int dj = -1; dj <= 1 && keep; ++dj)
                for (int di = -1; di <= 1 && keep; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= grid.nx || jj >= grid.ny) continue;
                    if (!raw.valid(ii, jj)) keep = false;
                }
            if (!keep) out.mask[out.idx(i, j)] = 0;
        }
    if (out.valid_count() == 0) throw EmptyFieldError("mask_singular: all nodes masked");
    return out;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot open for writing: " + tmp);
        os << body;
        if (!os) throw ConfigError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

GridSpec infer_grid(const std::vector<double>& xs, const std::vector<double>& ys) {
    GridSpec g;
    std::vector<double> ux, uy;
    for (double x : xs)
        if (ux.empty() || x != ux.back()) {
            if (!ux.empty() && x < ux.back()) break; // wrapped to next row
            ux.push_back(x);
        }
    for (size_t k = 0; k < ys.size(); k += (ux.empty() ? 1 : ux.size())) uy.push_back(ys[k]);
    if (ux.size() < 8 || uy.size() < 8) throw ConfigError("field file: grid too small");
    g.nx = static_cast<int>(ux.size());
    g.ny = static_cast<int>(uy.size());
    g.x_min = ux.front();
    g.x_max = ux.back();
    g.y_min = uy.front();
    g.y_max = uy.back();
    g.validate();
    return g;
}

} // namespace

void write_scalar_csv(const ScalarField& f, const std::string& path) {
    std::ostringstream os;
    os << "x,y,value,mask\n";
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i)
            os << fmt17(f.grid.x(i)) << ',' << fmt17(f.grid.y(j)) << ',' << fmt17(f.at(i, j))
               << ',' << (f.valid(i, j) ? 1 : 0) << '\n';
    atomic_write(path, os.str());
}

void write_map_csv(const MapField& u, const std::string& path) {
    std::ostringstream os;
    os << "x,y,R,S,mask\n";
    os << "# base," << fmt17(u.base.R00) << ',' << fmt17(u.base.S00) << '\n';
    for (int j = 0; j < u.grid.ny; ++j)
        for (int i = 0; i < u.grid.nx; ++i) {
            const size_t k = u.idx(i, j);
            os << fmt17(u.grid.x(i)) << ',' << fmt17(u.grid.y(j)) << ',' << fmt17(u.R[k]) << ','
               << fmt17(u.S[k]) << ',' << (u.mask[k] ? 1 : 0) << '\n';
        }
    atomic_write(path, os.str());
}

ScalarField read_scalar_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open field file: " + path);
    std::string line;
    if (!std::getline(is, line) || split_csv(line).size() != 4 || split_csv(line)[0] != "x")
        throw ConfigError("bad scalar field header in " + path);
    std::vector<double> xs, ys, vs;
    std::vector<std::uint8_t> ms;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto parts = split_csv(line);
        if (parts.size() != 4) throw ConfigError("bad scalar field row in " + path);
        xs.push_back(std::stod(parts[0]));
        ys.push_back(std::stod(parts[1]));
        vs.push_back(std::stod(parts[2]));
        ms.push_back(static_cast<std::uint8_t>(std::stoi(parts[3])));
    }
    GridSpec g = infer_grid(xs, ys);
    if (static_cast<long>(vs.size()) != g.nodes())
        throw ConfigError("field file row count mismatch in " + path);
    ScalarField f(g);
    f.values = std::move(vs);
    f.mask = std::move(ms);
    return f;
}

MapField read_map_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open field file: " + path);
    std::string line;
    if (!std::getline(is, line) || split_csv(line).size() != 5)
        throw ConfigError("bad map field header in " + path);
    BaseValues base;
    bool have_base = false;
    std::vector<double> xs, ys, Rs, Ss;
    std::vector<std::uint8_t> ms;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto parts = split_csv(line);
            if (parts.size() == 3 && parts[0] == "# base") {
                base.R00 = std::stod(parts[1]);
                base.S00 = std::stod(parts[2]);
                have_base = true;
            }
            continue;
        }
        auto parts = split_csv(line);
        if (parts.size() != 5) throw ConfigError("bad map field row in " + path);
        xs.push_back(std::stod(parts[0]));
        ys.push_back(std::stod(parts[1]));
        Rs.push_back(std::stod(parts[2]));
        Ss.push_back(std::stod(parts[3]));
        ms.push_back(static_cast<std::uint8_t>(std::stoi(parts[4])));
    }
    GridSpec g = infer_grid(xs, ys);
    if (static_cast<long>(Rs.size()) != g.nodes())
        throw ConfigError("field file row count mismatch in " + path);
    MapField u(g);
    u.R = std::move(Rs);
    u.S = std::move(Ss);
    u.mask = std::move(ms);
    if (have_base) u.base = base;
    return u;
}

} // namespace hmap
