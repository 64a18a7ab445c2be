#include "core/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gfrk {

namespace {

uint64_t to_le_bits(double x) {
    uint64_t u;
    std::memcpy(&u, &x, sizeof(u));
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    return u;
}

double from_le_bits(uint64_t u) {
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    double x;
    std::memcpy(&x, &u, sizeof(x));
    return x;
}

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void write_snapshot(const std::string& path, const Field& f, double t) {
    if (!f.all_finite()) throw std::runtime_error("write_snapshot: field contains NaN/Inf");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open '" + path + "'");
    const Grid& g = *f.grid();
    out << "GFRK1 " << g.nx() << " " << g.ny() << " " << g17(g.lx()) << " " << g17(g.ly())
        << " " << g17(t) << "\n";
    std::vector<uint64_t> raw(f.size());
    for (int n = 0; n < f.size(); ++n) raw[n] = to_le_bits(f[n]);
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size() * sizeof(uint64_t));
    if (!out) throw std::runtime_error("write_snapshot: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("read_snapshot: missing header");
    std::istringstream hs(header);
    std::string magic;
    int nx = 0, ny = 0;
    double lx = 0, ly = 0, t = 0;
    hs >> magic >> nx >> ny >> lx >> ly >> t;
    if (magic != "GFRK1" || !hs)
        throw std::runtime_error("read_snapshot: '" + path + "' is not a GFRK1 snapshot");
    auto grid = Grid::make(nx, ny, lx, ly);
    Snapshot snap{Field(grid), t};
    std::vector<uint64_t> raw(grid->size());
    in.read(reinterpret_cast<char*>(raw.data()), raw.size() * sizeof(uint64_t));
    if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(uint64_t)))
        throw std::runtime_error("read_snapshot: truncated payload in '" + path + "'");
    for (int n = 0; n < grid->size(); ++n) snap.field[n] = from_le_bits(raw[n]);
    if (!snap.field.all_finite())
        throw std::runtime_error("read_snapshot: payload contains NaN/Inf");
    return snap;
}

void write_field_csv(const std::string& path, const Field& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open '" + path + "'");
    out << "x,y,value\n";
    const Grid& g = *f.grid();
    char buf[128];
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", g.x(i), g.y(j), f(i, j));
            out << buf;
        }
}

}  // namespace gfrk
