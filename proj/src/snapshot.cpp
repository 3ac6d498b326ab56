#include "sqg/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace sqg {
namespace {

static_assert(std::endian::native == std::endian::little,
              "SQGF writer assumes a little-endian host");

constexpr char magic[4] = {'S', 'Q', 'G', 'F'};
constexpr std::uint32_t current_version = 1;

template <class T> void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T> T get(std::ifstream& is, const char* what) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error(std::string("SQGF: truncated while reading ") + what);
    return v;
}

} // namespace

void write_snapshot(const std::string& path, const ScalarField& field, double gamma,
                    double time) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("SQGF: cannot open " + path + " for writing");
    os.write(magic, 4);
    put(os, current_version);
    put(os, static_cast<std::uint32_t>(field.grid.n));
    put(os, gamma);
    put(os, time);
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("SQGF: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("SQGF: cannot open " + path);
    char m[4];
    if (!is.read(m, 4) || std::memcmp(m, magic, 4) != 0)
        throw std::runtime_error("SQGF: bad magic in " + path);
    Snapshot snap;
    snap.version = get<std::uint32_t>(is, "version");
    if (snap.version != current_version)
        throw std::runtime_error("SQGF: unsupported version " + std::to_string(snap.version));
    const auto n = get<std::uint32_t>(is, "grid size");
    snap.gamma = get<double>(is, "gamma");
    snap.time = get<double>(is, "time");
    snap.field = ScalarField(Grid::of(static_cast<int>(n)));
    if (!is.read(reinterpret_cast<char*>(snap.field.values.data()),
                 static_cast<std::streamsize>(snap.field.values.size() * sizeof(double))))
        throw std::runtime_error("SQGF: truncated field data in " + path);
    return snap;
}

} // namespace sqg
