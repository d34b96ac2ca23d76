#include "fracflow/fhf.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fracflow/errors.hpp"

namespace fracflow {
namespace {

constexpr std::array<char, 4> kMagic = {'F', 'H', 'F', '1'};

template <class T>
void put(std::ostream& os, T v) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    os.write(bytes.data(), bytes.size());
}

template <class T>
T get(std::istream& is) {
    std::array<char, sizeof(T)> bytes;
    if (!is.read(bytes.data(), bytes.size())) raise(ErrorKind::io, "truncated FHF1 stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T v;
    std::memcpy(&v, bytes.data(), sizeof(T));
    return v;
}

}  // namespace

void write_fhf(const std::filesystem::path& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorKind::io, "cannot open " + path.string() + " for writing");
    os.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().points));
    put<double>(os, f.grid().length);
    for (double v : f.values()) put<double>(os, v);
    if (!os) raise(ErrorKind::io, "write failed for " + path.string());
}

Field read_fhf(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(ErrorKind::io, "cannot open " + path.string());
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
        raise(ErrorKind::io, path.string() + " is not an FHF1 file");
    }
    Grid g;
    g.dim = static_cast<int>(get<std::uint32_t>(is));
    g.points = static_cast<int>(get<std::uint32_t>(is));
    g.length = get<double>(is);
    try {
        g.validate();
    } catch (const Error& e) {
        raise(ErrorKind::io, path.string() + ": bad header (" + e.what() + ")");
    }
    std::vector<double> values(g.size());
    for (double& v : values) v = get<double>(is);
    return Field(g, std::move(values));
}

}  // namespace fracflow
