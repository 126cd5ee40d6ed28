#include "wkg/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "wkg/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace wkg {

void write_snapshot(const std::string& path, const SpectralField& f, double t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("cannot open " + path + " for writing");
    os.write("WKGS", 4);
    std::uint32_t version = 1, n = static_cast<std::uint32_t>(f.grid->n());
    double L = f.grid->box_length();
    os.write(reinterpret_cast<const char*>(&version), 4);
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&L), 8);
    os.write(reinterpret_cast<const char*>(&t), 8);
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(cplx)));
    if (!os) throw input_error("short write to " + path);
}

Snapshot read_snapshot(const std::string& path, FieldTag tag) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "WKGS", 4) != 0)
        throw input_error(path + ": bad snapshot magic");
    std::uint32_t version = 0, n = 0;
    double L = 0, t = 0;
    is.read(reinterpret_cast<char*>(&version), 4);
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&L), 8);
    is.read(reinterpret_cast<char*>(&t), 8);
    if (!is || version != 1) throw input_error(path + ": unsupported snapshot version");
    Snapshot snap;
    snap.t = t;
    snap.field = SpectralField(make_grid(static_cast<int>(n), L), tag);
    is.read(reinterpret_cast<char*>(snap.field.v.data()),
            static_cast<std::streamsize>(snap.field.v.size() * sizeof(cplx)));
    if (!is) throw input_error(path + ": truncated snapshot");
    return snap;
}

}  // namespace wkg
