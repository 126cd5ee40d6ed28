#pragma once

#include <string>

#include "wkg/field.hpp"

namespace wkg {

// Binary snapshot: magic "WKGS", u32 version=1, u32 n_per_axis,
// f64 box_length, f64 t, then the complex values as little-endian f64
// (re,im) pairs in FFT-standard index order.
void write_snapshot(const std::string& path, const SpectralField& f, double t);

struct Snapshot {
    SpectralField field;
    double t = 0.0;
};

Snapshot read_snapshot(const std::string& path, FieldTag tag = FieldTag::scalar);

}  // namespace wkg
