#pragma once

#include <string>

#include "core/spectral.hpp"

namespace gfrk {

// .gfk snapshot: ASCII header "GFRK1 nx ny lx ly t" followed by nx*ny
// little-endian 64-bit floats in row-major order.
void write_snapshot(const std::string& path, const Field& f, double t);

struct Snapshot {
    Field field;
    double t = 0.0;
};
Snapshot read_snapshot(const std::string& path);

// Lossy CSV export, one "x,y,value" row per node.
void write_field_csv(const std::string& path, const Field& f);

}  // namespace gfrk
