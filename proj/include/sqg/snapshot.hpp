// snapshot.hpp
// SQGF binary field snapshots:
//   "SQGF" | u32 version | u32 n | f64 gamma | f64 time | n*n f64 row-major
// All integers and floats little-endian.

#pragma once

#include "sqg/field.hpp"

#include <cstdint>
#include <string>

namespace sqg {

struct Snapshot {
    std::uint32_t version = 1;
    double gamma = 0.0;
    double time = 0.0;
    ScalarField field;
};

void write_snapshot(const std::string& path, const ScalarField& field, double gamma, double time);
Snapshot read_snapshot(const std::string& path);

} // namespace sqg
