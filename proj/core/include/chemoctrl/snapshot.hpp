#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chemoctrl/grid.hpp"

namespace chemoctrl {

// On-disk field image. The file is a short text header followed by a raw
// little-endian float64 payload in the grid's linear order (axis 0 fastest):
//
//   CHEMOCTRL-FIELD 1
//   dims 64 32
//   spacing 0.015625 0.03125
//   step 10
//   time 0.10000000000000001
//   data
//   <dims product * 8 bytes>
//
// Round trips are bit-exact: the payload carries the exact bit pattern of
// every value and the header's floats are written with 17 significant digits.
struct Snapshot {
    std::vector<std::int64_t> dims;
    std::vector<double> spacing;
    int step = 0;
    double time = 0.0;
    std::vector<double> values;
};

void write_snapshot(const ScalarField& field, int step, double time, const std::string& path);
void write_snapshot(const Snapshot& snap, const std::string& path);

// Throws SnapshotError on a bad magic line, malformed header, dims/payload
// disagreement, or truncation.
Snapshot read_snapshot(const std::string& path);

// Convenience: read and bind to a grid, checking dims and spacing.
ScalarField read_snapshot_field(const std::string& path, const Grid& grid);

}  // namespace chemoctrl
