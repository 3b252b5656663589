#ifndef CHTX_SNAPSHOT_HPP
#define CHTX_SNAPSHOT_HPP

// Binary field snapshots, all numbers little-endian:
//
//   "CHTX1" | dim:u8 | counts:u32 × dim | lengths:f64 × dim | values:f64 × N
//
// Values are stored row-major (see grid.hpp).

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "chtx/grid.hpp"

namespace chtx {

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_snapshot(const Field& field);
Field decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const std::filesystem::path& path, const Field& field);
Field read_snapshot(const std::filesystem::path& path);

}  // namespace chtx

#endif
