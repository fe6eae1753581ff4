#pragma once

/**
 * Field snapshots and level-set reports.
 *
 * CSV: header "row,col,value", one line per site, row-major, values printed
 * with 17 significant digits.
 *
 * Binary (little-endian): 8-byte magic "LSDGFF01", uint64 N, then N*N
 * IEEE-754 doubles in row-major order.
 */

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lsdev/gff/grid.hpp"
#include "lsdev/gff/observables.hpp"

namespace lsdev::gff {

inline constexpr char kBinaryMagic[9] = "LSDGFF01";

void write_csv(const Field& field, std::ostream& out);
void write_binary(const Field& field, std::ostream& out);
Field read_binary(std::istream& in);

/// Throws std::runtime_error naming the path on I/O failure.
void save_csv(const Field& field, const std::filesystem::path& path);
void save_binary(const Field& field, const std::filesystem::path& path);
Field load_binary(const std::filesystem::path& path);

/// {"n":..,"eta":..,"threshold":..,"count":..,"sites":[[row,col],..]}
std::string level_set_json(const LevelSet& set, int n);

}  // namespace lsdev::gff
