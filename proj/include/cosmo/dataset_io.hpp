#pragma once

#include "cosmo/synth.hpp"

#include <filesystem>

namespace cosmo {

/// Writes `<stem>.csv` (header x0..x{d-1}, one observation per row, values in
/// shortest round-trip form) and `<stem>.json` (generation metadata plus the
/// ground-truth arc list). See docs/formats.md.
void write_dataset(const Dataset& data, const std::filesystem::path& stem);

/// Reads a dataset written by write_dataset. Throws std::runtime_error on I/O
/// or format problems.
Dataset read_dataset(const std::filesystem::path& stem);

/// Dense matrix as CSV without header, shortest round-trip doubles.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
/// Reads a headerless numeric CSV. A first line that does not parse as
/// numbers is treated as a header and skipped.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace cosmo
