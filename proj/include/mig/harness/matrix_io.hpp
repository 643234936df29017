#pragma once

// MIGW text matrix files. A record is the line "MIGW 1", a line "n m", then
// n*m lines "re im" in row-major order at 17 significant digits. A file may
// hold several records back to back (a stack).

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mig/matlin.hpp"

namespace mig::harness {

void write_matrix(std::ostream& os, const CMatrix& a);
void write_matrix(const std::filesystem::path& path, const CMatrix& a);
void write_matrices(const std::filesystem::path& path, const std::vector<CMatrix>& stack);

/// Reads exactly one record. Throws ParseError naming the offending line.
CMatrix read_matrix(const std::filesystem::path& path);
/// Reads every record until end of file.
std::vector<CMatrix> read_matrices(const std::filesystem::path& path);
std::vector<CMatrix> read_matrices(std::istream& is);

/// Writes then reads back.
CMatrix io_roundtrip(const std::filesystem::path& path, const CMatrix& a);

}  // namespace mig::harness
