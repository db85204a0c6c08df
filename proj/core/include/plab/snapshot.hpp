#pragma once

#include "plab/grid.hpp"

#include <iosfwd>
#include <string>

namespace plab {

/// Field snapshot format: first line is a JSON header
///   {"format": "plab-field", "version": 1, "nx": .., "ny": .., "h": ..,
///    "origin": [x, y], "field_kind": "scalar" | "vector" | "sym_matrix",
///    "shape": "...", "columns": [...]}
/// followed by CSV rows "i,j,kind,value..." for every non-exterior node
/// (kind 1 = boundary, 2 = interior). Doubles are written with %.17g so a
/// write/read round trip is bit-exact.
void write_snapshot(std::ostream& os, const ScalarField& f);
void write_snapshot(std::ostream& os, const VectorField& f);
void write_snapshot(std::ostream& os, const SymMatrixField& f);

void write_snapshot_file(const std::string& path, const ScalarField& f);
void write_snapshot_file(const std::string& path, const VectorField& f);
void write_snapshot_file(const std::string& path, const SymMatrixField& f);

std::string snapshot_field_kind(std::istream& is);  ///< peeks the header only

ScalarField read_scalar_snapshot(std::istream& is);
VectorField read_vector_snapshot(std::istream& is);
SymMatrixField read_sym_matrix_snapshot(std::istream& is);

ScalarField read_scalar_snapshot_file(const std::string& path);
VectorField read_vector_snapshot_file(const std::string& path);
SymMatrixField read_sym_matrix_snapshot_file(const std::string& path);

/// Deterministic double formatting shared by snapshots and reports.
std::string format_double(double v);

}  // namespace plab
