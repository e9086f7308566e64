#pragma once

#include <optional>
#include <string>

#include "lqu/states.hpp"
#include "lqu/uncertainty.hpp"

namespace lqu {

enum class MatrixKind { Density, Observable, Unitary };

const char* matrix_kind_name(MatrixKind kind);

// On-disk JSON: {"kind": "density", "dim": 4, "dA": 2, "dB": 2,
//                "entries": [[re, im], ...]}  (row-major, dim^2 pairs;
// dA/dB optional and only meaningful for bipartite density matrices)
struct MatrixFile {
  MatrixKind kind = MatrixKind::Density;
  Eigen::Index dim = 0;
  std::optional<Eigen::Index> dA;
  std::optional<Eigen::Index> dB;
  ComplexMatrix entries;
};

MatrixFile parse_matrix_json(const std::string& text);
std::string matrix_file_json(const MatrixFile& mf);

MatrixFile read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const MatrixFile& mf);

// conversions run the full domain validation for the declared kind
DensityMatrix to_density(const MatrixFile& mf);
BipartiteState to_bipartite(const MatrixFile& mf);  // requires dA/dB
Observable to_observable(const MatrixFile& mf);
ComplexMatrix to_unitary(const MatrixFile& mf);

// FNV-1a 64-bit, hex-encoded; used to tie results to their input bytes
std::string fnv1a64_hex(const std::string& bytes);
std::string file_hash(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace lqu
