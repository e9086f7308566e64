#include "lqu/matrix_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lqu {

const char* matrix_kind_name(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Density: return "density";
    case MatrixKind::Observable: return "observable";
    case MatrixKind::Unitary: return "unitary";
  }
  return "?";
}

namespace {

MatrixKind kind_from_name(const std::string& name) {
  if (name == "density") return MatrixKind::Density;
  if (name == "observable") return MatrixKind::Observable;
  if (name == "unitary") return MatrixKind::Unitary;
  throw parse_error("matrix file: unknown kind \"" + name +
                    "\" (expected density, observable or unitary)");
}

}  // namespace

MatrixFile parse_matrix_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw parse_error("matrix file: not a JSON object");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw parse_error("matrix file: missing string field \"kind\"");
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw parse_error("matrix file: missing integer field \"dim\"");
  }
  MatrixFile mf;
  mf.kind = kind_from_name(j["kind"].get<std::string>());
  mf.dim = j["dim"].get<Eigen::Index>();
  if (mf.dim < 1) throw parse_error("matrix file: dim must be positive");
  if (j.contains("dA") != j.contains("dB")) {
    throw parse_error("matrix file: dA and dB must be given together");
  }
  if (j.contains("dA")) {
    if (!j["dA"].is_number_integer() || !j["dB"].is_number_integer()) {
      throw parse_error("matrix file: dA and dB must be integers");
    }
    mf.dA = j["dA"].get<Eigen::Index>();
    mf.dB = j["dB"].get<Eigen::Index>();
    if (*mf.dA < 1 || *mf.dB < 1 || *mf.dA * *mf.dB != mf.dim) {
      throw parse_error("matrix file: dA*dB must equal dim");
    }
  }
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw parse_error("matrix file: missing array field \"entries\"");
  }
  const auto& entries = j["entries"];
  if (static_cast<Eigen::Index>(entries.size()) != mf.dim * mf.dim) {
    std::ostringstream os;
    os << "matrix file: expected " << mf.dim * mf.dim << " entries, got "
       << entries.size();
    throw parse_error(os.str());
  }
  mf.entries.resize(mf.dim, mf.dim);
  for (Eigen::Index k = 0; k < mf.dim * mf.dim; ++k) {
    const auto& pair = entries[static_cast<std::size_t>(k)];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw parse_error("matrix file: each entry must be a [re, im] pair");
    }
    mf.entries(k / mf.dim, k % mf.dim) =
        Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return mf;
}

std::string matrix_file_json(const MatrixFile& mf) {
  nlohmann::json j;
  j["kind"] = matrix_kind_name(mf.kind);
  j["dim"] = mf.dim;
  if (mf.dA) j["dA"] = *mf.dA;
  if (mf.dB) j["dB"] = *mf.dB;
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < mf.dim; ++i) {
    for (Eigen::Index k = 0; k < mf.dim; ++k) {
      entries.push_back({mf.entries(i, k).real(), mf.entries(i, k).imag()});
    }
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

MatrixFile read_matrix_file(const std::string& path) {
  return parse_matrix_json(read_text_file(path));
}

void write_matrix_file(const std::string& path, const MatrixFile& mf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot open file for writing: " + path);
  out << matrix_file_json(mf);
}

DensityMatrix to_density(const MatrixFile& mf) {
  if (mf.kind != MatrixKind::Density) {
    throw validation_error(std::string("matrix file: expected kind density, got ") +
                           matrix_kind_name(mf.kind));
  }
  return DensityMatrix(mf.entries);
}

BipartiteState to_bipartite(const MatrixFile& mf) {
  if (!mf.dA || !mf.dB) {
    throw validation_error(
        "matrix file: bipartite quantity needs dA and dB in the state file");
  }
  if (mf.kind != MatrixKind::Density) {
    throw validation_error(std::string("matrix file: expected kind density, got ") +
                           matrix_kind_name(mf.kind));
  }
  return BipartiteState(mf.entries, *mf.dA, *mf.dB);
}

Observable to_observable(const MatrixFile& mf) {
  if (mf.kind != MatrixKind::Observable) {
    throw validation_error(
        std::string("matrix file: expected kind observable, got ") +
        matrix_kind_name(mf.kind));
  }
  return Observable(mf.entries);
}

ComplexMatrix to_unitary(const MatrixFile& mf) {
  if (mf.kind != MatrixKind::Unitary) {
    throw validation_error(std::string("matrix file: expected kind unitary, got ") +
                           matrix_kind_name(mf.kind));
  }
  const double residual =
      max_abs(mf.entries.adjoint() * mf.entries - identity(mf.dim));
  if (residual > tolerances().unitarity) {
    std::ostringstream os;
    os << "matrix file: not unitary, ||U^dag U - I||_max = " << residual;
    throw validation_error(os.str());
  }
  return mf.entries;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string file_hash(const std::string& path) {
  return fnv1a64_hex(read_text_file(path));
}

}  // namespace lqu
