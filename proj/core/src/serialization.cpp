#include "coheft/serialization.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coheft/errors.hpp"

namespace coheft {

using nlohmann::json;

std::string matrix_to_json(const ComplexMatrix& m) {
  require_supported_dim(m, "matrix_to_json");
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  json doc;
  doc["dim"] = m.rows();
  doc["entries"] = std::move(entries);
  return doc.dump();
}

ComplexMatrix matrix_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("matrix_from_json: ") + e.what());
  }
  if (!doc.contains("dim") || !doc.contains("entries"))
    throw MissingField("matrix_from_json: need both \"dim\" and \"entries\"");
  const auto dim = doc["dim"].get<Eigen::Index>();
  if (dim < 1 || dim > kMaxDim)
    throw DimensionMismatch("matrix_from_json: dim " + std::to_string(dim) +
                            " outside supported range");
  const auto& entries = doc["entries"];
  if (!entries.is_array() ||
      entries.size() != static_cast<std::size_t>(dim * dim))
    throw ConfigParse("matrix_from_json: expected " +
                      std::to_string(dim * dim) + " entries");
  ComplexMatrix m(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j, ++k) {
      const auto& e = entries[k];
      if (!e.is_array() || e.size() != 2)
        throw ConfigParse("matrix_from_json: entry " + std::to_string(k) +
                          " is not an [re, im] pair");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

void save_matrix(const ComplexMatrix& m, const std::string& path) {
  write_text_file(path, matrix_to_json(m) + "\n");
}

ComplexMatrix load_matrix(const std::string& path) {
  return matrix_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOFailure("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw IOFailure("read failed: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOFailure("cannot open for writing: " + path);
  out << content;
  if (!out.good()) throw IOFailure("write failed: " + path);
}

}  // namespace coheft
