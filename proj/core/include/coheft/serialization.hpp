#pragma once

#include <string>

#include "coheft/matrix.hpp"

namespace coheft {

/// JSON form {"dim": d, "entries": [[re, im], ...]} with entries row-major.
/// Doubles are emitted in shortest round-trip form, so parse(serialize(m))
/// reproduces every entry bit-exactly.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

void save_matrix(const ComplexMatrix& m, const std::string& path);
ComplexMatrix load_matrix(const std::string& path);

/// Whole-file helpers shared by the trajectory and config loaders.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace coheft
