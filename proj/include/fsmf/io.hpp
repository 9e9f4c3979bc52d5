#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fsmf/problem.hpp"
#include "fsmf/support.hpp"

namespace fsmf::io {

// Matrix files: a header line "m n" followed by m lines of n decimal
// literals. Doubles are written with 17 significant digits so that
// parse -> serialize -> parse is the identity.
DenseMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m);

// Support files: a header line "rows cols nnz" followed by nnz lines
// "i j" (1-based). Out-of-range and duplicate entries are parse errors.
SupportMask read_support(const std::filesystem::path& path);
void write_support(const std::filesystem::path& path, const SupportMask& mask);

std::string format_double(double v);

/// JSON value for a double, mapping non-finite values to the strings
/// "inf", "-inf", "nan".
nlohmann::json json_double(double v);

nlohmann::json report_to_json(const SolveReport& report, bool include_traces = true);

}  // namespace fsmf::io
