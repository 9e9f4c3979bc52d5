#include "fsmf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fsmf/errors.hpp"

namespace fsmf::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file", 1);
    ++lineno;
    std::istringstream header(line);
    long rows = 0, cols = 0;
    if (!(header >> rows >> cols) || rows < 0 || cols < 0)
        throw ParseError(path.string() + ": bad matrix header", lineno);
    DenseMatrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (int i = 0; i < rows; ++i) {
        if (!std::getline(in, line))
            throw ParseError(path.string() + ": expected " + std::to_string(rows) + " rows",
                             lineno);
        ++lineno;
        std::istringstream row(line);
        for (int j = 0; j < cols; ++j) {
            double v;
            if (!(row >> v))
                throw ParseError(path.string() + ": expected " + std::to_string(cols) + " values",
                                 lineno);
            if (!std::isfinite(v))
                throw ParseError(path.string() + ": non-finite entry", lineno);
            m(i, j) = v;
        }
        double extra;
        if (row >> extra) throw ParseError(path.string() + ": trailing values", lineno);
    }
    return m;
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out = open_out(path);
    out << m.rows() << ' ' << m.cols() << '\n';
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

SupportMask read_support(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file", 1);
    ++lineno;
    std::istringstream header(line);
    long rows = 0, cols = 0, nnz = 0;
    if (!(header >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
        throw ParseError(path.string() + ": bad support header", lineno);
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(nnz));
    std::vector<std::vector<bool>> seen(static_cast<std::size_t>(cols),
                                        std::vector<bool>(static_cast<std::size_t>(rows), false));
    for (long t = 0; t < nnz; ++t) {
        if (!std::getline(in, line))
            throw ParseError(path.string() + ": expected " + std::to_string(nnz) + " entries",
                             lineno);
        ++lineno;
        std::istringstream entry(line);
        long i = 0, j = 0;
        if (!(entry >> i >> j)) throw ParseError(path.string() + ": bad support entry", lineno);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError(path.string() + ": entry out of range", lineno);
        if (seen[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)])
            throw ParseError(path.string() + ": duplicate entry", lineno);
        seen[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = true;
        cells.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    }
    return SupportMask(static_cast<int>(rows), static_cast<int>(cols), std::move(cells));
}

void write_support(const std::filesystem::path& path, const SupportMask& mask) {
    std::ofstream out = open_out(path);
    out << mask.rows() << ' ' << mask.cols() << ' ' << mask.nnz() << '\n';
    for (const auto& [i, j] : mask.cells()) out << (i + 1) << ' ' << (j + 1) << '\n';
}

nlohmann::json json_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::json report_to_json(const SolveReport& report, bool include_traces) {
    nlohmann::json j;
    j["method"] = report.method_tag;
    j["certificate"] = report.certificate ? nlohmann::json(*report.certificate) : nlohmann::json();
    j["final_loss"] = json_double(report.final_loss);
    j["log10_frobenius_error"] =
        json_double(report.final_loss > 0 ? 0.5 * std::log10(report.final_loss)
                                          : -std::numeric_limits<double>::infinity());
    j["wall_time_s"] = json_double(report.wall_time_s);
    j["iterations"] = report.iterations;
    if (report.learning_rate) j["learning_rate"] = json_double(*report.learning_rate);
    j["seed"] = report.seed;
    j["diverged"] = report.diverged;
    j["converged"] = report.converged;
    if (include_traces && !report.loss_trace.empty()) {
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& [it, value] : report.loss_trace)
            trace.push_back({it, json_double(value)});
        j["loss_trace"] = std::move(trace);
    }
    if (include_traces && report.support_change_trace) {
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& c : *report.support_change_trace)
            trace.push_back({c.iteration, c.left_diff, c.right_diff});
        j["support_change_trace"] = std::move(trace);
    }
    return j;
}

}  // namespace fsmf::io
