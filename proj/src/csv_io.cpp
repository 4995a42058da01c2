#include "svgd/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace svgd {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "iter,gamma,ksd2,mean_grad_norm,elapsed_ms\n";
    for (const TraceRecord& rec : trace) {
        out << rec.iter << ',' << format_double(rec.gamma) << ','
            << format_double(rec.ksd2) << ','
            << format_double(rec.mean_grad_norm) << ','
            << format_double(rec.elapsed_ms) << '\n';
    }
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "iter,gamma,ksd2,mean_grad_norm,elapsed_ms") {
        throw std::runtime_error(path + ": bad trace header");
    }
    std::vector<TraceRecord> trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        TraceRecord rec;
        std::getline(row, field, ',');
        rec.iter = std::stoi(field);
        std::getline(row, field, ',');
        rec.gamma = std::stod(field);
        std::getline(row, field, ',');
        rec.ksd2 = std::stod(field);
        std::getline(row, field, ',');
        rec.mean_grad_norm = std::stod(field);
        std::getline(row, field, ',');
        rec.elapsed_ms = std::stod(field);
        trace.push_back(rec);
    }
    return trace;
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Mat read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            row.push_back(std::stod(field));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error(path + ": ragged CSV rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty CSV");
    Mat m(static_cast<Eigen::Index>(rows.size()),
          static_cast<Eigen::Index>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    return m;
}

Vec read_vector_csv(const std::string& path) {
    const Mat m = read_matrix_csv(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw std::runtime_error(path + ": expected a single row or column");
}

}  // namespace svgd
