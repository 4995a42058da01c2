#pragma once

#include <string>
#include <vector>

#include "svgd/ensemble.hpp"

namespace svgd {

// Trace CSV: header iter,gamma,ksd2,mean_grad_norm,elapsed_ms; doubles are
// written with 17 significant digits so reparsing reproduces them exactly.
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

// Plain numeric CSV, one row per line, no header.
void write_matrix_csv(const std::string& path, const Mat& m);
Mat read_matrix_csv(const std::string& path);
Vec read_vector_csv(const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace svgd
