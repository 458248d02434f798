#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsl/dynamics.hpp"

namespace qsl {

// Empty cells print as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> notes;  // CSV "# key: value" header lines
};

Cell opt(const std::optional<double>& v);

std::string format_double(double v);  // 17 significant digits

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);

struct ScatterRecord {
    long long state_id;
    std::optional<double> tau;
    std::optional<double> f_ml;
    std::optional<double> f_mt;
    std::vector<cplx> coeffs;
};

struct ScatterSummary {
    std::size_t n_states = 0;
    std::optional<double> min_tau;
    std::size_t n_absent = 0;
    std::size_t n_violations = 0;  // f_ml or f_mt below pi/2 - 1e-8 at tau
};

struct ScatterResult {
    std::vector<ScatterRecord> records;
    ScatterSummary summary;
};

ScatterResult run_scatter(const ShiftedSpectrum& spec, const std::vector<EigenbasisState>& states, double horizon,
                          double eps = kDefaultOrthEps);

Table scatter_table(const ScatterResult& r, std::size_t dim);

}  // namespace qsl
