#include "qsl/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "qsl/bounds.hpp"
#include "qsl/error.hpp"

namespace qsl {

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_cell(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return "";
}

nlohmann::json json_cell(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    }
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.notes) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.notes) notes[k] = v;
    doc["notes"] = notes;
    doc["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(1) << '\n';
}

ScatterResult run_scatter(const ShiftedSpectrum& spec, const std::vector<EigenbasisState>& states, double horizon,
                          double eps) {
    constexpr double kFloor = M_PI / 2.0 - 1e-8;
    ScatterResult out;
    out.records.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        ScatterRecord rec{static_cast<long long>(i), std::nullopt, std::nullopt, std::nullopt, states[i].coeffs};
        rec.tau = orthogonality_time(states[i], spec, horizon, eps);
        if (rec.tau) {
            rec.f_ml = f_ml(states[i], spec, *rec.tau).value;
            bool violated = *rec.f_ml < kFloor;
            try {
                rec.f_mt = f_mt(states[i], spec, *rec.tau).value;
                violated = violated || *rec.f_mt < kFloor;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NegativeRadicand) throw;
                violated = true;
            }
            if (violated) ++out.summary.n_violations;
            if (!out.summary.min_tau || *rec.tau < *out.summary.min_tau) out.summary.min_tau = rec.tau;
        } else {
            ++out.summary.n_absent;
        }
        out.records.push_back(std::move(rec));
    }
    out.summary.n_states = states.size();
    return out;
}

Table scatter_table(const ScatterResult& r, std::size_t dim) {
    Table t;
    t.columns = {"state_id", "tau", "f_ml", "f_mt"};
    for (std::size_t j = 0; j < dim; ++j) {
        t.columns.push_back("c_re_" + std::to_string(j));
        t.columns.push_back("c_im_" + std::to_string(j));
    }
    for (const auto& rec : r.records) {
        std::vector<Cell> row{rec.state_id, opt(rec.tau), opt(rec.f_ml), opt(rec.f_mt)};
        for (const auto& c : rec.coeffs) {
            row.emplace_back(c.real());
            row.emplace_back(c.imag());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace qsl
