#include "lhom/io/report.hpp"

#include <cmath>
#include <cstdio>

namespace lhom::io {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write(const json& v, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& item : v) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        write(item, indent, depth + 1, out);
      }
      out += nl;
      out += close_pad + "]";
      return;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + json(key).dump() + (indent > 0 ? ": " : ":");
        write(item, indent, depth + 1, out);
      }
      out += nl;
      out += close_pad + "}";
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string dump_json(const json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  out += "\n";
  return out;
}

json to_json(const SampleChecks& c) {
  return {{"checked", c.checked},
          {"max_weak_form_defect", c.max_weak_form_defect},
          {"bounds_checked", c.bounds_checked},
          {"bound_violations", c.bound_violations},
          {"max_residual", c.max_residual}};
}

json to_json(const MomentReport& r) {
  return {{"p", r.p},
          {"L", r.L},
          {"d", r.d},
          {"n_samples", r.n_samples},
          {"xi", r.xi},
          {"estimate", r.estimate},
          {"estimate_se", r.estimate_se},
          {"F2", r.F2},
          {"F2_se", r.F2_se},
          {"ratio", r.ratio},
          {"ratio_se", r.ratio_se},
          {"checks", to_json(r.checks)}};
}

json to_json(const VarianceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"L", row.L},
                    {"n_samples", row.n_samples},
                    {"mean", row.mean},
                    {"variance", row.variance},
                    {"variance_se", row.variance_se}});
  }
  return {{"d", r.d},
          {"e0", r.e0},
          {"e1", r.e1},
          {"rows", rows},
          {"slope", optional_number(r.slope)},
          {"slope_se", optional_number(r.slope_se)},
          {"checks", to_json(r.checks)}};
}

json to_json(const SGPCheck& r) {
  return {{"p", r.p},
          {"q", r.q},
          {"central_moment", r.central_moment},
          {"osc_moment", r.osc_moment},
          {"ratio", optional_number(r.ratio)}};
}

json to_json(const SGReport& r) {
  json moments = json::array();
  for (const auto& m : r.osc_moments) moments.push_back({{"q", m.q}, {"value", m.value}});
  json j = {{"configurations", r.configurations},
            {"edges", r.edges},
            {"values_per_edge", r.values_per_edge},
            {"mean", r.mean},
            {"variance", r.variance},
            {"efron_stein", r.efron_stein},
            {"osc_moments", moments}};
  if (r.p_check) j["p_check"] = to_json(*r.p_check);
  return j;
}

json to_json(const DecayReport& r) {
  return {{"rho0", r.rho0},          {"n_max", r.n_max},         {"radii", r.radii},
          {"energies", r.energies},  {"ratios", r.ratios},       {"max_ratio", r.max_ratio},
          {"alpha_bar", r.alpha_bar}};
}

json to_json(const MixedBoundsReport& r) {
  return {{"bound", r.bound},
          {"max_column_sum", r.max_column_sum},
          {"max_row_sum", r.max_row_sum},
          {"argmax_column", r.argmax_column},
          {"argmax_row", r.argmax_row},
          {"symmetry_defect", r.symmetry_defect},
          {"energy_identity_defect", r.energy_identity_defect},
          {"min_diagonal", r.min_diagonal},
          {"max_diagonal", r.max_diagonal},
          {"column_bound_holds", r.column_bound_holds},
          {"row_bound_holds", r.row_bound_holds}};
}

json to_json(const HomogenizedMatrix& h) {
  json rows = json::array();
  for (Index i = 0; i < h.A.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < h.A.cols(); ++j) row.push_back(h.A(i, j));
    rows.push_back(row);
  }
  return {{"A_hom", rows}, {"residual", h.residual}};
}

json to_json(const StationarityTable& t) {
  return {{"n_samples", t.n_samples},
          {"max_discrepancy", t.max_discrepancy},
          {"worst_pair", {t.worst_first, t.worst_second}},
          {"violation", t.violation}};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw SizeError("CsvTable: row width differs from header");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double v = row[i];
      const bool integral = std::isfinite(v) && v == std::round(v) && std::abs(v) < 1e15;
      out += (i ? "," : "") + (integral ? std::to_string(static_cast<long long>(v))
                                        : (std::isfinite(v) ? format_double(v) : "nan"));
    }
    out += "\n";
  }
  return out;
}

CsvTable to_csv(const VarianceReport& r) {
  CsvTable t({"L", "n_samples", "mean", "variance", "variance_se"});
  for (const auto& row : r.rows) {
    t.add_row({double(row.L), double(row.n_samples), row.mean, row.variance, row.variance_se});
  }
  return t;
}

CsvTable to_csv(const SGReport& r) {
  CsvTable t({"q", "osc_moment"});
  for (const auto& m : r.osc_moments) t.add_row({m.q, m.value});
  return t;
}

CsvTable to_csv(const DecayReport& r) {
  CsvTable t({"n", "radius", "energy", "ratio_to_next"});
  for (std::size_t n = 0; n < r.energies.size(); ++n) {
    t.add_row({double(n), r.radii[n], r.energies[n],
               n < r.ratios.size() ? r.ratios[n] : std::nan("")});
  }
  return t;
}

}  // namespace lhom::io
