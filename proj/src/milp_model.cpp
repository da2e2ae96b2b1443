#include <algorithm>
#include <cmath>
#include <ostream>

#include "roster/milp.hpp"

namespace roster {

int MilpModel::add_column(double lower, double upper, double c, bool is_integral, std::string name) {
  cost.push_back(c);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  integral.push_back(is_integral ? 1 : 0);
  col_names.push_back(std::move(name));
  return num_cols() - 1;
}

int MilpModel::add_row(std::span<const int> index, std::span<const double> value, double lower,
                       double upper, std::string name) {
  row_index.insert(row_index.end(), index.begin(), index.end());
  row_value.insert(row_value.end(), value.begin(), value.end());
  row_start.push_back(static_cast<int>(row_index.size()));
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  row_names.push_back(std::move(name));
  return num_rows() - 1;
}

int MilpModel::add_row(std::initializer_list<std::pair<int, double>> terms, double lower, double upper,
                       std::string name) {
  for (const auto& [j, a] : terms) {
    row_index.push_back(j);
    row_value.push_back(a);
  }
  row_start.push_back(static_cast<int>(row_index.size()));
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  row_names.push_back(std::move(name));
  return num_rows() - 1;
}

ModelStats MilpModel::stats() const {
  ModelStats s;
  for (auto flag : integral) (flag ? s.integer : s.continuous) += 1;
  s.rows = num_rows();
  s.nonzeros = nonzeros();
  return s;
}

double MilpModel::objective_value(std::span<const double> x) const {
  double v = cost_offset;
  for (int j = 0; j < num_cols(); ++j) v += cost[j] * x[j];
  return v;
}

double MilpModel::row_activity(int r, std::span<const double> x) const {
  double a = 0.0;
  for (int p = row_start[r]; p < row_start[r + 1]; ++p) a += row_value[p] * x[row_index[p]];
  return a;
}

double MilpModel::max_violation(std::span<const double> x, bool check_integrality) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max({worst, col_lower[j] - x[j], x[j] - col_upper[j]});
    if (check_integrality && integral[j]) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  }
  for (int r = 0; r < num_rows(); ++r) {
    const double a = row_activity(r, x);
    worst = std::max({worst, row_lower[r] - a, a - row_upper[r]});
  }
  return worst;
}

std::vector<std::string> MilpModel::validate() const {
  std::vector<std::string> issues;
  for (int j = 0; j < num_cols(); ++j) {
    if (col_lower[j] > col_upper[j]) issues.push_back("column " + col_names[j] + " has lower > upper");
    if (integral[j] && (!std::isfinite(col_lower[j]) || !std::isfinite(col_upper[j]))) {
      issues.push_back("integral column " + col_names[j] + " has an infinite bound");
    }
  }
  for (int r = 0; r < num_rows(); ++r) {
    if (row_lower[r] > row_upper[r]) issues.push_back("row " + row_names[r] + " has lower > upper");
    for (int p = row_start[r]; p < row_start[r + 1]; ++p) {
      if (row_index[p] < 0 || row_index[p] >= num_cols()) {
        issues.push_back("row " + row_names[r] + " references an unknown column");
        break;
      }
    }
  }
  return issues;
}

int VariableMap::num_vars() const {
  int total = 0;
  for (const VarRange* r : ranges()) total = std::max(total, r->end);
  return total;
}

std::vector<const VarRange*> VariableMap::ranges() const {
  return {&assignment,  &free_block,     &rest_window,    &workload_dev,   &workload_max,   &weekend_dev,
          &weekend_max, &preference_dev, &pattern_choice, &pattern_slack, &variant_balance};
}

const VarRange* VariableMap::range(std::string_view name) const {
  for (const VarRange* r : ranges()) {
    if (r->name == name) return r;
  }
  return nullptr;
}

std::optional<std::array<int, 3>> VariableMap::decode(int column) const {
  if (!assignment.contains(column)) return std::nullopt;
  const int offset = column - assignment.begin;
  const int k = offset % shift_types;
  const int j = (offset / shift_types) % blocks;
  const int e = offset / (shift_types * blocks);
  return std::array<int, 3>{e, j, k};
}

namespace {

std::string lp_name(const std::string& raw, char prefix, int index) {
  return raw.empty() ? std::string(1, prefix) + std::to_string(index) : raw;
}

void write_term(std::ostream& out, double coef, const std::string& name, bool first) {
  if (coef < 0) {
    out << " - ";
  } else if (!first) {
    out << " + ";
  } else {
    out << " ";
  }
  const double mag = std::abs(coef);
  if (mag != 1.0) out << mag << ' ';
  out << name;
}

}  // namespace

void write_lp_format(const MilpModel& model, std::ostream& out) {
  out.precision(15);
  std::vector<std::string> names(static_cast<std::size_t>(model.num_cols()));
  for (int j = 0; j < model.num_cols(); ++j) names[j] = lp_name(model.col_names[j], 'c', j);

  out << "\\ roster model: " << model.num_cols() << " columns, " << model.num_rows() << " rows\n";
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.cost[j] == 0.0) continue;
    write_term(out, model.cost[j], names[j], first);
    first = false;
  }
  if (model.cost_offset != 0.0 || first) {
    out << (model.cost_offset < 0 ? " - " : " + ") << std::abs(model.cost_offset) << " constant";
  }
  out << "\nSubject To\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const std::string base = lp_name(model.row_names[r], 'r', r);
    auto emit = [&](const std::string& label, const char* sense, double rhs) {
      out << ' ' << label << ':';
      bool lead = true;
      for (int p = model.row_start[r]; p < model.row_start[r + 1]; ++p) {
        write_term(out, model.row_value[p], names[model.row_index[p]], lead);
        lead = false;
      }
      if (lead) out << " 0 constant";
      out << ' ' << sense << ' ' << rhs << '\n';
    };
    const double lo = model.row_lower[r];
    const double hi = model.row_upper[r];
    if (lo == hi) {
      emit(base, "=", lo);
    } else {
      if (std::isfinite(lo)) emit(std::isfinite(hi) ? base + "_lo" : base, ">=", lo);
      if (std::isfinite(hi)) emit(std::isfinite(lo) ? base + "_hi" : base, "<=", hi);
    }
  }
  out << "Bounds\n";
  if (model.cost_offset != 0.0) out << " constant = 1\n";
  for (int j = 0; j < model.num_cols(); ++j) {
    const double lo = model.col_lower[j];
    const double hi = model.col_upper[j];
    if (lo == hi) {
      out << ' ' << names[j] << " = " << lo << '\n';
    } else if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << ' ' << names[j] << " free\n";
    } else {
      out << ' ' << (std::isfinite(lo) ? std::to_string(lo) : std::string("-inf")) << " <= " << names[j]
          << " <= " << (std::isfinite(hi) ? std::to_string(hi) : std::string("+inf")) << '\n';
    }
  }
  bool any_integral = false;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (!model.integral[j]) continue;
    if (!any_integral) out << "General\n";
    any_integral = true;
    out << ' ' << names[j] << '\n';
  }
  out << "End\n";
}

}  // namespace roster
