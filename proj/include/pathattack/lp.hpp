#pragma once

// Relaxed cut LP over a generated path set:
//
//   minimize    sum_e c_e x_e
//   subject to  sum_{e in p} x_e >= 1     for every constraint path p
//               0 <= x_e <= 1
//
// solved exactly (up to floating point) by a dense bounded-variable primal
// simplex with Bland's rule.

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <string>
#include <vector>

#include "pathattack/graph.hpp"

namespace pathattack {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kIntegralityTolerance = 1e-6;

/// One column per cuttable edge that appears in some constraint row (edges
/// of p* never get a column). Each row lists column indices.
struct RelaxedCutLP {
  std::vector<EdgeKey> columns;
  std::vector<double> costs;
  std::vector<std::vector<int>> rows;

  int add_column(const EdgeKey& e, double cost) {
    columns.push_back(e);
    costs.push_back(cost);
    return static_cast<int>(columns.size()) - 1;
  }
};

enum class LPStatus { kOptimal, kInfeasible };

struct LPSolution {
  std::vector<double> values;
  double objective_value = 0.0;
  LPStatus status = LPStatus::kOptimal;
  int pivots = 0;
};

/// Builds the relaxed LP for path set `paths` against protected path
/// `p_star`. Costs are read from `g`. Throws InputError if some path has no
/// edge off p*.
inline RelaxedCutLP build_relaxed_lp(const Graph& g, const Path& p_star,
                                     const std::vector<Path>& paths) {
  const EdgeSet protected_edges = p_star.edge_set();
  RelaxedCutLP lp;
  std::unordered_map<EdgeKey, int, EdgeKeyHash> column_of;
  for (const auto& p : paths) {
    std::vector<int> row;
    for (const auto& e : p.edges()) {
      if (protected_edges.contains(e)) continue;
      auto [it, fresh] = column_of.try_emplace(e, 0);
      if (fresh) it->second = lp.add_column(e, g.cost(e));
      row.push_back(it->second);
    }
    if (row.empty()) {
      throw InputError("constraint path lies entirely on the protected path");
    }
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

namespace detail {

// Dense tableau for  A x - s = 1,  0 <= x <= 1,  s >= 0.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const RelaxedCutLP& lp)
      : m_(static_cast<int>(lp.rows.size())),
        n_(static_cast<int>(lp.columns.size())),
        width_(n_ + m_),
        tableau_(static_cast<std::size_t>(m_) * width_, 0.0),
        cost_(width_, 0.0),
        upper_(width_, std::numeric_limits<double>::infinity()),
        value_(width_, 0.0),
        basic_row_(width_, -1),
        basis_(m_) {
    for (int j = 0; j < n_; ++j) {
      cost_[j] = lp.costs[j];
      upper_[j] = 1.0;
      value_[j] = 1.0;  // start every structural column at its upper bound
    }
    // With x = 1 the surplus s_i = |row_i| - 1 >= 0 is a feasible basis.
    // Basis matrix is -I, so the tableau row is -(A_i, -e_i) = (-A_i, e_i).
    for (int i = 0; i < m_; ++i) {
      for (int j : lp.rows[i]) at(i, j) -= 1.0;
      at(i, n_ + i) = 1.0;
      const int slack = n_ + i;
      basis_[i] = slack;
      basic_row_[slack] = i;
      value_[slack] = static_cast<double>(lp.rows[i].size()) - 1.0;
    }
  }

  int solve() {
    int pivots = 0;
    std::vector<double> reduced(width_);
    for (;;) {
      // Reduced costs d_j = c_j - c_B^T T_j.
      for (int j = 0; j < width_; ++j) reduced[j] = cost_[j];
      for (int i = 0; i < m_; ++i) {
        const double cb = cost_[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &tableau_[static_cast<std::size_t>(i) * width_];
        for (int j = 0; j < width_; ++j) reduced[j] -= cb * row[j];
      }

      // Bland: lowest-index improving nonbasic column.
      int entering = -1;
      double direction = 0.0;
      for (int j = 0; j < width_; ++j) {
        if (basic_row_[j] >= 0) continue;
        const bool at_upper = value_[j] > 0.0 && value_[j] == upper_[j];
        if (!at_upper && reduced[j] < -kFeasibilityTolerance) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (at_upper && reduced[j] > kFeasibilityTolerance) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return pivots;

      // Ratio test. Basic x_B moves by -direction * T_col * theta.
      double theta = upper_[entering];  // bound flip of the entering column
      int leaving_row = -1;
      bool leaving_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double rate = -direction * at(i, entering);
        if (std::fabs(rate) <= kFeasibilityTolerance) continue;
        const int b = basis_[i];
        double limit;
        bool to_upper;
        if (rate < 0.0) {
          limit = value_[b] / -rate;
          to_upper = false;
        } else {
          if (!std::isfinite(upper_[b])) continue;
          limit = (upper_[b] - value_[b]) / rate;
          to_upper = true;
        }
        limit = std::max(limit, 0.0);
        if (limit < theta - kFeasibilityTolerance ||
            (leaving_row >= 0 && std::fabs(limit - theta) <= kFeasibilityTolerance &&
             b < basis_[leaving_row])) {
          theta = limit;
          leaving_row = i;
          leaving_to_upper = to_upper;
        }
      }

      if (!std::isfinite(theta)) {
        throw std::logic_error("relaxed cut LP reported unbounded");
      }

      // Move along the edge.
      value_[entering] += direction * theta;
      for (int i = 0; i < m_; ++i) {
        value_[basis_[i]] -= direction * at(i, entering) * theta;
      }
      if (leaving_row < 0) {
        // Bound flip; basis unchanged.
        value_[entering] = direction > 0 ? upper_[entering] : 0.0;
        ++pivots;
        continue;
      }
      const int leaving = basis_[leaving_row];
      value_[leaving] = leaving_to_upper ? upper_[leaving] : 0.0;
      pivot(leaving_row, entering);
      ++pivots;
    }
  }

  std::vector<double> structural_values() const {
    std::vector<double> out(value_.begin(), value_.begin() + n_);
    for (auto& v : out) {
      if (std::fabs(v) <= kFeasibilityTolerance) v = 0.0;
      if (std::fabs(v - 1.0) <= kFeasibilityTolerance) v = 1.0;
    }
    return out;
  }

 private:
  double& at(int i, int j) {
    return tableau_[static_cast<std::size_t>(i) * width_ + j];
  }
  double at(int i, int j) const {
    return tableau_[static_cast<std::size_t>(i) * width_ + j];
  }

  void pivot(int r, int entering) {
    const int leaving = basis_[r];
    double* prow = &tableau_[static_cast<std::size_t>(r) * width_];
    const double inv = 1.0 / prow[entering];
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    prow[entering] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tableau_[static_cast<std::size_t>(i) * width_];
      const double factor = row[entering];
      if (factor == 0.0) continue;
      for (int j = 0; j < width_; ++j) row[j] -= factor * prow[j];
      row[entering] = 0.0;
    }
    basic_row_[leaving] = -1;
    basic_row_[entering] = r;
    basis_[r] = entering;
  }

  int m_;
  int n_;
  int width_;
  std::vector<double> tableau_;
  std::vector<double> cost_;
  std::vector<double> upper_;
  std::vector<double> value_;
  std::vector<int> basic_row_;
  std::vector<int> basis_;
};

}  // namespace detail

/// Optimal basic solution of the relaxed cut LP, or kInfeasible when some
/// row is empty.
inline LPSolution solve_relaxed(const RelaxedCutLP& lp) {
  LPSolution sol;
  for (const auto& row : lp.rows) {
    if (row.empty()) {
      sol.status = LPStatus::kInfeasible;
      return sol;
    }
  }
  if (lp.rows.empty()) {
    sol.values.assign(lp.columns.size(), 0.0);
    return sol;
  }
  detail::BoundedSimplex simplex(lp);
  sol.pivots = simplex.solve();
  sol.values = simplex.structural_values();
  for (std::size_t j = 0; j < sol.values.size(); ++j) {
    sol.objective_value += lp.costs[j] * sol.values[j];
  }
  return sol;
}

/// True iff every value lies within `tol` of 0 or 1.
inline bool is_integral(const LPSolution& sol,
                        double tol = kIntegralityTolerance) {
  for (double v : sol.values) {
    if (std::fabs(v) > tol && std::fabs(v - 1.0) > tol) return false;
  }
  return true;
}

/// Largest shortfall of any row below 1 (0 when every row is satisfied).
inline double max_row_violation(const RelaxedCutLP& lp,
                                const std::vector<double>& values) {
  double worst = 0.0;
  for (const auto& row : lp.rows) {
    double sum = 0.0;
    for (int j : row) sum += values[j];
    worst = std::max(worst, 1.0 - sum);
  }
  return worst;
}

/// Writes `lp` in CPLEX LP text format (see README for the exact subset).
/// Column j is named x<j>; row i is named p<i>.
inline void write_lp_text(std::ostream& out, const RelaxedCutLP& lp) {
  std::ostringstream num;
  num.precision(17);
  auto fmt = [&num](double v) {
    num.str("");
    num << v;
    return num.str();
  };
  out << "\\ relaxed cut LP: " << lp.columns.size() << " columns, "
      << lp.rows.size() << " rows\n";
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    out << "\\ x" << j << " = edge " << lp.columns[j].u << " "
        << lp.columns[j].v << "\n";
  }
  out << "Minimize\n obj:";
  if (lp.columns.empty()) out << " 0 x0";
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    out << (j == 0 ? " " : " + ") << fmt(lp.costs[j]) << " x" << j;
  }
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    out << " p" << i << ":";
    for (std::size_t k = 0; k < lp.rows[i].size(); ++k) {
      out << (k == 0 ? " " : " + ") << "x" << lp.rows[i][k];
    }
    out << " >= 1\n";
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    out << " 0 <= x" << j << " <= 1\n";
  }
  out << "End\n";
}

}  // namespace pathattack
