#include "crn/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace crn {

int Reaction::order() const {
  int total = 0;
  for (const auto& term : reactants) total += term.coefficient;
  return total;
}

std::optional<std::size_t> ReactionNetwork::find_species(std::string_view name) const {
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (species[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ReactionNetwork::find_reaction(std::string_view name) const {
  for (std::size_t i = 0; i < reactions.size(); ++i) {
    if (reactions[i].name == name) return i;
  }
  return std::nullopt;
}

double ReactionNetwork::total_initial_amount() const {
  double total = 0.0;
  for (const auto& s : species) total += s.initial_amount;
  return total;
}

std::vector<double> ReactionNetwork::initial_state() const {
  std::vector<double> state;
  state.reserve(species.size());
  for (const auto& s : species) state.push_back(s.initial_amount);
  return state;
}

StoichiometryMatrix::StoichiometryMatrix(std::vector<std::string> row_labels,
                                         std::vector<std::string> col_labels)
    : row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      entries_(row_labels_.size() * col_labels_.size(), 0) {}

std::vector<std::int64_t> StoichiometryMatrix::column(std::size_t col) const {
  std::vector<std::int64_t> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, col);
  return out;
}

std::string StoichiometryMatrix::to_csv() const {
  std::string out = "species";
  for (const auto& c : col_labels_) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < rows(); ++r) {
    out += row_labels_[r];
    for (std::size_t c = 0; c < cols(); ++c) out += "," + std::to_string(at(r, c));
    out += "\n";
  }
  return out;
}

std::string_view to_string(PropensityMode mode) {
  switch (mode) {
    case PropensityMode::PaperPowerLaw:
      return "power-law";
    case PropensityMode::Combinatorial:
      return "combinatorial";
  }
  return "power-law";
}

std::optional<PropensityMode> propensity_mode_from_string(std::string_view text) {
  if (text == "power-law") return PropensityMode::PaperPowerLaw;
  if (text == "combinatorial") return PropensityMode::Combinatorial;
  return std::nullopt;
}

StoichiometryMatrix build_stoichiometry(const ReactionNetwork& network) {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  for (const auto& s : network.species) rows.push_back(s.name);
  for (const auto& r : network.reactions) cols.push_back(r.name);
  StoichiometryMatrix matrix(std::move(rows), std::move(cols));
  for (std::size_t j = 0; j < network.reactions.size(); ++j) {
    const auto& reaction = network.reactions[j];
    for (const auto& term : reaction.reactants) matrix.at(term.species, j) -= term.coefficient;
    for (const auto& term : reaction.products) matrix.at(term.species, j) += term.coefficient;
  }
  return matrix;
}

double reaction_rate(const ReactionNetwork& network, std::size_t reaction_index,
                     std::span<const std::int64_t> state, PropensityMode mode) {
  const auto& reaction = network.reactions[reaction_index];
  double rate = reaction.rate_constant;
  for (const auto& term : reaction.reactants) {
    const std::int64_t count = state[term.species];
    if (count < term.coefficient) return 0.0;
    const double x = static_cast<double>(count);
    if (mode == PropensityMode::PaperPowerLaw) {
      for (int p = 0; p < term.coefficient; ++p) rate *= x;
    } else {
      double falling = 1.0;
      double factorial = 1.0;
      for (int p = 0; p < term.coefficient; ++p) {
        falling *= x - p;
        factorial *= p + 1;
      }
      rate *= falling / factorial;
    }
  }
  return rate;
}

double mass_action_rate(const Reaction& reaction, std::span<const double> state) {
  double rate = reaction.rate_constant;
  for (const auto& term : reaction.reactants) {
    const double x = state[term.species];
    for (int p = 0; p < term.coefficient; ++p) rate *= x;
  }
  return rate;
}

double effective_rate(const Reaction& reaction, double scale) {
  return reaction.rate_constant * std::pow(std::max(scale, 1.0), reaction.order() - 1);
}

std::vector<std::vector<std::int64_t>> conservation_vectors(const StoichiometryMatrix& matrix) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;

  // Null space of S^T (reactions x species) via reduced row echelon form.
  const std::size_t n_rows = matrix.cols();
  const std::size_t n_cols = matrix.rows();
  std::vector<std::vector<cpp_rational>> a(n_rows, std::vector<cpp_rational>(n_cols));
  for (std::size_t r = 0; r < n_rows; ++r)
    for (std::size_t c = 0; c < n_cols; ++c) a[r][c] = matrix.at(c, r);

  std::vector<std::size_t> pivot_cols;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < n_cols && pivot_row < n_rows; ++c) {
    std::size_t sel = pivot_row;
    while (sel < n_rows && a[sel][c] == 0) ++sel;
    if (sel == n_rows) continue;
    std::swap(a[sel], a[pivot_row]);
    const cpp_rational pivot = a[pivot_row][c];
    for (auto& v : a[pivot_row]) v /= pivot;
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (r == pivot_row || a[r][c] == 0) continue;
      const cpp_rational factor = a[r][c];
      for (std::size_t k = 0; k < n_cols; ++k) a[r][k] -= factor * a[pivot_row][k];
    }
    pivot_cols.push_back(c);
    ++pivot_row;
  }

  std::vector<bool> is_pivot(n_cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t free = 0; free < n_cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<cpp_rational> v(n_cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a[i][free];

    cpp_int lcm = 1;
    for (const auto& x : v) {
      const cpp_int d = boost::multiprecision::denominator(x);
      lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    std::vector<cpp_int> ints;
    cpp_int g = 0;
    for (const auto& x : v) {
      cpp_int value = boost::multiprecision::numerator(x) * (lcm / boost::multiprecision::denominator(x));
      g = boost::multiprecision::gcd(g, value);
      ints.push_back(value);
    }
    // Prefer a sign with a positive first nonzero entry.
    auto first = std::find_if(ints.begin(), ints.end(), [](const cpp_int& x) { return x != 0; });
    if (first != ints.end() && *first < 0) g = -g;
    std::vector<std::int64_t> out;
    out.reserve(ints.size());
    for (const auto& x : ints) out.push_back(static_cast<std::int64_t>(x / g));
    basis.push_back(std::move(out));
  }
  return basis;
}

}  // namespace crn
