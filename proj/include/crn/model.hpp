#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

struct Species {
  std::string name;
  double initial_amount = 0.0;

  bool operator==(const Species&) const = default;
};

/// One side-entry of a reaction: `coefficient` copies of species `species`.
struct ReactionTerm {
  std::size_t species = 0;
  int coefficient = 1;

  bool operator==(const ReactionTerm&) const = default;
};

struct Reaction {
  std::string name;
  std::vector<ReactionTerm> reactants;
  std::vector<ReactionTerm> products;
  double rate_constant = 0.0;

  /// Sum of reactant coefficients.
  int order() const;

  bool operator==(const Reaction&) const = default;
};

/// The canonical in-memory model every input path converges to.
struct ReactionNetwork {
  std::vector<Species> species;
  std::vector<Reaction> reactions;

  std::optional<std::size_t> find_species(std::string_view name) const;
  std::optional<std::size_t> find_reaction(std::string_view name) const;

  /// Sum of all initial amounts.
  double total_initial_amount() const;

  std::vector<double> initial_state() const;

  bool operator==(const ReactionNetwork&) const = default;
};

/// Integer net-change matrix, species rows by reaction columns.
class StoichiometryMatrix {
 public:
  StoichiometryMatrix() = default;
  StoichiometryMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels);

  std::size_t rows() const noexcept { return row_labels_.size(); }
  std::size_t cols() const noexcept { return col_labels_.size(); }

  std::int64_t& at(std::size_t row, std::size_t col) { return entries_[row * cols() + col]; }
  std::int64_t at(std::size_t row, std::size_t col) const { return entries_[row * cols() + col]; }

  std::vector<std::int64_t> column(std::size_t col) const;

  const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

  /// CSV with a `species` corner cell, reaction names across and species down.
  std::string to_csv() const;

  bool operator==(const StoichiometryMatrix&) const = default;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<std::int64_t> entries_;
};

enum class PropensityMode {
  /// k * prod X^a, forced to 0 when a reactant count is below its coefficient.
  PaperPowerLaw,
  /// k * prod X(X-1)...(X-a+1)/a!
  Combinatorial,
};

std::string_view to_string(PropensityMode mode);
std::optional<PropensityMode> propensity_mode_from_string(std::string_view text);

StoichiometryMatrix build_stoichiometry(const ReactionNetwork& network);

/// Stochastic rate of one reaction at a population state.
double reaction_rate(const ReactionNetwork& network, std::size_t reaction_index,
                     std::span<const std::int64_t> state, PropensityMode mode);

/// Deterministic mass-action rate k * prod X^a on a continuous state, without a guard.
double mass_action_rate(const Reaction& reaction, std::span<const double> state);

/// Integer basis of the left null space: every v with v^T S = 0 is a rational combination of the result.
std::vector<std::vector<std::int64_t>> conservation_vectors(const StoichiometryMatrix& matrix);

/// Pseudo-first-order rate k * scale^(order-1), with scale = max(total initial amount, 1).
/// Shared by the ensemble auto-configuration and the ODE default step.
double effective_rate(const Reaction& reaction, double scale);

}  // namespace crn
