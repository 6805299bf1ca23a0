#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "crn/model.hpp"

namespace crn::test {

/// Random network with unique identifiers, coefficients 1..3 and rates that
/// exercise the float formatter (small, large, zero, many digits).
inline ReactionNetwork random_network(std::mt19937_64& gen, std::size_t max_species = 6,
                                      std::size_t max_reactions = 8) {
  std::uniform_int_distribution<std::size_t> n_species(1, max_species);
  std::uniform_int_distribution<std::size_t> n_reactions(1, max_reactions);
  std::uniform_int_distribution<int> coeff(1, 3);
  std::uniform_int_distribution<int> amount(0, 500);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ReactionNetwork net;
  const std::size_t m = n_species(gen);
  for (std::size_t i = 0; i < m; ++i) net.species.push_back({"X" + std::to_string(i), double(amount(gen))});
  const std::size_t n = n_reactions(gen);
  for (std::size_t j = 0; j < n; ++j) {
    Reaction r;
    r.name = "r_" + std::to_string(j);
    for (auto* side : {&r.reactants, &r.products}) {
      std::vector<std::size_t> idx(m);
      for (std::size_t i = 0; i < m; ++i) idx[i] = i;
      std::shuffle(idx.begin(), idx.end(), gen);
      const std::size_t terms = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(m, 3))(gen);
      for (std::size_t t = 0; t < terms; ++t) side->push_back({idx[t], coeff(gen)});
    }
    const double u = unit(gen);
    r.rate_constant = u < 0.1 ? 0.0 : std::pow(10.0, -6.0 + 7.0 * unit(gen)) * (1.0 + u);
    net.reactions.push_back(std::move(r));
  }
  return net;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 gen(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("crn_test_" + tag + "_" + std::to_string(gen() % 1000000007));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

/// Runs a shell command, capturing stdout.
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace crn::test
