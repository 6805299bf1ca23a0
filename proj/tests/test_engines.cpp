#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

#include "crn/dsl.hpp"
#include "crn/errors.hpp"
#include "crn/fixtures.hpp"
#include "crn/ode.hpp"
#include "crn/rng.hpp"
#include "crn/ssa.hpp"
#include "crn/validator.hpp"
#include "support.hpp"

using namespace crn;

namespace {

SimConfig record_all(double t_end, std::uint64_t seed) {
  SimConfig c;
  c.t_end = t_end;
  c.seed = seed;
  c.record = RecordAll{};
  return c;
}

ReactionNetwork pure_death(double k, double n) {
  ReactionNetwork net;
  net.species = {{"A", n}};
  net.reactions = {{"death", {{0, 1}}, {}, k}};
  return net;
}

double dot(std::span<const double> x, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

// Network of the worked four-species example: 2A->A2, A+A2->A3, A+A3->A4, A2->A4.
ReactionNetwork four_species(double k1, double k2, double k3, double k4) {
  return parse_dsl("species A = 0\nspecies A2 = 0\nspecies A3 = 0\nspecies A4 = 0\n"
                   "r1: 2 A -> A2 ; k = " + std::to_string(k1) + "\n" +
                   "r2: A + A2 -> A3 ; k = " + std::to_string(k2) + "\n" +
                   "r3: A + A3 -> A4 ; k = " + std::to_string(k3) + "\n" +
                   "r4: A2 -> A4 ; k = " + std::to_string(k4) + "\n");
}

}  // namespace

// ---------------------------------------------------------------- SSA

TEST(Ssa, AllZeroRatesExhaustImmediately) {
  const auto net = parse_dsl("species A = 5\nspecies B = 0\nr: A -> B ; k = 0\n");
  const auto traj = simulate_ssa(net, record_all(10, 1));
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj.times[0], 0.0);
  EXPECT_EQ(traj.terminated_by, Termination::Exhausted);
}

TEST(Ssa, MonoChainKeepsTotal) {
  const auto net = load_fixture("mono_chain");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto traj = simulate_ssa(net, record_all(200, seed));
    for (std::size_t i = 0; i < traj.size(); ++i) ASSERT_EQ(dot(traj.state(i), {1, 1, 1, 1}), 100.0);
  }
}

TEST(Ssa, EnzymeConservationAtEveryEvent) {
  const auto net = load_fixture("enzyme");  // E, S, ES, P
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto traj = simulate_ssa(net, record_all(500, seed));
    EXPECT_GT(traj.size(), 100u);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      ASSERT_EQ(dot(traj.state(i), {1, 0, 1, 0}), 100.0);
      ASSERT_EQ(dot(traj.state(i), {0, 1, 1, 1}), 100.0);
    }
  }
}

TEST(Ssa, EveryEventAddsOneStoichiometryColumn) {
  std::mt19937_64 gen(8);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto net = test::random_network(gen, 4, 5);
    for (auto& s : net.species) s.initial_amount = std::floor(s.initial_amount / 10);
    if (!validate(net).is_admissible) continue;
    const auto s = build_stoichiometry(net);
    for (auto mode : {PropensityMode::PaperPowerLaw, PropensityMode::Combinatorial}) {
      SimConfig c = record_all(5, trial);
      c.mode = mode;
      c.max_steps = 2000;
      const auto traj = simulate_ssa(net, c);
      for (std::size_t i = 1; i < traj.size(); ++i) {
        ASSERT_GT(traj.times[i], traj.times[i - 1]);
        bool matched = false;
        for (std::size_t j = 0; j < s.cols() && !matched; ++j) {
          bool same = true;
          for (std::size_t r = 0; r < s.rows(); ++r)
            same = same && traj.state(i)[r] - traj.state(i - 1)[r] == double(s.at(r, j));
          matched = same;
        }
        ASSERT_TRUE(matched) << "event " << i;
        for (double v : traj.state(i)) ASSERT_GE(v, 0.0);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Ssa, SameSeedSameTrajectory) {
  const auto net = load_fixture("ding2024");
  const auto a = simulate_ssa(net, record_all(50, 77));
  const auto b = simulate_ssa(net, record_all(50, 77));
  const auto c = simulate_ssa(net, record_all(50, 78));
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.to_csv(), c.to_csv());
}

TEST(Ssa, PureDeathMeanMatchesBinomialOracle) {
  // A(t) ~ Binomial(n, e^{-kt}); mean n p, variance n p (1 - p).
  const double k = 0.7, n = 60, t = 1.3;
  const int runs = 4000;
  const auto net = pure_death(k, n);
  SimConfig c;
  c.t_end = t;
  c.record = RecordOnGrid{{0.0, t}};
  double sum = 0;
  for (int r = 0; r < runs; ++r) {
    c.seed = replicate_seed(42, r);
    sum += simulate_ssa(net, c).state(1)[0];
  }
  const double p = std::exp(-k * t);
  const double mean = sum / runs;
  EXPECT_NEAR(mean, n * p, 4 * std::sqrt(n * p * (1 - p) / runs));
}

TEST(Ssa, StepCapStopsAtLimit) {
  SimConfig c = record_all(1e9, 3);
  c.max_steps = 5;
  const auto traj = simulate_ssa(load_fixture("mono_chain"), c);
  EXPECT_EQ(traj.terminated_by, Termination::StepCap);
  EXPECT_EQ(traj.steps, 5u);
  EXPECT_EQ(traj.size(), 6u);
}

TEST(Ssa, GuardBlocksDimerFromSingleMonomer) {
  const auto net = parse_dsl("species M1 = 1\nspecies M2 = 0\nr: 2 M1 -> M2 ; k = 100\n");
  for (auto mode : {PropensityMode::PaperPowerLaw, PropensityMode::Combinatorial}) {
    SimConfig c = record_all(1, 0);
    c.mode = mode;
    const auto traj = simulate_ssa(net, c);
    EXPECT_EQ(traj.terminated_by, Termination::Exhausted);
    EXPECT_EQ(traj.size(), 1u);
  }
}

TEST(Ssa, OnGridMatchesHeldEventTrajectory) {
  const auto net = load_fixture("enzyme");
  const auto full = simulate_ssa(net, record_all(40, 9));
  SimConfig c;
  c.t_end = 40;
  c.seed = 9;
  c.record = RecordOnGrid{uniform_grid(40, 81)};
  const auto grid = simulate_ssa(net, c);
  const auto held = sample_on_grid(full, grid.times);
  ASSERT_EQ(grid.size(), 81u);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_EQ(std::vector<double>(grid.state(i).begin(), grid.state(i).end()), held[i]) << i;
}

TEST(Ssa, DefaultGridHas200Points) {
  SimConfig c;
  c.t_end = 10;
  const auto traj = simulate_ssa(load_fixture("mono_chain"), c);
  EXPECT_EQ(traj.size(), kDefaultGridPoints);
  EXPECT_EQ(traj.times.back(), 10.0);
}

TEST(Ssa, MetadataNamesGenerator) {
  const SimConfig c = record_all(1, 5);
  const auto traj = simulate_ssa(load_fixture("mono_chain"), c);
  const auto doc = nlohmann::json::parse(ssa_metadata_json(c, traj));
  EXPECT_EQ(doc.at("seed"), 5);
  EXPECT_EQ(doc.at("generator"), std::string(kGeneratorId));
  EXPECT_EQ(doc.at("mode"), "power-law");
  EXPECT_EQ(doc.at("termination"), "t_end");
}

TEST(Ssa, TrajectoryCsvLayout) {
  SimConfig c;
  c.t_end = 1;
  c.record = RecordOnGrid{{0, 0.5, 1}};
  const auto csv = simulate_ssa(load_fixture("mono_chain"), c).to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,A,B,C_mono,D");
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 15), "0,100,0,0,0\n0.5");
}

// ---------------------------------------------------------------- sampling

TEST(SampleOnGrid, HoldSemantics) {
  Trajectory t;
  t.species = {"A"};
  t.t_end = 3;
  t.append(0, std::vector<double>{5});
  t.append(2, std::vector<double>{4});
  EXPECT_EQ(sample_on_grid(t, std::vector<double>{0}), (std::vector<std::vector<double>>{{5}}));
  EXPECT_EQ(sample_on_grid(t, std::vector<double>{1}), (std::vector<std::vector<double>>{{5}}));
  EXPECT_EQ(sample_on_grid(t, std::vector<double>{0, 2, 3}), (std::vector<std::vector<double>>{{5}, {4}, {4}}));
  EXPECT_THROW(sample_on_grid(t, std::vector<double>{3.5}), GridOutOfRangeError);
  EXPECT_THROW(sample_on_grid(t, std::vector<double>{-1}), GridOutOfRangeError);
}

TEST(SampleOnGrid, EventTimesReproduceStates) {
  const auto traj = simulate_ssa(load_fixture("ding2024"), record_all(20, 4));
  const auto held = sample_on_grid(traj, traj.times);
  for (std::size_t i = 0; i < traj.size(); ++i)
    EXPECT_EQ(held[i], std::vector<double>(traj.state(i).begin(), traj.state(i).end()));
}

// ---------------------------------------------------------------- ODE

TEST(OdeRhs, MonoChainInitialSlope) {
  const auto net = load_fixture("mono_chain");
  EXPECT_EQ(rhs(net, net.initial_state()), (std::vector<double>{-100, 100, 0, 0}));
}

TEST(OdeRhs, ZeroStateWithoutSources) {
  for (const char* name : {"mono_chain", "enzyme", "ding2024", "aggregation52"}) {
    const auto net = load_fixture(name);
    const auto d = rhs(net, std::vector<double>(net.species.size(), 0.0));
    for (double v : d) EXPECT_EQ(v, 0.0) << name;
  }
}

TEST(OdeRhs, FourSpeciesExample) {
  const double k1 = 0.3, k2 = 0.2, k3 = 0.7, k4 = 0.11;
  const auto net = four_species(k1, k2, k3, k4);
  const double A = 2.0, A2 = 3.0, A3 = 5.0, A4 = 7.0;
  const auto d = rhs(net, std::vector<double>{A, A2, A3, A4});
  EXPECT_DOUBLE_EQ(d[3], k3 * A3 * A + k4 * A2);
  EXPECT_DOUBLE_EQ(d[0], -2 * k1 * A * A - k2 * A2 * A - k3 * A3 * A);
  EXPECT_DOUBLE_EQ(d[1], k1 * A * A - k2 * A2 * A - k4 * A2);
  EXPECT_DOUBLE_EQ(d[2], k2 * A2 * A - k3 * A3 * A);
}

TEST(OdeRhs, MatchesNaiveLoopOnRandomNetworks) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unit(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = test::random_network(gen);
    std::vector<double> x(net.species.size());
    for (auto& v : x) v = unit(gen);
    std::vector<double> expected(x.size(), 0.0);
    for (const auto& r : net.reactions) {
      double rate = r.rate_constant;
      for (const auto& t : r.reactants) rate *= std::pow(x[t.species], t.coefficient);
      for (const auto& t : r.reactants) expected[t.species] -= t.coefficient * rate;
      for (const auto& t : r.products) expected[t.species] += t.coefficient * rate;
    }
    const auto d = rhs(net, x);
    for (std::size_t i = 0; i < x.size(); ++i)
      EXPECT_NEAR(d[i], expected[i], 1e-12 * (1 + std::abs(expected[i])));
  }
}

TEST(Ode, ExponentialDecay) {
  OdeConfig c;
  c.t_end = 1;
  c.dt = 1e-3;
  const auto traj = simulate_ode(pure_death(1.0, 100), c);
  EXPECT_EQ(traj.times.back(), 1.0);
  EXPECT_NEAR(traj.state(traj.size() - 1)[0], 36.788, 1e-3);
  EXPECT_NEAR(traj.state(traj.size() - 1)[0], 100 * std::exp(-1.0), 1e-9);
  for (std::size_t i = 0; i < traj.size(); ++i)
    EXPECT_NEAR(traj.state(i)[0], 100 * std::exp(-traj.times[i]), 1e-9);
}

TEST(Ode, FourthOrderConvergence) {
  std::vector<double> errors;
  const std::vector<double> steps = {1e-2, 5e-3, 2.5e-3};
  for (double dt : steps) {
    OdeConfig c;
    c.t_end = 1;
    c.dt = dt;
    c.grid = {0.0, 1.0};
    const auto traj = simulate_ode(pure_death(1.0, 100), c);
    errors.push_back(std::abs(traj.state(1)[0] - 100 * std::exp(-1.0)));
  }
  const double slope = (std::log(errors[0]) - std::log(errors[2])) / (std::log(steps[0]) - std::log(steps[2]));
  EXPECT_GE(slope, 3.5);
}

TEST(Ode, ZeroRatesGiveConstantTrajectory) {
  const auto net = parse_dsl("species A = 3\nspecies B = 4\nr: A -> B ; k = 0\n");
  OdeConfig c;
  c.t_end = 5;
  const auto traj = simulate_ode(net, c);
  for (std::size_t i = 0; i < traj.size(); ++i) EXPECT_EQ(traj.state(i)[0], 3.0);
}

TEST(Ode, EnzymeConservationAndLimit) {
  const auto net = load_fixture("enzyme");
  OdeConfig c;
  c.t_end = 3000;
  c.dt = 0.05;
  const auto traj = simulate_ode(net, c);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_NEAR(dot(traj.state(i), {1, 0, 1, 0}), 100.0, 1e-6 * 101);
    EXPECT_NEAR(dot(traj.state(i), {0, 1, 1, 1}), 100.0, 1e-6 * 101);
  }
  const auto last = traj.state(traj.size() - 1);
  EXPECT_GT(last[3], 99.0);
  EXPECT_GT(last[0], 99.0);
}

TEST(Ode, AdaptiveMatchesAnalytic) {
  OdeConfig c;
  c.t_end = 5;
  c.method = OdeMethod::AdaptiveDopri5;
  c.rel_tol = 1e-9;
  c.abs_tol = 1e-10;
  const auto traj = simulate_ode(pure_death(0.8, 100), c);
  for (std::size_t i = 0; i < traj.size(); ++i)
    EXPECT_NEAR(traj.state(i)[0], 100 * std::exp(-0.8 * traj.times[i]), 1e-6);
}

TEST(Ode, AdaptiveMatchesFixedOnOligomers) {
  const auto net = load_fixture("oligomers");
  OdeConfig fixed;
  fixed.t_end = 50;
  OdeConfig adaptive = fixed;
  adaptive.method = OdeMethod::AdaptiveDopri5;
  adaptive.rel_tol = 1e-9;
  adaptive.abs_tol = 1e-9;
  const auto a = simulate_ode(net, fixed);
  const auto b = simulate_ode(net, adaptive);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-5 * (1 + a.values[i]));
}

TEST(Ode, TooLargeStepIsInstability) {
  OdeConfig c;
  c.t_end = 10;
  c.dt = 0.1;
  EXPECT_THROW(simulate_ode(parse_dsl("species A = 100\nspecies B = 0\nd: 2 A -> B ; k = 1\n"), c),
               InstabilityError);
  // RK4 never undershoots on pure decay; an oversized step blows up instead.
  c.t_end = 1e4;
  c.dt = 5.0;
  EXPECT_THROW(simulate_ode(pure_death(1.0, 100), c), InstabilityError);
}

TEST(Ode, DefaultStepFollowsFastestEffectiveRate) {
  EXPECT_DOUBLE_EQ(default_ode_step(load_fixture("mono_chain")), 0.01);
  const auto agg = load_fixture("aggregation52");
  double mass = 0;
  for (const auto& s : agg.species) mass += s.initial_amount;
  double fastest = 0;
  for (const auto& r : agg.reactions) {
    int order = 0;
    for (const auto& t : r.reactants) order += t.coefficient;
    fastest = std::max(fastest, r.rate_constant * std::pow(mass, order - 1));
  }
  // Fourth-order k20 dominates: 3.5e-6 * 10007^3.
  EXPECT_NEAR(fastest, 3.5e-6 * std::pow(10007.0, 3), 1e-6 * fastest);
  EXPECT_DOUBLE_EQ(default_ode_step(agg), std::min(0.01, 0.1 / fastest));
}

TEST(Ode, AdmissibleRandomNetworksIntegrate) {
  std::mt19937_64 gen(31);
  int ran = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto net = test::random_network(gen, 4, 4);
    for (auto& r : net.reactions) r.rate_constant = std::min(r.rate_constant, 0.01);
    for (auto& s : net.species) s.initial_amount = std::floor(s.initial_amount / 50);
    if (!validate(net).is_admissible) continue;
    SimConfig sc;
    sc.t_end = 1;
    sc.max_steps = 100000;
    EXPECT_NO_THROW(simulate_ssa(net, sc));
    OdeConfig oc;
    oc.t_end = 1;
    oc.method = OdeMethod::AdaptiveDopri5;
    EXPECT_NO_THROW(simulate_ode(net, oc));
    ++ran;
  }
  EXPECT_GT(ran, 30);
}
