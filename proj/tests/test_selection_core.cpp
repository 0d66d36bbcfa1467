#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sensorsel/linalg.hpp"
#include "sensorsel/errors.hpp"
#include "sensorsel/selection.hpp"
#include "test_support.hpp"

using namespace sensorsel;
using namespace sensorsel::testing;

namespace {

// Random feasible subset of the given size, or empty if none found.
std::vector<int> random_feasible_subset(RandomStream& rng, const SelectionProblem& problem,
                                        std::size_t size) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<int> all(problem.candidate_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i + 1);
    rng.shuffle(all);
    std::vector<int> subset(all.begin(), all.begin() + size);
    std::sort(subset.begin(), subset.end());
    if (is_feasible(problem, subset)) return subset;
  }
  return {};
}

}  // namespace

TEST_CASE("objective on hand-checked instances") {
  const SelectionProblem ex_a = example_a();
  const std::vector<int> s1{1};
  CHECK(objective(ex_a, s1) == doctest::Approx(4.0).epsilon(1e-12));

  const SelectionProblem eye{DataMatrix::identity(3), DataMatrix::identity(3), 0.0, 3};
  const std::vector<int> s12{1, 2};
  CHECK(objective(eye, s12) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(objective(eye, std::vector<int>{}) == 0.0);
}

TEST_CASE("objective matches the explicit-inverse oracle") {
  RandomStream rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const SelectionProblem problem = random_problem(rng);
    const std::size_t size = 1 + rng.uniform_index(std::min<std::size_t>(problem.budget_p, 4));
    const std::vector<int> subset = random_feasible_subset(rng, problem, size);
    if (subset.empty()) continue;
    const double fast = objective(problem, subset);
    const double slow = objective_oracle(problem, subset);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-8));
  }
}

TEST_CASE("objective rejects infeasible subsets") {
  const SelectionProblem flat{DataMatrix::from_rows({{1, 0}, {1, 0}}),
                              DataMatrix::from_rows({{1, 0}}), 0.0, 2};
  const std::vector<int> both{1, 2};
  CHECK_THROWS_AS(objective(flat, both), InfeasibleSubset);
  CHECK_FALSE(is_feasible(flat, both));
}

TEST_CASE("is_feasible basics") {
  const SelectionProblem eye{DataMatrix::identity(3), DataMatrix::identity(3), 0.0, 3};
  CHECK(is_feasible(eye, std::vector<int>{1, 3}));

  RandomStream rng(5);
  const SelectionProblem ridged{random_low_rank(rng, 6, 4, 2), random_matrix(rng, 2, 4), 0.5, 6};
  std::vector<int> all{1, 2, 3, 4, 5, 6};
  CHECK(is_feasible(ridged, all));  // λ > 0 keeps the constraint inactive
}

TEST_CASE("naive_greedy on EX-A picks [1, 2] with a flat trajectory") {
  const SelectionResult result = naive_greedy(example_a());
  CHECK(result.indices == std::vector<int>{1, 2});
  REQUIRE(result.objective_trajectory.size() == 2);
  CHECK(result.objective_trajectory[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(result.objective_trajectory[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(result.termination == Termination::BudgetReached);
}

TEST_CASE("naive_greedy on the identity walks the diagonal") {
  const SelectionProblem eye{DataMatrix::identity(3), DataMatrix::identity(3), 0.0, 3};
  const SelectionResult result = naive_greedy(eye);
  CHECK(result.indices == std::vector<int>{1, 2, 3});
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(result.objective_trajectory[k] == doctest::Approx(double(k + 1)).epsilon(1e-12));
}

TEST_CASE("naive_greedy stops when the feasible set empties") {
  const SelectionProblem flat{DataMatrix::from_rows({{1, 0}, {1, 0}}),
                              DataMatrix::from_rows({{1, 0}}), 0.0, 2};
  const SelectionResult result = naive_greedy(flat);
  CHECK(result.indices.size() == 1);
  CHECK(result.termination == Termination::FeasibleSetExhausted);
}

TEST_CASE("naive_greedy trajectory is nondecreasing") {
  RandomStream rng(303);
  for (int trial = 0; trial < 25; ++trial) {
    const SelectionProblem problem = random_problem(rng);
    const SelectionResult result = naive_greedy(problem);
    for (std::size_t k = 1; k < result.objective_trajectory.size(); ++k)
      CHECK(result.objective_trajectory[k] >=
            result.objective_trajectory[k - 1] - 1e-10 * (1.0 + result.objective_trajectory[k]));
  }
}

TEST_CASE("exhaustive_optimum on hand instances") {
  const SelectionProblem eye{DataMatrix::identity(3), DataMatrix::identity(3), 0.0, 2};
  const ExhaustiveOptimum best = exhaustive_optimum(eye);
  CHECK(best.value == doctest::Approx(2.0).epsilon(1e-12));

  SelectionProblem ex_a = example_a(1);
  const ExhaustiveOptimum single = exhaustive_optimum(ex_a);
  CHECK(single.indices == std::vector<int>{1});  // ties resolve by index order
  CHECK(single.value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("exhaustive_optimum returns everything for p = N with ridge") {
  RandomStream rng(7);
  const std::size_t n = 6;
  const SelectionProblem problem{random_matrix(rng, n, 4), random_matrix(rng, 2, 4), 0.1, n};
  const ExhaustiveOptimum best = exhaustive_optimum(problem);
  CHECK(best.indices.size() == n);
}

TEST_CASE("exhaustive_optimum guard") {
  RandomStream rng(9);
  const SelectionProblem big{random_matrix(rng, 40, 4), random_matrix(rng, 1, 4), 0.1, 20};
  CHECK_THROWS_AS(exhaustive_optimum(big), TooLargeForExhaustive);
}

TEST_CASE("greedy is bracketed by the single-best and the exhaustive optimum") {
  RandomStream rng(404);
  for (int trial = 0; trial < 15; ++trial) {
    SelectionProblem problem = random_problem(rng, 9, 6, 3);
    problem.budget_p = std::min<std::size_t>(problem.budget_p, 4);
    const SelectionResult greedy = naive_greedy(problem);
    if (greedy.indices.empty()) continue;
    const ExhaustiveOptimum best = exhaustive_optimum(problem);

    double best_single = 0.0;
    for (std::size_t i = 1; i <= problem.candidate_count(); ++i) {
      const std::vector<int> single{static_cast<int>(i)};
      if (!is_feasible(problem, single)) continue;
      best_single = std::max(best_single, objective(problem, single));
    }
    const double greedy_value = greedy.objective_trajectory.back();
    CHECK(greedy_value <= best.value + 1e-8 * (1.0 + best.value));
    CHECK(greedy_value >= best_single - 1e-8 * (1.0 + best_single));
  }
}

TEST_CASE("monotonicity: adding a feasible element never decreases J") {
  RandomStream rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    const SelectionProblem problem = random_problem(rng, 10, 8, 3);
    const std::size_t size = rng.uniform_index(4);
    std::vector<int> subset =
        size == 0 ? std::vector<int>{} : random_feasible_subset(rng, problem, size);
    if (size != 0 && subset.empty()) continue;
    const double base = objective(problem, subset);
    for (std::size_t i = 1; i <= problem.candidate_count(); ++i) {
      if (std::find(subset.begin(), subset.end(), static_cast<int>(i)) != subset.end()) continue;
      std::vector<int> extended = subset;
      extended.push_back(static_cast<int>(i));
      if (!is_feasible(problem, extended)) continue;
      CHECK(objective(problem, extended) >= base - 1e-10 * (1.0 + base));
    }
  }
}

TEST_CASE("the objective increment equals the Q^{yy} trace drop") {
  RandomStream rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    const SelectionProblem problem = random_problem(rng, 10, 8, 4);
    const std::size_t size = rng.uniform_index(3);
    std::vector<int> subset =
        size == 0 ? std::vector<int>{} : random_feasible_subset(rng, problem, size);
    if (size != 0 && subset.empty()) continue;

    for (std::size_t i = 1; i <= problem.candidate_count(); ++i) {
      if (std::find(subset.begin(), subset.end(), static_cast<int>(i)) != subset.end()) continue;
      std::vector<int> extended = subset;
      extended.push_back(static_cast<int>(i));
      if (!is_feasible(problem, extended)) continue;
      const double increment = objective(problem, extended) - objective(problem, subset);
      const OracleState before = oracle_state(problem, subset);
      const OracleState after = oracle_state(problem, extended);
      const double trace_drop = before.q_yy.trace() - after.q_yy.trace();
      CHECK(increment == doctest::Approx(trace_drop).epsilon(1e-8));
      break;  // one extension per instance keeps the suite quick
    }
  }
}

TEST_CASE("Lemma 1 rank-one updates match the Q definitions") {
  RandomStream rng(707);
  for (int trial = 0; trial < 20; ++trial) {
    SelectionProblem problem = random_problem(rng, 8, 6, 3);
    const std::size_t size = 1 + rng.uniform_index(2);
    const std::vector<int> subset = random_feasible_subset(rng, problem, size);
    if (subset.empty()) continue;

    int extension = -1;
    for (std::size_t i = 1; i <= problem.candidate_count(); ++i) {
      if (std::find(subset.begin(), subset.end(), static_cast<int>(i)) != subset.end()) continue;
      std::vector<int> extended = subset;
      extended.push_back(static_cast<int>(i));
      if (is_feasible(problem, extended)) {
        extension = static_cast<int>(i);
        break;
      }
    }
    if (extension < 0) continue;

    std::vector<int> extended = subset;
    extended.push_back(extension);
    const OracleState before = oracle_state(problem, subset);
    const OracleState after = oracle_state(problem, extended);
    const std::size_t i0 = static_cast<std::size_t>(extension - 1);
    const double pivot = before.q_xx(i0, i0);
    REQUIRE(pivot > 0.0);

    const std::size_t n = problem.candidate_count();
    const std::size_t n_y = problem.output_count();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const double drop = before.q_xx(a, b) - after.q_xx(a, b);
        const double expected = before.q_xx(i0, a) * before.q_xx(i0, b) / pivot;
        CHECK(drop == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
      }
      for (std::size_t b = 0; b < n_y; ++b) {
        const double drop = before.q_xy(a, b) - after.q_xy(a, b);
        const double expected = before.q_xx(i0, a) * before.q_xy(i0, b) / pivot;
        CHECK(drop == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
      }
    }
    for (std::size_t a = 0; a < n_y; ++a)
      for (std::size_t b = 0; b < n_y; ++b) {
        const double drop = before.q_yy(a, b) - after.q_yy(a, b);
        const double expected = before.q_xy(i0, a) * before.q_xy(i0, b) / pivot;
        CHECK(drop == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
      }
  }
}

TEST_CASE("oracle state invariants") {
  RandomStream rng(808);
  for (int trial = 0; trial < 15; ++trial) {
    const SelectionProblem problem = random_problem(rng, 9, 7, 3);
    const std::vector<int> subset = random_feasible_subset(rng, problem, 2);
    if (subset.empty()) continue;
    const OracleState state = oracle_state(problem, subset);

    // Symmetry and positive semidefiniteness of Q^{xx}, and the
    // J(S) = tr(P^{yy}) − tr(Q^{yy}) identity.
    for (std::size_t i = 0; i < state.q_xx.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        CHECK(state.q_xx(i, j) == doctest::Approx(state.q_xx(j, i)).epsilon(1e-10));
    const SymmetricEigen eig = symmetric_eigen(state.q_xx);
    CHECK(eig.values.back() >=
          -1e-8 * (1.0 + state.q_xx.trace()) / static_cast<double>(state.q_xx.rows()));
    const double trace_p_yy = multiply_abt(problem.y, problem.y).trace();
    CHECK(objective(problem, subset) ==
          doctest::Approx(trace_p_yy - state.q_yy.trace()).epsilon(1e-8));
  }
}
