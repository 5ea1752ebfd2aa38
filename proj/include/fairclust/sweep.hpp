// sweep.hpp -- (k, lambda, repeat) experiment grid over the solver, with
// long-form CSV output and twin-chart (Q/B vs lambda) data
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairclust/graph.hpp"
#include "fairclust/solver.hpp"

namespace fairclust {

struct SweepSpec {
  std::vector<int> k_grid;
  std::vector<double> lambda_grid;
  int repeats = 10;  // independent seeded runs per (k, lambda) cell
  std::uint64_t base_seed = 0;
  int workers = 0;             // 0: one per hardware thread; FAIRCLUST_THREADS caps
  bool deterministic = false;  // zero wall times in outputs
  SolverConfig solver;         // k, lambda, seed are overridden per cell
};

struct SweepRow {
  int k = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double q = 0.0;
  double b = 0.0;         // NaN when balance is undefined
  double accuracy = 0.0;  // NaN without ground truth
  double rho = 0.0;
  double final_loss = 0.0;
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::string status;  // "ok" or "failed: <reason>"
};

// Per-cell mean and sample standard deviation over the rows with status ok.
struct SweepAggregate {
  int k = 0;
  double lambda = 0.0;
  int ok_count = 0;
  SweepRow mean;
  SweepRow stddev;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (k, lambda, repeat)
  std::vector<SweepAggregate> aggregates;
};

// {0} followed by `count - 1` geometrically spaced values ending at
// lambda_max, positioned so the middle of the geometric part equals
// `median` (lambda_min = median^2 / lambda_max).
std::vector<double> make_lambda_grid(int count, double lambda_max, double median = 3.0);

// Runs every (k, lambda, repeat) cell; cell seeds are derived from
// (base_seed, cell index, repeat), so results do not depend on worker
// scheduling. Failed cells are recorded and the sweep continues.
SweepTable run_sweep(const Graph& graph, const GroupAssignment& groups,
                     const ClusterLabels* truth, const SweepSpec& spec);

// Grid point minimizing |mean Q - mean B| for one k; ties go to the
// smaller lambda. The full curve is always reported next to it so other
// selection rules can be applied downstream.
struct LambdaChoice {
  int k = 0;
  double lambda = 0.0;
  double gap = 0.0;  // |mean Q - mean B| at the chosen point
};
std::vector<LambdaChoice> select_lambda_star(const SweepTable& table);

// Long form: one row per (cell, repeat), then flagged aggregate rows
// (status "mean" / "std") per cell.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

// (lambda, mean Q, mean B) for one k.
void write_twin_chart_csv(std::ostream& out, const SweepTable& table, int k);

// Dependency-free line chart: solid Q, dashed B over the lambda grid.
void write_twin_chart_svg(std::ostream& out, const SweepTable& table, int k);

}  // namespace fairclust
