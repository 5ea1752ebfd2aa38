#include "fairclust/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "fairclust/errors.hpp"
#include "fairclust/io.hpp"
#include "fairclust/metrics.hpp"
#include "fairclust/rng.hpp"

namespace fairclust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_workers(int requested, std::size_t task_count) {
  int workers = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* cap = std::getenv("FAIRCLUST_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit >= 1 && limit < workers) workers = limit;
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), task_count));
}

void csv_field(std::ostream& out, double v) {
  if (!std::isnan(v)) out << format_double(v);
}

struct Welford {
  // two-pass is simpler at this size: collect then reduce
  std::vector<double> values;
  void add(double v) {
    if (!std::isnan(v)) values.push_back(v);
  }
  double mean() const {
    if (values.empty()) return kNaN;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double stddev() const {  // sample stddev; 0 for a single value
    if (values.empty()) return kNaN;
    if (values.size() == 1) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

}  // namespace

std::vector<double> make_lambda_grid(int count, double lambda_max, double median) {
  if (count < 2) {
    throw ValidationError("lambda grid needs at least 2 values");
  }
  if (!(lambda_max > 0.0) || !(median > 0.0) || median >= lambda_max) {
    throw ValidationError("lambda grid requires 0 < median < lambda_max");
  }
  const int geo = count - 1;  // values after the leading 0
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  grid.push_back(0.0);
  if (geo == 1) {
    grid.push_back(lambda_max);
    return grid;
  }
  const double lambda_min = std::min(median * median / lambda_max, lambda_max);
  const double ratio = std::pow(lambda_max / lambda_min, 1.0 / static_cast<double>(geo - 1));
  for (int i = 0; i < geo; ++i) {
    grid.push_back(lambda_min * std::pow(ratio, static_cast<double>(i)));
  }
  grid.back() = lambda_max;  // pin the endpoint against rounding
  return grid;
}

SweepTable run_sweep(const Graph& graph, const GroupAssignment& groups,
                     const ClusterLabels* truth, const SweepSpec& spec) {
  if (spec.k_grid.empty() || spec.lambda_grid.empty()) {
    throw ValidationError("sweep grids must be nonempty");
  }
  if (spec.repeats < 1) {
    throw ValidationError("sweep repeats must be >= 1");
  }

  struct Task {
    std::size_t row_index;
    int k;
    double lambda;
    std::uint64_t cell_index;
    int repeat;
  };
  std::vector<Task> tasks;
  std::uint64_t cell_index = 0;
  for (int k : spec.k_grid) {
    for (double lambda : spec.lambda_grid) {
      for (int rep = 0; rep < spec.repeats; ++rep) {
        tasks.push_back({tasks.size(), k, lambda, cell_index, rep});
      }
      ++cell_index;
    }
  }

  SweepTable table;
  table.rows.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) break;
      const Task& task = tasks[t];
      SweepRow& row = table.rows[task.row_index];
      row.k = task.k;
      row.lambda = task.lambda;
      row.seed = derive_seed(spec.base_seed, task.cell_index, static_cast<std::uint64_t>(task.repeat));
      row.q = row.b = row.accuracy = row.rho = row.final_loss = kNaN;
      try {
        SolverConfig config = spec.solver;
        config.k = task.k;
        config.lambda = task.lambda;
        config.seed = row.seed;
        config.init.reset();
        const RunResult result = fit(graph, groups, config);
        const MetricsReport report = compute_metrics(graph, result.labels, groups, truth);
        row.q = report.modularity;
        row.b = report.avg_balance.value_or(kNaN);
        row.accuracy = report.accuracy.value_or(kNaN);
        row.rho = report.rho_avg;
        row.final_loss = result.manifest.final_loss;
        row.iterations = result.iterations;
        row.wall_time_ms = spec.deterministic ? 0.0 : result.manifest.wall_time_ms;
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
      }
    }
  };

  const int workers = resolve_workers(spec.workers, tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Rows are already in (k, lambda, repeat) task order; aggregate per cell.
  for (std::size_t start = 0; start < table.rows.size();
       start += static_cast<std::size_t>(spec.repeats)) {
    SweepAggregate agg;
    agg.k = table.rows[start].k;
    agg.lambda = table.rows[start].lambda;
    Welford q, b, acc, rho, loss, iters, wall;
    for (std::size_t i = start; i < start + static_cast<std::size_t>(spec.repeats); ++i) {
      const SweepRow& row = table.rows[i];
      if (row.status != "ok") continue;
      ++agg.ok_count;
      q.add(row.q);
      b.add(row.b);
      acc.add(row.accuracy);
      rho.add(row.rho);
      loss.add(row.final_loss);
      iters.add(static_cast<double>(row.iterations));
      wall.add(row.wall_time_ms);
    }
    agg.mean = {agg.k, agg.lambda, 0, q.mean(), b.mean(), acc.mean(), rho.mean(), loss.mean(),
                static_cast<int>(std::lround(std::isnan(iters.mean()) ? 0.0 : iters.mean())),
                wall.mean(), "mean"};
    agg.stddev = {agg.k, agg.lambda, 0, q.stddev(), b.stddev(), acc.stddev(), rho.stddev(),
                  loss.stddev(), 0, wall.stddev(), "std"};
    table.aggregates.push_back(std::move(agg));
  }
  return table;
}

std::vector<LambdaChoice> select_lambda_star(const SweepTable& table) {
  std::vector<LambdaChoice> choices;
  for (const SweepAggregate& agg : table.aggregates) {
    if (agg.ok_count == 0 || std::isnan(agg.mean.q) || std::isnan(agg.mean.b)) continue;
    const double gap = std::abs(agg.mean.q - agg.mean.b);
    auto it = std::find_if(choices.begin(), choices.end(),
                           [&](const LambdaChoice& c) { return c.k == agg.k; });
    if (it == choices.end()) {
      choices.push_back({agg.k, agg.lambda, gap});
    } else if (gap < it->gap) {  // strict: ties keep the smaller lambda
      it->lambda = agg.lambda;
      it->gap = gap;
    }
  }
  return choices;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "k,lambda,seed,Q,B,accuracy,rho,final_loss,iterations,wall_time_ms,status\n";
  auto emit = [&out](const SweepRow& row, bool aggregate) {
    out << row.k << ',' << format_double(row.lambda) << ',';
    if (!aggregate) out << row.seed;
    out << ',';
    csv_field(out, row.q);
    out << ',';
    csv_field(out, row.b);
    out << ',';
    csv_field(out, row.accuracy);
    out << ',';
    csv_field(out, row.rho);
    out << ',';
    csv_field(out, row.final_loss);
    out << ',';
    if (!aggregate || row.status == "mean") out << row.iterations;
    out << ',';
    csv_field(out, row.wall_time_ms);
    out << ',' << row.status << '\n';
  };
  for (const SweepRow& row : table.rows) emit(row, false);
  for (const SweepAggregate& agg : table.aggregates) {
    emit(agg.mean, true);
    emit(agg.stddev, true);
  }
}

void write_twin_chart_csv(std::ostream& out, const SweepTable& table, int k) {
  out << "lambda,mean_Q,mean_B\n";
  for (const SweepAggregate& agg : table.aggregates) {
    if (agg.k != k) continue;
    out << format_double(agg.lambda) << ',';
    csv_field(out, agg.mean.q);
    out << ',';
    csv_field(out, agg.mean.b);
    out << '\n';
  }
}

void write_twin_chart_svg(std::ostream& out, const SweepTable& table, int k) {
  std::vector<double> lambdas, qs, bs;
  for (const SweepAggregate& agg : table.aggregates) {
    if (agg.k != k || std::isnan(agg.mean.q) || std::isnan(agg.mean.b)) continue;
    lambdas.push_back(agg.lambda);
    qs.push_back(agg.mean.q);
    bs.push_back(agg.mean.b);
  }
  const int width = 640, height = 420;
  const int ml = 60, mr = 20, mt = 30, mb = 60;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\">Q and B vs lambda (k="
      << k << ")</text>\n";
  if (lambdas.empty()) {
    out << "<text x=\"" << width / 2 << "\" y=\"" << height / 2
        << "\" text-anchor=\"middle\">no successful cells</text>\n</svg>\n";
    return;
  }
  double y_min = 0.0, y_max = 1.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    y_min = std::min({y_min, qs[i], bs[i]});
    y_max = std::max({y_max, qs[i], bs[i]});
  }
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  // lambda grids are geometric, so points are placed by index
  auto x_at = [&](std::size_t i) {
    return ml + (lambdas.size() == 1
                     ? plot_w / 2.0
                     : plot_w * static_cast<double>(i) / static_cast<double>(lambdas.size() - 1));
  };
  auto y_at = [&](double v) { return mt + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };
  auto polyline = [&](const std::vector<double>& ys, const char* color, bool dashed) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dashed) out << " stroke-dasharray=\"6,4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      out << x_at(i) << ',' << y_at(ys[i]) << ' ';
    }
    out << "\"/>\n";
  };
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
  for (double tick : {y_min, (y_min + y_max) / 2.0, y_max}) {
    out << "<text x=\"" << ml - 6 << "\" y=\"" << y_at(tick) + 4
        << "\" text-anchor=\"end\">" << format_double(std::round(tick * 100.0) / 100.0)
        << "</text>\n";
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    out << "<text x=\"" << x_at(i) << "\" y=\"" << mt + plot_h + 16
        << "\" text-anchor=\"middle\">" << format_double(std::round(lambdas[i] * 100.0) / 100.0)
        << "</text>\n";
  }
  out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 24
      << "\" text-anchor=\"middle\">lambda</text>\n";
  polyline(qs, "#1f77b4", false);  // solid: modularity
  polyline(bs, "#d62728", true);   // dashed: balance
  out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 14 << "\" fill=\"#1f77b4\">Q (solid)</text>\n";
  out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 28 << "\" fill=\"#d62728\">B (dashed)</text>\n";
  out << "</svg>\n";
}

}  // namespace fairclust
