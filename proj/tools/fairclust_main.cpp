// fairclust_main.cpp -- command-line front end: generate / cluster / sweep /
// metrics / validate
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairclust/contrastive.hpp"
#include "fairclust/errors.hpp"
#include "fairclust/graph.hpp"
#include "fairclust/io.hpp"
#include "fairclust/metrics.hpp"
#include "fairclust/sbm.hpp"
#include "fairclust/solver.hpp"
#include "fairclust/sweep.hpp"
#include "fairclust/version.hpp"

namespace {

using namespace fairclust;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

// Accepts the CLI11 TOML-ish key=value format, or a JSON object when the
// first non-space character is '{'. JSON sections (one level of nesting)
// map to subcommand names.
class FlexibleConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buffered;
    buffered << input.rdbuf();
    std::string text = buffered.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream replay(text);
      return CLI::ConfigTOML::from_config(replay);
    }
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<CLI::ConfigItem> items;
    auto add = [&items](std::vector<std::string> parents, const std::string& name,
                        const nlohmann::json& value) {
      CLI::ConfigItem item;
      item.parents = std::move(parents);
      item.name = name;
      if (value.is_array()) {
        for (const auto& v : value) {
          item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      } else {
        item.inputs.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      }
      items.push_back(std::move(item));
    };
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        for (const auto& [name, inner] : value.items()) {
          add({key}, name, inner);
        }
      } else {
        add({}, key, value);
      }
    }
    return items;
  }
};

Graph load_graph_file(const std::string& path, std::optional<std::size_t> n_hint = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  return load_edge_list(in, n_hint);
}

GroupAssignment load_groups_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open group file '" + path + "'");
  return load_groups(in, n);
}

ClusterLabels load_labels_csv(const std::string& path, std::size_t n,
                              std::optional<std::uint32_t> k_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file '" + path + "'");
  return read_membership_csv(in, n, k_override);
}

std::string manifest_json(const RunManifest& manifest, bool deterministic) {
  nlohmann::ordered_json j;
  j["seed"] = manifest.seed;
  j["k"] = manifest.k;
  j["lambda"] = manifest.lambda;
  j["iterations"] = manifest.iterations;
  j["final_loss"] = manifest.final_loss;
  j["wall_time_ms"] = deterministic ? 0.0 : manifest.wall_time_ms;
  j["tolerance"] = manifest.tolerance;
  j["version"] = manifest.version;
  return j.dump(2) + "\n";
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

// Solver flags shared by cluster and sweep.
struct SolverFlags {
  SolverConfig config;
  bool no_reg = false;
  bool drop_diagonal = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-iters", config.max_iters, "Maximum iterations")
        ->capture_default_str();
    cmd->add_option("--tol", config.tol, "Relative loss-change stopping threshold")
        ->capture_default_str();
    cmd->add_option("--eps", config.eps, "Denominator guard")->capture_default_str();
    cmd->add_flag("--no-reg", no_reg, "Disable the contrastive regularizer code path");
    cmd->add_flag("--drop-diagonal", drop_diagonal,
                  "Zero the self-pair diagonal of the contrast indicators (comparison mode; "
                  "large lambda values can destabilize the updates)");
    cmd->add_option("--h-exponent", config.update_exponent,
                    "Damping exponent of the H update (0.25 or 0.5)")
        ->check(CLI::IsMember({0.25, 0.5}))
        ->capture_default_str();
  }

  SolverConfig resolve() const {
    SolverConfig out = config;
    out.use_regularizer = !no_reg;
    out.include_diagonal = !drop_diagonal;
    return out;
  }
};

int run_generate(const SbmSpec& spec, const std::string& prefix) {
  SbmSample sample = generate(spec);

  std::ostringstream edges;
  save_edge_list(sample.graph, edges);
  write_text_file(prefix + ".edges", edges.str());

  std::ostringstream groups;
  for (std::size_t i = 0; i < sample.groups.size(); ++i) {
    groups << sample.groups.label(i) << '\n';
  }
  write_text_file(prefix + ".groups", groups.str());

  std::ostringstream truth;
  write_membership_csv(truth, sample.truth);
  write_text_file(prefix + ".truth.csv", truth.str());

  nlohmann::ordered_json sidecar;
  sidecar["n"] = spec.n;
  sidecar["k"] = spec.k;
  sidecar["g"] = spec.g;
  sidecar["p_in"] = spec.p_in;
  sidecar["p_out"] = spec.p_out;
  sidecar["seed"] = spec.seed;
  sidecar["edges"] = sample.graph.edge_count();
  sidecar["files"] = {prefix + ".edges", prefix + ".groups", prefix + ".truth.csv"};
  sidecar["version"] = kVersion;
  write_text_file(prefix + ".json", sidecar.dump(2) + "\n");

  std::cout << prefix << ".edges\n"
            << prefix << ".groups\n"
            << prefix << ".truth.csv\n"
            << prefix << ".json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairclust -- fairness-regularized graph clustering toolkit"};
  app.set_version_flag("--version", kVersion);
  app.config_formatter(std::make_shared<FlexibleConfig>());
  app.set_config("--config", "", "Config file (TOML key=value or JSON); flags take precedence");
  app.require_subcommand(1);

  // ---- generate ----
  SbmSpec sbm_spec;
  std::string gen_prefix = "sbm";
  CLI::App* gen = app.add_subcommand("generate", "Generate an SBM benchmark dataset");
  gen->add_option("--n", sbm_spec.n, "Node count")->required();
  gen->add_option("--k", sbm_spec.k, "Planted clusters (divides n)")->capture_default_str();
  gen->add_option("--g", sbm_spec.g, "Sensitive groups (divides n)")->capture_default_str();
  gen->add_option("--p-in", sbm_spec.p_in, "Within-block edge probability")->capture_default_str();
  gen->add_option("--p-out", sbm_spec.p_out, "Between-block edge probability")
      ->capture_default_str();
  gen->add_option("--seed", sbm_spec.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_prefix, "Output path prefix")->capture_default_str();

  // ---- cluster ----
  std::string cl_graph, cl_groups, cl_truth, cl_prefix = "run";
  SolverFlags cl_flags;
  bool cl_dump_factors = false, cl_dump_contrastive = false, cl_deterministic = false;
  CLI::App* cluster = app.add_subcommand("cluster", "Run the solver once on a dataset");
  cluster->add_option("--graph", cl_graph, "Edge-list file")->required();
  cluster->add_option("--groups", cl_groups, "Group file")->required();
  cluster->add_option("--k", cl_flags.config.k, "Number of clusters (>= 2)")->required();
  cluster->add_option("--lambda", cl_flags.config.lambda, "Fairness trade-off (>= 0)")
      ->capture_default_str();
  cluster->add_option("--seed", cl_flags.config.seed, "RNG seed")->capture_default_str();
  cl_flags.attach(cluster);
  cluster->add_option("--truth", cl_truth, "Ground-truth labels CSV (adds accuracy)");
  cluster->add_flag("--dump-factors", cl_dump_factors, "Also write H.csv and W.csv");
  cluster->add_flag("--dump-contrastive", cl_dump_contrastive, "Also write C.csv and L.csv");
  cluster->add_flag("--deterministic", cl_deterministic,
                    "Byte-reproducible outputs (zeroes wall times)");
  cluster->add_option("--out", cl_prefix, "Output path prefix")->capture_default_str();

  // ---- sweep ----
  std::string sw_graph, sw_groups, sw_truth, sw_prefix = "sweep";
  SolverFlags sw_flags;
  SweepSpec sweep_spec;
  std::vector<double> sw_lambda_grid;
  int sw_lambda_count = 0;
  double sw_lambda_max = 100.0, sw_lambda_median = 3.0;
  bool sw_svg = false;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a (k, lambda, repeat) experiment grid");
  sweep->add_option("--graph", sw_graph, "Edge-list file")->required();
  sweep->add_option("--groups", sw_groups, "Group file")->required();
  sweep->add_option("--truth", sw_truth, "Ground-truth labels CSV (adds accuracy)");
  sweep->add_option("--k-grid", sweep_spec.k_grid, "Cluster counts to sweep")->required();
  auto* grid_opt =
      sweep->add_option("--lambda-grid", sw_lambda_grid, "Explicit lambda values");
  sweep->add_option("--lambda-count", sw_lambda_count,
                    "Build a zero-plus-geometric lambda grid with this many values")
      ->excludes(grid_opt);
  sweep->add_option("--lambda-max", sw_lambda_max, "Largest lambda of the built grid")
      ->capture_default_str();
  sweep->add_option("--lambda-median", sw_lambda_median,
                    "Middle value of the built grid's geometric part")
      ->capture_default_str();
  sweep->add_option("--repeats", sweep_spec.repeats, "Seeded runs per cell")
      ->capture_default_str();
  sweep->add_option("--base-seed", sweep_spec.base_seed, "Base seed; cell seeds derive from it")
      ->capture_default_str();
  sweep->add_option("--workers", sweep_spec.workers,
                    "Concurrent cells (0 = hardware threads; FAIRCLUST_THREADS caps)")
      ->capture_default_str();
  sw_flags.attach(sweep);
  sweep->add_flag("--svg", sw_svg, "Also write twin-chart SVGs");
  sweep->add_flag("--deterministic", sweep_spec.deterministic,
                  "Byte-reproducible outputs (zeroes wall times)");
  sweep->add_option("--out", sw_prefix, "Output path prefix")->capture_default_str();

  // ---- metrics ----
  std::string me_graph, me_groups, me_membership, me_truth, me_out = "-";
  std::uint32_t me_k = 0;
  bool me_csv = false;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "Score an external membership file");
  metrics_cmd->add_option("--graph", me_graph, "Edge-list file")->required();
  metrics_cmd->add_option("--groups", me_groups, "Group file")->required();
  metrics_cmd->add_option("--membership", me_membership, "Membership CSV to score")->required();
  metrics_cmd->add_option("--truth", me_truth, "Ground-truth labels CSV (adds accuracy)");
  metrics_cmd->add_option("--k", me_k,
                          "Cluster count override (default: max label + 1, at least 2)");
  metrics_cmd->add_flag("--csv", me_csv, "Emit a CSV row instead of JSON");
  metrics_cmd->add_option("--out", me_out, "Output file ('-' = stdout)")->capture_default_str();

  // ---- validate ----
  std::string va_graph, va_groups;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Structural diagnostics for input files");
  validate_cmd->add_option("--graph", va_graph, "Edge-list file")->required();
  validate_cmd->add_option("--groups", va_groups, "Group file (optional)");

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      return run_generate(sbm_spec, gen_prefix);
    }

    if (cluster->parsed()) {
      const Graph graph = load_graph_file(cl_graph);
      const GroupAssignment groups = load_groups_file(cl_groups, graph.node_count());
      const SolverConfig config = cl_flags.resolve();

      const RunResult result = fit(graph, groups, config);
      print_warnings(result.warnings);

      std::ostringstream membership;
      write_membership_csv(membership, result.labels);
      write_text_file(cl_prefix + ".membership.csv", membership.str());
      write_text_file(cl_prefix + ".manifest.json",
                      manifest_json(result.manifest, cl_deterministic));

      std::optional<ClusterLabels> truth;
      if (!cl_truth.empty()) {
        truth = load_labels_csv(cl_truth, graph.node_count());
      }
      const MetricsReport report =
          compute_metrics(graph, result.labels, groups, truth ? &*truth : nullptr);
      write_text_file(cl_prefix + ".metrics.json", metrics_to_json(report));

      if (cl_dump_factors) {
        std::ostringstream h_csv, w_csv;
        write_matrix_csv(h_csv, result.factors.H);
        write_matrix_csv(w_csv, result.factors.W);
        write_text_file(cl_prefix + ".H.csv", h_csv.str());
        write_text_file(cl_prefix + ".W.csv", w_csv.str());
      }
      if (cl_dump_contrastive) {
        const ContrastiveSystem sys =
            build_contrastive(groups, {.include_diagonal = config.include_diagonal});
        std::ostringstream c_csv, l_csv;
        write_matrix_csv(c_csv, sys.C);
        write_matrix_csv(l_csv, sys.L);
        write_text_file(cl_prefix + ".C.csv", c_csv.str());
        write_text_file(cl_prefix + ".L.csv", l_csv.str());
      }

      std::cout << cl_prefix << ".membership.csv\n"
                << cl_prefix << ".manifest.json\n"
                << cl_prefix << ".metrics.json\n";
      return 0;
    }

    if (sweep->parsed()) {
      const Graph graph = load_graph_file(sw_graph);
      const GroupAssignment groups = load_groups_file(sw_groups, graph.node_count());
      std::optional<ClusterLabels> truth;
      if (!sw_truth.empty()) {
        truth = load_labels_csv(sw_truth, graph.node_count());
      }
      sweep_spec.solver = sw_flags.resolve();
      sweep_spec.lambda_grid =
          sw_lambda_grid.empty()
              ? make_lambda_grid(sw_lambda_count > 0 ? sw_lambda_count : 50, sw_lambda_max,
                                 sw_lambda_median)
              : sw_lambda_grid;

      const SweepTable table = run_sweep(graph, groups, truth ? &*truth : nullptr, sweep_spec);

      std::ostringstream csv;
      write_sweep_csv(csv, table);
      write_text_file(sw_prefix + ".csv", csv.str());
      std::cout << sw_prefix << ".csv\n";

      for (int k : sweep_spec.k_grid) {
        std::ostringstream twin;
        write_twin_chart_csv(twin, table, k);
        const std::string twin_path = sw_prefix + ".twin_k" + std::to_string(k) + ".csv";
        write_text_file(twin_path, twin.str());
        std::cout << twin_path << '\n';
        if (sw_svg) {
          std::ostringstream svg;
          write_twin_chart_svg(svg, table, k);
          const std::string svg_path = sw_prefix + ".twin_k" + std::to_string(k) + ".svg";
          write_text_file(svg_path, svg.str());
          std::cout << svg_path << '\n';
        }
      }

      nlohmann::ordered_json summary;
      summary["lambda_star"] = nlohmann::ordered_json::array();
      for (const LambdaChoice& choice : select_lambda_star(table)) {
        summary["lambda_star"].push_back(
            {{"k", choice.k}, {"lambda", choice.lambda}, {"gap", choice.gap}});
        std::cout << "lambda* (k=" << choice.k << "): " << format_double(choice.lambda)
                  << "  |Q-B| = " << format_double(choice.gap) << '\n';
      }
      summary["version"] = kVersion;
      write_text_file(sw_prefix + ".summary.json", summary.dump(2) + "\n");
      std::cout << sw_prefix << ".summary.json\n";
      return 0;
    }

    if (metrics_cmd->parsed()) {
      const Graph graph = load_graph_file(me_graph);
      const GroupAssignment groups = load_groups_file(me_groups, graph.node_count());
      const ClusterLabels labels = load_labels_csv(
          me_membership, graph.node_count(),
          me_k > 0 ? std::optional<std::uint32_t>(me_k) : std::nullopt);
      std::optional<ClusterLabels> truth;
      if (!me_truth.empty()) {
        truth = load_labels_csv(me_truth, graph.node_count());
      }
      const MetricsReport report = compute_metrics(graph, labels, groups, truth ? &*truth : nullptr);
      print_warnings(report.warnings);
      const std::string payload = me_csv
                                      ? metrics_csv_header() + "\n" + metrics_csv_row(report) + "\n"
                                      : metrics_to_json(report);
      if (me_out == "-") {
        std::cout << payload;
      } else {
        write_text_file(me_out, payload);
      }
      return 0;
    }

    if (validate_cmd->parsed()) {
      const Graph graph = load_graph_file(va_graph);
      const Diagnostics diag = validate(graph);
      std::cout << "nodes: " << graph.node_count() << "\nedges: " << graph.edge_count() << '\n'
                << diag.summary();
      if (!va_groups.empty()) {
        const GroupAssignment groups = load_groups_file(va_groups, graph.node_count());
        std::cout << "groups: " << groups.group_count() << " [";
        for (std::uint32_t g = 0; g < groups.group_count(); ++g) {
          std::cout << (g ? " " : "") << groups.group_sizes()[g];
        }
        std::cout << "]\n";
        if (groups.group_count() == 1) {
          std::cerr << "warning: single sensitive group; balance is undefined and the "
                       "contrastive term is pure repulsion\n";
        }
      }
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
