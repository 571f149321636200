// Experiment runner: executes the out-of-core kernels under the two-level
// memory simulator and emits CSV reports for bound certification and
// ratio-vs-N studies.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symk/bounds.hpp"
#include "symk/experiment.hpp"
#include "symk/tbs.hpp"

namespace {

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

int emit_reports(const std::vector<symk::BoundReport>& reports,
                 const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_sink(out_path, file);
  symk::write_csv(out, reports);
  int rc = 0;
  for (const auto& r : reports) {
    if (!r.error.empty()) {
      std::cerr << "error: " << symk::algo_name(r.spec.algo) << " N=" << r.spec.n
                << ": " << r.error << "\n";
      rc = 1;
    } else if (!r.bound_ok) {
      std::cerr << "invariant violation: " << symk::algo_name(r.spec.algo)
                << " N=" << r.spec.n
                << " measured I/O is below the proven lower bound\n";
      rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Out-of-core SYRK/Cholesky schedules under a two-level memory "
               "simulator, with I/O lower-bound certification"};
  app.require_subcommand(1);

  // ---- run / sweep -------------------------------------------------------
  std::string algo_name = "tbs";
  std::string n_list = "0", m_list = "0";
  std::size_t mem = 0, tile = 0, block = 0, compute_cap = 4096;
  std::string mode = "count", out_path, in_matrix, out_matrix;
  std::uint64_t seed = 42;
  bool verify = false;

  auto add_run_flags = [&](CLI::App* cmd, bool sweeping) {
    cmd->add_option("--algo", algo_name,
                    "ref-syrk|ooc-syrk|tbs|tbs-tiled|ref-chol|ooc-chol|lbc")
        ->required();
    cmd->add_option("--n", n_list,
                    sweeping ? "matrix side(s) N, comma separated"
                             : "matrix side N")
        ->required();
    cmd->add_option("--m", m_list,
                    sweeping ? "operand width(s) M (SYRK only)"
                             : "operand width M (SYRK only)");
    cmd->add_option("--mem", mem, "fast memory capacity S in elements")
        ->required();
    cmd->add_option("--tile", tile, "tile side b for tbs-tiled");
    cmd->add_option("--block", block,
                    "block size for lbc (default floor(sqrt(N)))");
    cmd->add_option("--mode", mode, "compute|count (default count)");
    cmd->add_option("--seed", seed, "seed for generated inputs (default 42)");
    cmd->add_option("--out", out_path, "CSV output file (default stdout)");
    cmd->add_option("--compute-cap", compute_cap,
                    "max N/M allowed in compute mode (default 4096)");
    if (!sweeping) {
      cmd->add_option("--in-matrix", in_matrix, "input matrix file");
      cmd->add_option("--out-matrix", out_matrix, "result matrix file");
      cmd->add_flag("--verify", verify,
                    "compute mode: check the result against the reference");
    }
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_run_flags(run_cmd, false);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run the cross product of N and M lists");
  add_run_flags(sweep_cmd, true);

  // ---- certify -----------------------------------------------------------
  CLI::App* cert_cmd = app.add_subcommand(
      "certify",
      "brute-force certification table of the subcomputation bound");
  std::string domain_name = "syrk";
  std::size_t cert_n = 3, cert_m = 1, oracle_max_triples =
                                          symk::default_oracle_limit;
  std::string cert_out;
  cert_cmd->add_option("--domain", domain_name, "syrk|chol (default syrk)");
  cert_cmd->add_option("--n", cert_n, "domain side N")->required();
  cert_cmd->add_option("--m", cert_m, "domain width M (syrk only)");
  cert_cmd->add_option("--oracle-max-triples", oracle_max_triples,
                       "refuse domains above this many triples (default 20)");
  cert_cmd->add_option("--out", cert_out, "CSV output file (default stdout)");

  // ---- plan --------------------------------------------------------------
  CLI::App* plan_cmd =
      app.add_subcommand("plan", "show the triangle-block partition plan");
  std::size_t plan_n = 0, plan_tile = 1;
  std::uint64_t plan_mem = 0;
  std::string plan_out;
  plan_cmd->add_option("--n", plan_n, "matrix side N")->required();
  plan_cmd->add_option("--mem", plan_mem, "fast memory capacity S")->required();
  plan_cmd->add_option("--tile", plan_tile, "tile side b (default 1)");
  plan_cmd->add_option("--out", plan_out, "CSV output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd || *sweep_cmd) {
      auto algo = symk::parse_algo(algo_name);
      if (!algo) {
        std::cerr << "unknown algorithm: " << algo_name << "\n";
        return 2;
      }
      symk::RunMode run_mode;
      if (mode == "compute")
        run_mode = symk::RunMode::compute;
      else if (mode == "count")
        run_mode = symk::RunMode::count;
      else {
        std::cerr << "unknown mode: " << mode << "\n";
        return 2;
      }

      std::vector<symk::ExperimentSpec> specs;
      const auto ns = parse_list(n_list);
      auto ms = parse_list(m_list);
      if (ms.empty() || symk::is_cholesky(*algo)) ms = {0};
      for (std::size_t n : ns) {
        for (std::size_t m : ms) {
          symk::ExperimentSpec spec;
          spec.algo = *algo;
          spec.n = n;
          spec.m = m;
          spec.s = mem;
          spec.mode = run_mode;
          spec.seed = seed;
          if (tile > 0) spec.tile = tile;
          if (block > 0) spec.block = block;
          spec.compute_cap = compute_cap;
          spec.verify = verify;
          spec.in_matrix = in_matrix;
          spec.out_matrix = out_matrix;
          specs.push_back(spec);
        }
      }
      if (*run_cmd && specs.size() == 1) {
        // run: any failure is fatal rather than recorded per row
        std::vector<symk::BoundReport> reports{symk::run(specs[0])};
        return emit_reports(reports, out_path);
      }
      return emit_reports(symk::sweep(specs), out_path);
    }

    if (*cert_cmd) {
      symk::OpDomain domain;
      if (domain_name == "syrk")
        domain = symk::OpDomain::syrk;
      else if (domain_name == "chol")
        domain = symk::OpDomain::cholesky;
      else {
        std::cerr << "unknown domain: " << domain_name << "\n";
        return 2;
      }
      const auto table = symk::certification_table(domain, cert_n, cert_m,
                                                   oracle_max_triples);
      std::ofstream file;
      std::ostream& out = open_sink(cert_out, file);
      out << symk::cert_csv_header() << '\n';
      int rc = 0;
      for (const auto& row : table) {
        out << symk::cert_csv_row(row) << '\n';
        if (static_cast<double>(row.oracle_max) > row.bound) {
          std::cerr << "bound violated at X=" << row.x << "\n";
          rc = 1;
        }
      }
      return rc;
    }

    if (*plan_cmd) {
      const auto plan = symk::build_plan_tiled(plan_n, plan_mem, plan_tile);
      std::ofstream file;
      std::ostream& out = open_sink(plan_out, file);
      out << symk::TrianglePlan::csv_header() << '\n'
          << plan.csv_row() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
