#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ckn/commands.hpp"
#include "ckn/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stability constants and diagnostics for CKN bubbles on the Felli-Schneider curve"};
  app.set_version_flag("--version", ckn::kVersion);
  app.set_config("--config", "", "Flat key=value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  ckn::RunConfig cfg;
  std::vector<std::string> p_specs, mu_specs, gap_specs;
  std::string format = "csv";
  app.add_option("--n", cfg.n_values, "Dimension (repeatable)")->delimiter(',');
  app.add_option("--p", p_specs, "Exponent p, or a range a:b:step (repeatable)")->delimiter(',');
  app.add_option("--grid-N", cfg.grid_N, "Axial nodes (odd; 0 = default)");
  app.add_option("--grid-S", cfg.grid_S, "Half-length of the s-interval (0 = default)");
  app.add_option("--L", cfg.L, "Highest zonal degree");
  app.add_option("--M", cfg.M, "Angular quadrature nodes");
  app.add_option("--mu", mu_specs, "Perturbation sizes, values or a:b:step (repeatable)")->delimiter(',');
  app.add_option("--gaps", gap_specs, "Bubble gaps, values or a:b:step (repeatable)")->delimiter(',');
  app.add_option("--ell", cfg.ells, "Degrees for the spectrum command")->delimiter(',');
  app.add_option("--k", cfg.k, "Eigenvalues per degree");
  app.add_flag("--detail", cfg.detail, "Sharpness: one row per mu");
  app.add_option("--zeta", cfg.zeta, "Exponent offset in the interaction weights");
  app.add_option("--samples", cfg.samples, "Random samples for the elementary inequalities");
  app.add_option("--seed", cfg.seed, "Seed for randomized checks");
  app.add_option("--threads", cfg.threads, "Worker threads across (p, n) rows");
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  for (const char* name : {"constants", "sharpness", "spectrum", "interactions", "selftest"})
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });

  CLI11_PARSE(app, argc, argv);

  try {
    auto expand = [](const std::vector<std::string>& specs) {
      std::vector<double> v;
      for (const auto& s : specs)
        for (double x : ckn::parse_range(s)) v.push_back(x);
      return v;
    };
    cfg.p_values = expand(p_specs);
    cfg.mus = expand(mu_specs);
    cfg.gaps = expand(gap_specs);
    cfg.format = format == "json" ? ckn::OutputFormat::json : ckn::OutputFormat::csv;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "cknfs: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      std::cerr << "cknfs: cannot open " << cfg.out << " for writing\n";
      return 1;
    }
    os = &file;
  }
  ckn::Table table;
  bool ok = true;
  try {
    if (cfg.command == "constants") table = ckn::cmd_constants(cfg);
    else if (cfg.command == "sharpness") table = ckn::cmd_sharpness(cfg);
    else if (cfg.command == "spectrum") table = ckn::cmd_spectrum(cfg);
    else if (cfg.command == "interactions") table = ckn::cmd_interactions(cfg);
    else {
      auto r = ckn::cmd_selftest(cfg);
      table = std::move(r.table);
      ok = r.passed;
    }
  } catch (const std::exception& e) {
    std::cerr << "cknfs: " << e.what() << '\n';
    return 2;
  }

  if (cfg.format == ckn::OutputFormat::json) ckn::write_json(*os, table, ckn::make_meta(cfg));
  else ckn::write_csv(*os, table);
  os->flush();
  if (!*os) {
    std::cerr << "cknfs: write failed\n";
    return 1;
  }
  return ok ? 0 : 1;
}
