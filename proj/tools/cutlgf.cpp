// Benchmark driver: convergence studies, cut/sigma sweeps, flat-interface
// symbol tables and a Green's function self test.

#include "cutlgf/bench.hpp"
#include "cutlgf/lgf.hpp"
#include "cutlgf/symbols.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace cutlgf;

// "a:step:b" or a comma separated list.
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
      throw CLI::ValidationError("range", "expected lo:step:hi with step > 0, got " + text);
    const long count = std::lround((parts[2] - parts[0]) / parts[1]);
    for (long k = 0; k <= count; ++k) out.push_back(parts[0] + parts[1] * static_cast<double>(k));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("list", "empty value list");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_values(text)) out.push_back(static_cast<int>(std::lround(v)));
  return out;
}

void open_output(const std::string& path, std::ofstream& file, std::ostream*& out) {
  if (path.empty() || path == "-") {
    out = &std::cout;
    return;
  }
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  out = &file;
}

void print_case(const CaseResult& c) {
  std::cerr << "  N=" << c.spec.N;
  if (c.spec.geometry == Geometry::ShiftedCircle)
    std::cerr << " beta=" << c.spec.beta << " sigma_bulk=" << c.spec.sigma_bulk << " sigma_surface=" << c.spec.sigma_surface;
  if (c.ok) {
    std::cerr << " |gamma2|=" << c.n2 << " cond=" << c.cond;
    if (c.spec.solve) std::cerr << " iter=" << c.iterations << " e_surf_L2=" << c.e_surf_L2;
  } else {
    std::cerr << " FAILED: " << c.error;
  }
  std::cerr << " (" << c.seconds << " s)\n";
}

int lgf_selftest() {
  bool ok = true;
  auto report = [&](const std::string& what, double err, double tol) {
    const bool pass = err <= tol;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << what << ": " << err << " (tol " << tol << ")\n";
  };
  const LgfTable t0 = LgfTable::build(24, 0.0);
  report("g(1,0) = -1/4", std::abs(t0(1, 0) + 0.25), 1e-12);
  report("g(1,1) = -1/pi", std::abs(t0(1, 1) + 1.0 / std::numbers::pi), 1e-12);
  for (double sigma : {0.0, 0.5, 4.0}) {
    const LgfTable t = LgfTable::build(24, sigma);
    double stencil = 0.0, direct = 0.0;
    for (int n = -16; n <= 16; ++n) {
      for (int m = -16; m <= 16; ++m) {
        const double lap = 4 * t(m, n) - t(m + 1, n) - t(m - 1, n) - t(m, n + 1) - t(m, n - 1) + sigma * t(m, n);
        stencil = std::max(stencil, std::abs(lap - (m == 0 && n == 0 ? 1.0 : 0.0)));
        if (m >= 0 && n >= m) direct = std::max(direct, std::abs(t(m, n) - lgf_eval(m, n, sigma)));
      }
    }
    std::ostringstream s;
    s << "sigma h^2 = " << sigma;
    report(s.str() + ": five-point identity", stencil, 1e-12);
    report(s.str() + ": table vs adaptive quadrature", direct, 1e-12);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut-cell Laplace-Beltrami solver with lattice Green's function harmonic extension"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key = value file");
  std::string lgf_cache;
  int threads = 0;
  app.add_option("--lgf-cache", lgf_cache, "Directory for cached Green's function tables");
  app.add_option("--threads", threads, "Worker threads (default: CUTLGF_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  // convergence
  auto* conv = app.add_subcommand("convergence", "Convergence study over a list of meshes");
  std::string conv_geometry = "circle", conv_mode = "F-single", conv_N = "128,256,512", conv_out = "-";
  double conv_tol = 1e-10, conv_ss = 0.0, conv_sb = 0.0, conv_half = 0.0;
  int conv_max_iter = 2000;
  bool conv_no_cond = false;
  conv->add_option("--geometry", conv_geometry, "circle | deformed")
      ->check(CLI::IsMember({"circle", "deformed"}));
  conv->add_option("--mode", conv_mode, "E | F-single | F-double")->check(CLI::IsMember({"E", "F-single", "F-double"}));
  conv->add_option("--N", conv_N, "Comma separated cells per side");
  conv->add_option("--tol", conv_tol, "PCG relative tolerance");
  conv->add_option("--max-iter", conv_max_iter, "PCG iteration cap");
  conv->add_option("--sigma-surface", conv_ss, "Surface reaction coefficient");
  conv->add_option("--sigma-bulk", conv_sb, "Bulk reaction coefficient");
  conv->add_option("--half-width", conv_half, "Box [-a, a]^2 (default 1.2 circle, 1.5 deformed)")
      ->check(CLI::NonNegativeNumber);
  conv->add_flag("--no-cond", conv_no_cond, "Skip the condition number");
  conv->add_option("--out", conv_out, "CSV output path ('-' for stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Condition numbers over circle translations and reaction parameters");
  std::string sw_beta = "-1:0.05:1", sw_sb = "0", sw_ss = "0", sw_N = "128", sw_mode = "F-single", sw_out = "-";
  double sw_half = 0.0;
  sweep->add_option("--beta", sw_beta, "lo:step:hi or list of shifts in [-1, 1]");
  sweep->add_option("--sigma-bulk", sw_sb, "List of bulk reaction coefficients");
  sweep->add_option("--sigma-surface", sw_ss, "List of surface reaction coefficients");
  sweep->add_option("--N", sw_N, "List of cells per side");
  sweep->add_option("--mode", sw_mode, "E | F-single | F-double")->check(CLI::IsMember({"E", "F-single", "F-double"}));
  sweep->add_option("--half-width", sw_half, "Box [-a, a]^2 (default 1.2)")->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", sw_out, "CSV output path ('-' for stdout)");

  // symbols
  auto* sym = app.add_subcommand("symbols", "Flat-interface symbol tables");
  sym->set_help_flag("--help", "Print this help message and exit");
  std::string sym_h = "0.0078125,0.00390625", sym_out = "-";
  double sym_ss = 0.0, sym_sb = 0.0;
  sym->add_option("--h", sym_h, "List of mesh sizes");
  sym->add_option("--sigma-surface", sym_ss, "Surface reaction coefficient");
  sym->add_option("--sigma-bulk", sym_sb, "Bulk reaction coefficient");
  sym->add_option("--out", sym_out, "CSV output path ('-' for stdout)");

  auto* selftest = app.add_subcommand("lgf-selftest", "Check the Green's function tables");

  CLI11_PARSE(app, argc, argv);

  if (threads == 0) {
    if (const char* env = std::getenv("CUTLGF_THREADS")) threads = std::atoi(env);
  }
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (*selftest) return lgf_selftest();

    if (*sym) {
      std::vector<SymbolProfile> profiles;
      for (double h : parse_values(sym_h)) profiles.push_back(symbol_profile(h, sym_ss, sym_sb));
      std::ofstream file;
      std::ostream* out = nullptr;
      open_output(sym_out, file, out);
      write_symbol_csv(*out, profiles);
      for (const auto& p : profiles)
        for (Mode m : {Mode::E, Mode::FSingle, Mode::FDouble})
          std::cerr << "h=" << p.h << " " << to_string(m)
                    << " predicted condition=" << predicted_condition(m, p.h, sym_ss, sym_sb) << '\n';
      return 0;
    }

    if (*conv) {
      ProblemSpec base;
      base.geometry = parse_geometry(conv_geometry);
      base.mode = parse_mode(conv_mode);
      base.tol = conv_tol;
      base.max_iter = conv_max_iter;
      base.sigma_surface = conv_ss;
      base.sigma_bulk = conv_sb;
      base.condition = !conv_no_cond;
      base.half_width = conv_half;
      base.lgf_cache = lgf_cache;
      std::cerr << "convergence: " << conv_geometry << ", " << conv_mode << '\n';
      const ExperimentReport rep = run_convergence(base, parse_ints(conv_N));
      for (const auto& c : rep.cases) print_case(c);
      std::ofstream file;
      std::ostream* out = nullptr;
      open_output(conv_out, file, out);
      write_convergence_csv(*out, rep);
      return rep.all_ok() ? 0 : 1;
    }

    if (*sweep) {
      ProblemSpec base;
      base.mode = parse_mode(sw_mode);
      base.half_width = sw_half;
      base.lgf_cache = lgf_cache;
      SweepGrid grid{parse_values(sw_beta), parse_values(sw_sb), parse_values(sw_ss), parse_ints(sw_N)};
      for (double& b : grid.beta) b = std::round(b * 1e12) / 1e12;
      std::cerr << "sweep: " << grid.beta.size() * grid.sigma_bulk.size() * grid.sigma_surface.size() * grid.N.size()
                << " cases\n";
      const ExperimentReport rep = run_sweep(base, grid);
      for (const auto& c : rep.cases) print_case(c);
      std::ofstream file;
      std::ostream* out = nullptr;
      open_output(sw_out, file, out);
      write_sweep_csv(*out, rep);
      return rep.all_ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
