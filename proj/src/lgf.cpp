#include "cutlgf/lgf.hpp"

#include "cutlgf/errors.hpp"
#include "cutlgf/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cutlgf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelNodes = 20;
constexpr int kGradedLevels = 45;

struct Characteristic {
  double alpha;
  double sinh_alpha;
};

// Decaying root of u_{n+1} - 2 cosh(a) u_n + u_{n-1} = 0 with
// cosh a = 2 - cos t + sigma/2, written to keep full precision as t -> 0.
Characteristic characteristic(double theta, double sigma_h2) {
  const double s = std::sin(0.5 * theta);
  const double t = 2.0 * s * s + 0.5 * sigma_h2;
  const double sh = std::sqrt(t * (2.0 + t));
  return {std::log1p(t + sh), sh};
}

// Panel breakpoints on [0, pi]: uniform panels short enough for cos(max_freq t),
// plus geometric grading into t = 0 for near-singular screened integrands.
std::vector<double> panel_breaks(int max_freq) {
  const double width = std::min(0.25, 4.0 / (max_freq + 1));
  std::vector<double> breaks{0.0};
  double a = width * std::ldexp(1.0, -kGradedLevels);
  for (int k = 0; k < kGradedLevels; ++k) {
    breaks.push_back(a);
    a *= 2.0;
  }
  const int uniform = static_cast<int>(std::ceil((kPi - width) / width));
  for (int k = 0; k <= uniform; ++k) breaks.push_back(width + (kPi - width) * k / uniform);
  return breaks;
}

// Integrand of the single-integral representation (without the 1/pi factor).
double integrand(double theta, int m, int n, double sigma_h2) {
  const auto [alpha, sh] = characteristic(theta, sigma_h2);
  if (sigma_h2 > 0.0) return std::cos(m * theta) * std::exp(-n * alpha) / (2.0 * sh);
  if (sh == 0.0) return -0.5 * n;
  const double sm = std::sin(0.5 * m * theta);
  return (std::cos(m * theta) * std::expm1(-n * alpha) - 2.0 * sm * sm) / (2.0 * sh);
}

}  // namespace

double lgf_eval(int m, int n, double sigma_h2) {
  if (!(sigma_h2 >= 0.0)) throw std::invalid_argument("lgf_eval: sigma_h2 must be non-negative");
  m = std::abs(m);
  n = std::abs(n);
  if (sigma_h2 == 0.0 && m == 0 && n == 0) return 0.0;
  auto f = [&](double t) { return integrand(t, m, n, sigma_h2); };
  const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kPi, 12, 1e-13);
  return total / kPi;
}

LgfTable LgfTable::build(int window, double sigma_h2) {
  if (window < 1) throw std::invalid_argument("LgfTable::build: window must be >= 1");
  if (!(sigma_h2 >= 0.0)) throw std::invalid_argument("LgfTable::build: sigma_h2 must be non-negative");

  // Shared composite Gauss-Legendre nodes turn the whole quadrant into
  // G = C^T diag(W) E with C(k, m) = cos(m t_k) and E(k, n) = exp(-n a(t_k)).
  const auto breaks = panel_breaks(window);
  const QuadratureRule& rule = gauss_legendre(kPanelNodes);
  const Eigen::Index nodes = static_cast<Eigen::Index>((breaks.size() - 1) * rule.nodes.size());
  const Eigen::Index cols = window + 1;
  const bool free_space = sigma_h2 == 0.0;

  Eigen::MatrixXd cw(nodes, cols);  // W_k cos(m t_k)
  Eigen::MatrixXd ex(nodes, cols);  // exp(-n a_k), or expm1 for the regularized case
  Eigen::VectorXd weights(nodes);
  Eigen::MatrixXd cm1(free_space ? nodes : 0, free_space ? cols : 0);  // cos(m t_k) - 1

  Eigen::Index k = 0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q, ++k) {
      const double theta = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
      const double w = 0.5 * (hi - lo) * rule.weights[q];
      const auto [alpha, sh] = characteristic(theta, sigma_h2);
      const double weight = w / (2.0 * sh * kPi);
      weights(k) = weight;
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double c = std::cos(static_cast<double>(j) * theta);
        cw(k, j) = weight * c;
        ex(k, j) = free_space ? std::expm1(-static_cast<double>(j) * alpha) : std::exp(-static_cast<double>(j) * alpha);
        if (free_space) {
          const double s = std::sin(0.5 * static_cast<double>(j) * theta);
          cm1(k, j) = -2.0 * s * s;
        }
      }
    }
  }

  Eigen::MatrixXd g = cw.transpose() * ex;  // g(m, n) at (m, n)
  if (free_space) {
    const Eigen::VectorXd zero_mode = cm1.transpose() * weights;
    g.colwise() += zero_mode;
  }
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());

  LgfTable table;
  table.window_ = window;
  table.sigma_h2_ = sigma_h2;
  table.values_.resize(static_cast<std::size_t>(cols) * cols);
  for (Eigen::Index n = 0; n < cols; ++n)
    for (Eigen::Index m = 0; m < cols; ++m) table.values_[n * cols + m] = sym(m, n);
  if (free_space) table.values_[0] = 0.0;
  return table;
}

LgfTable LgfTable::shifted(double c) const {
  LgfTable out = *this;
  for (double& v : out.values_) v += c;
  return out;
}

void LgfTable::throw_outside(int m, int n) const {
  std::ostringstream s;
  s << "lattice offset (" << m << ", " << n << ") outside Green's function window " << window_;
  throw WindowTooSmall(s.str());
}

namespace {
constexpr char kMagic[8] = {'C', 'U', 'T', 'L', 'G', 'F', '0', '1'};
}

void LgfTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write LGF cache " + path);
  const std::int32_t w = window_;
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&w), sizeof w);
  out.write(reinterpret_cast<const char*>(&sigma_h2_), sizeof sigma_h2_);
  out.write(reinterpret_cast<const char*>(values_.data()), static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

std::optional<LgfTable> LgfTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  std::int32_t w = 0;
  double sigma = 0.0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&w), sizeof w) || !in.read(reinterpret_cast<char*>(&sigma), sizeof sigma))
    return std::nullopt;
  if (w < 1) return std::nullopt;
  LgfTable t;
  t.window_ = w;
  t.sigma_h2_ = sigma;
  t.values_.resize(static_cast<std::size_t>(w + 1) * (w + 1));
  if (!in.read(reinterpret_cast<char*>(t.values_.data()), static_cast<std::streamsize>(t.values_.size() * sizeof(double))))
    return std::nullopt;
  return t;
}

LgfTable LgfTable::cached(const std::string& cache_dir, int window, double sigma_h2) {
  if (cache_dir.empty()) return build(window, sigma_h2);
  std::filesystem::create_directories(cache_dir);
  std::ostringstream name;
  name << "lgf_" << std::hex << std::bit_cast<std::uint64_t>(sigma_h2) << ".bin";
  const std::string path = (std::filesystem::path(cache_dir) / name.str()).string();
  if (auto t = load(path); t && t->sigma_h2_ == sigma_h2 && t->window_ >= window) return *t;
  LgfTable t = build(window, sigma_h2);
  t.save(path);
  return t;
}

int default_window(const CutTopology& topo) {
  int imin = topo.grid.nx, imax = 0, jmin = topo.grid.ny, jmax = 0;
  for (const auto* set : {&topo.gamma1, &topo.gamma2, &topo.gamma3}) {
    for (const auto& v : *set) {
      imin = std::min(imin, v.i);
      imax = std::max(imax, v.i);
      jmin = std::min(jmin, v.j);
      jmax = std::max(jmax, v.j);
    }
  }
  return std::max(imax - imin, jmax - jmin) + 4;
}

LatticeField particular_solution(const ScalarField& f, const CutTopology& topo, const LgfTable& table) {
  const Grid& grid = topo.grid;
  const int nv = grid.num_vertices();
  const double h2 = grid.h * grid.h;

  // Sources: interior vertices and the exterior active strip.
  std::vector<double> src(nv, 0.0);
  std::vector<char> is_src(nv, 0);
  for (int id = 0; id < nv; ++id) {
    if (topo.vertex_psi[id] <= 0.0 || topo.vertex_class[id] != VertexClass::Inactive) {
      is_src[id] = 1;
      src[id] = h2 * f(grid.vertex(grid.vertex_at(id)));
    }
  }
  // Per-row source range.
  std::vector<int> lo(grid.ny + 1, grid.nx + 1), hi(grid.ny + 1, -1);
  for (int id = 0; id < nv; ++id) {
    if (!is_src[id]) continue;
    const LatticeIndex v = grid.vertex_at(id);
    lo[v.j] = std::min(lo[v.j], v.i);
    hi[v.j] = std::max(hi[v.j], v.i);
  }

  LatticeField out;
  out.grid = grid;
  out.values.assign(nv, 0.0);
  out.defined.assign(nv, 0);
  std::vector<int> targets;
  for (int id = 0; id < nv; ++id) {
    const LatticeIndex v = grid.vertex_at(id);
    bool near = is_src[id];
    for (auto d : kFivePoint) {
      const LatticeIndex w{v.i + d.i, v.j + d.j};
      near = near || (grid.contains(w) && is_src[grid.vertex_id(w)]);
    }
    if (near) targets.push_back(id);
  }
  // Window check once, on the extreme offsets.
  int reach = 0;
  for (int j = 0; j <= grid.ny; ++j) {
    if (hi[j] < 0) continue;
    for (int id : targets) {
      const LatticeIndex t = grid.vertex_at(id);
      reach = std::max({reach, std::abs(t.j - j), std::abs(t.i - lo[j]), std::abs(t.i - hi[j])});
    }
  }
  if (reach > table.window()) (void)table(reach, 0);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const LatticeIndex t = grid.vertex_at(targets[k]);
    double acc = 0.0;
    for (int j = 0; j <= grid.ny; ++j) {
      if (hi[j] < 0) continue;
      const double* g = table.row(std::abs(t.j - j));
      const double* s = src.data() + static_cast<std::size_t>(j) * (grid.nx + 1);
      for (int i = lo[j]; i <= hi[j]; ++i) acc += g[std::abs(t.i - i)] * s[i];
    }
    out.values[targets[k]] = acc;
    out.defined[targets[k]] = 1;
  }
  return out;
}

}  // namespace cutlgf
