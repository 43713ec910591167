#include "brl/discretize.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <exception>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <thread>

namespace brl {

MidpointRule midpoint_rule(double a, double b, int m) {
  if (m <= 0) throw std::invalid_argument("midpoint_rule: need at least one cell");
  if (!(a < b)) throw std::invalid_argument("midpoint_rule: degenerate interval");
  const double h = (b - a) / m;
  MidpointRule r;
  r.nodes.resize(m);
  for (int i = 0; i < m; ++i) r.nodes(i) = a + (i + 0.5) * h;
  r.weights = Eigen::VectorXd::Constant(m, h);
  return r;
}

Eigen::Index BoxGrid::flat_index(const std::vector<int>& cell) const {
  Eigen::Index idx = 0;
  for (std::size_t a = 0; a < points_per_dim.size(); ++a) idx = idx * points_per_dim[a] + cell[a];
  return idx;
}

BoxGrid make_grid(const Box& bounds, const std::vector<int>& points_per_dim, std::size_t cap) {
  bounds.validate();
  const int d = bounds.dim();
  if (static_cast<int>(points_per_dim.size()) != d)
    throw std::invalid_argument("make_grid: points_per_dim must have one entry per axis");
  std::size_t total = 1;
  for (int m : points_per_dim) {
    if (m <= 0) throw std::invalid_argument("make_grid: points_per_dim must be positive");
    total *= static_cast<std::size_t>(m);
    if (total > cap)
      throw std::invalid_argument("make_grid: node count exceeds the cap of " + std::to_string(cap));
  }

  std::vector<MidpointRule> rules;
  for (int a = 0; a < d; ++a) rules.push_back(midpoint_rule(bounds.lo(a), bounds.hi(a), points_per_dim[a]));

  BoxGrid g;
  g.bounds = bounds;
  g.points_per_dim = points_per_dim;
  g.nodes.resize(d, static_cast<Eigen::Index>(total));
  g.cell_weights.resize(static_cast<Eigen::Index>(total));
  g.spacing.resize(d);
  for (int a = 0; a < d; ++a) g.spacing(a) = rules[a].weights(0);

  std::vector<int> cell(d, 0);
  for (std::size_t i = 0; i < total; ++i) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      g.nodes(a, static_cast<Eigen::Index>(i)) = rules[a].nodes(cell[a]);
      w *= rules[a].weights(cell[a]);
    }
    g.cell_weights(static_cast<Eigen::Index>(i)) = w;
    for (int a = d - 1; a >= 0; --a) {
      if (++cell[a] < points_per_dim[a]) break;
      cell[a] = 0;
    }
  }
  return g;
}

BoxGrid make_grid(const Box& bounds, int points_per_dim, std::size_t cap) {
  return make_grid(bounds, std::vector<int>(bounds.dim(), points_per_dim), cap);
}

const char* to_string(SpaceTag t) { return t == SpaceTag::weighted ? "weighted" : "unweighted"; }

Eigen::VectorXd OperatorMatrix::measure_weights() const {
  const Eigen::Index last = grid.dim() - 1;
  const double e = measure_exponent();
  Eigen::VectorXd nu = grid.cell_weights;
  if (e != 0.0)
    for (Eigen::Index i = 0; i < nu.size(); ++i) nu(i) *= std::pow(grid.nodes(last, i), e);
  return nu;
}

Eigen::MatrixXd OperatorMatrix::action() const {
  const Eigen::ArrayXd s = measure_weights().array().sqrt();
  return (s.inverse().matrix().asDiagonal() * entries) * s.matrix().asDiagonal();
}

namespace detail {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_rows(Eigen::Index count, int threads, const std::function<void(Eigen::Index)>& body) {
  const int t = static_cast<int>(std::min<Eigen::Index>(resolve_threads(threads), std::max<Eigen::Index>(count, 1)));
  std::vector<std::exception_ptr> errors(t);
  std::vector<Eigen::Index> failed_at(t, count);
  auto worker = [&](int id) {
    try {
      for (Eigen::Index i = id; i < count; i += t) {
        failed_at[id] = i;
        body(i);
      }
      failed_at[id] = count;
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (t == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < t; ++id) pool.emplace_back(worker, id);
    for (auto& th : pool) th.join();
  }
  int first = -1;
  for (int id = 0; id < t; ++id)
    if (errors[id] && (first < 0 || failed_at[id] < failed_at[first])) first = id;
  if (first >= 0) std::rethrow_exception(errors[first]);
}

}  // namespace detail

namespace {

double sub_cell_mass(const KernelFn& kernel, const BoxGrid& g, Eigen::Index i, double exponent) {
  // split cell i into 2^d halves and sum |K|^2 nu_a nu_b over distinct sub-cell centers
  const int d = g.dim();
  const int parts = 1 << d;
  Eigen::MatrixXd c(d, parts);
  Eigen::VectorXd nu(parts);
  for (int s = 0; s < parts; ++s) {
    for (int a = 0; a < d; ++a) c(a, s) = g.nodes(a, i) + ((s >> a) & 1 ? 0.25 : -0.25) * g.spacing(a);
    nu(s) = g.cell_weights(i) / parts * (exponent != 0.0 ? std::pow(c(d - 1, s), exponent) : 1.0);
  }
  double mass = 0;
  for (int s = 0; s < parts; ++s)
    for (int t = 0; t < parts; ++t) {
      if (s == t) continue;
      const double k = kernel(c.col(s), c.col(t));
      mass += k * k * nu(s) * nu(t);
    }
  return mass;
}

}  // namespace

OperatorMatrix assemble(const KernelFn& kernel, const BoxGrid& grid, SpaceTag space, double lambda,
                        const AssemblyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  OperatorMatrix out;
  out.grid = grid;
  out.space = space;
  out.lambda = lambda;
  const Eigen::Index N = grid.size();
  const Eigen::VectorXd s = out.measure_weights().array().sqrt();
  out.entries.setZero(N, N);
  const bool zero_diag = opts.diagonal == DiagonalRule::zero;
  const bool bias = zero_diag && opts.estimate_bias;
  Eigen::VectorXd diag_mass = Eigen::VectorXd::Zero(N);

  detail::parallel_rows(N, opts.threads, [&](Eigen::Index i) {
    Eigen::Index j = 0;
    try {
      for (j = 0; j < N; ++j) {
        if (i == j && zero_diag) continue;
        out.entries(i, j) = kernel(grid.node(i), grid.node(j)) * s(i) * s(j);
      }
      if (bias) {
        j = i;
        diag_mass(i) = sub_cell_mass(kernel, grid, i, out.measure_exponent());
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("assemble: kernel failed at nodes (" + std::to_string(i) + ", " + std::to_string(j) +
                               "): " + e.what());
    }
  });

  if (bias) {
    const double fro = out.entries.norm();
    const double m = std::sqrt(diag_mass.sum());
    out.report.diagonal_bias = fro > 0.0 ? m / fro : (m > 0.0 ? INFINITY : 0.0);
  }
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

OperatorMatrix conjugate_weight(const OperatorMatrix& a, WeightDirection direction) {
  const bool to_unweighted = direction == WeightDirection::to_unweighted;
  if (to_unweighted != (a.space == SpaceTag::weighted))
    throw std::invalid_argument(std::string("conjugate_weight: matrix is already ") + to_string(a.space));
  OperatorMatrix out = a;
  out.space = to_unweighted ? SpaceTag::unweighted : SpaceTag::weighted;
  if (a.lambda == 0.0) return out;

  // action T' = D T D^{-1} with D = diag(x^{+-lambda}); entries = S' T' S'^{-1}, S = diag(sqrt(nu))
  const Eigen::Index last = a.grid.dim() - 1;
  const double sign = to_unweighted ? 1.0 : -1.0;
  const Eigen::VectorXd s_old = a.measure_weights().array().sqrt();
  const Eigen::VectorXd s_new = out.measure_weights().array().sqrt();
  Eigen::VectorXd left(s_old.size()), right(s_old.size());
  for (Eigen::Index i = 0; i < s_old.size(); ++i) {
    const double d = std::pow(a.grid.nodes(last, i), sign * a.lambda);
    left(i) = d * s_new(i) / s_old(i);
    right(i) = s_old(i) / (d * s_new(i));
  }
  out.entries = left.asDiagonal() * a.entries * right.asDiagonal();
  return out;
}

OperatorMatrix schur_apply(const PairSymbol& m, const OperatorMatrix& a, int threads) {
  OperatorMatrix out = a;
  const Eigen::Index N = a.entries.rows();
  detail::parallel_rows(N, threads, [&](Eigen::Index i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      const double v = a.entries(i, j);
      if (v != 0.0) out.entries(i, j) = m(a.grid.node(i), a.grid.node(j)) * v;
    }
  });
  return out;
}

namespace {

constexpr char kMagic[4] = {'B', 'R', 'S', 'L'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "matrix files are little-endian");
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("read_matrix: truncated header");
  return v;
}

}  // namespace

void write_matrix(const OperatorMatrix& a, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_matrix: cannot open " + path.string());
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(a.entries.rows()));
  put<std::uint32_t>(os, a.space == SpaceTag::weighted ? 0u : 1u);
  put<std::uint32_t>(os, 0u);
  put<double>(os, a.lambda);
  os.write(reinterpret_cast<const char*>(a.entries.data()),
           static_cast<std::streamsize>(sizeof(double) * a.entries.size()));
  if (!os) throw std::runtime_error("write_matrix: write failed for " + path.string());

  std::ofstream csv(path.string() + ".nodes.csv");
  csv << "index";
  for (int k = 0; k < a.grid.dim(); ++k) csv << ",x" << k + 1;
  csv << ",cell_weight,measure_weight\n";
  csv << std::setprecision(17);
  const Eigen::VectorXd nu = a.measure_weights();
  for (Eigen::Index i = 0; i < a.grid.size(); ++i) {
    csv << i;
    for (int k = 0; k < a.grid.dim(); ++k) csv << ',' << a.grid.nodes(k, i);
    csv << ',' << a.grid.cell_weights(i) << ',' << nu(i) << '\n';
  }
}

MatrixFile read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_matrix: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("read_matrix: bad magic");
  MatrixFile f;
  f.version = get<std::uint32_t>(is);
  if (f.version != kVersion) throw std::runtime_error("read_matrix: unsupported version");
  const auto dim = get<std::uint64_t>(is);
  f.space = get<std::uint32_t>(is) == 0 ? SpaceTag::weighted : SpaceTag::unweighted;
  (void)get<std::uint32_t>(is);
  f.lambda = get<double>(is);
  f.entries.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  is.read(reinterpret_cast<char*>(f.entries.data()), static_cast<std::streamsize>(sizeof(double) * f.entries.size()));
  if (!is) throw std::runtime_error("read_matrix: truncated data");
  return f;
}

}  // namespace brl
