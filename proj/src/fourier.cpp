#include "bos/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bos/error.hpp"
#include "bos/kernels.hpp"

namespace bos {

FourierVector::FourierVector(int N)
    : N_(N), coeffs_(Eigen::VectorXcd::Zero(2 * N + 1)) {
  if (N < 0) throw Error(ErrorCode::invalid_argument, "negative truncation");
}

FourierVector::FourierVector(int N, Eigen::VectorXcd coeffs)
    : N_(N), coeffs_(std::move(coeffs)) {
  if (N < 0 || coeffs_.size() != 2 * N + 1) {
    throw Error(ErrorCode::dimension_mismatch,
                "coefficient vector length must be 2N + 1");
  }
}

FourierVector FourierVector::constant(int N, cplx value) {
  FourierVector v(N);
  v[0] = value;
  return v;
}

double FourierVector::l2_norm() const {
  return std::sqrt(kTwoPi) * coeffs_.norm();
}

double FourierVector::h1_norm() const {
  double acc = 0.0;
  for (int n = -N_; n <= N_; ++n) {
    acc += (1.0 + double(n) * n) * std::norm((*this)[n]);
  }
  return std::sqrt(kTwoPi * acc);
}

FourierVector FourierVector::resized(int N) const {
  FourierVector out(N);
  const int keep = std::min(N, N_);
  for (int n = -keep; n <= keep; ++n) out[n] = (*this)[n];
  return out;
}

cplx inner(const FourierVector& f, const FourierVector& g) {
  if (f.N() != g.N()) {
    throw Error(ErrorCode::dimension_mismatch, "inner product of mismatched truncations");
  }
  // Eigen's dot conjugates the first argument
  return kTwoPi * g.coeffs().dot(f.coeffs());
}

void GridFunction::validate() const {
  if (nodes.size() != values.size()) {
    throw Error(ErrorCode::invalid_argument, "grid nodes and values differ in length");
  }
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (!(nodes[j] >= -kPi - 1e-12 && nodes[j] <= kPi + 1e-12)) {
      throw Error(ErrorCode::invalid_argument, "grid node outside [-pi, pi]");
    }
    if (j > 0 && !(nodes[j] > nodes[j - 1])) {
      throw Error(ErrorCode::invalid_argument, "grid nodes must be strictly increasing");
    }
  }
}

std::vector<double> uniform_grid(int K) {
  if (K < 1) throw Error(ErrorCode::invalid_argument, "grid size must be positive");
  std::vector<double> x(K);
  for (int j = 0; j < K; ++j) x[j] = -kPi + kTwoPi * j / K;
  return x;
}

GridFunction synthesize(const FourierVector& c, std::span<const double> nodes) {
  GridFunction f;
  f.nodes.assign(nodes.begin(), nodes.end());
  f.values.resize(nodes.size());
  f.validate();
  kernels::omp::synthesize({c.coeffs().data(), std::size_t(c.size())}, c.N(),
                           f.nodes, f.values);
  return f;
}

GridFunction synthesize_uniform(const FourierVector& c, int K) {
  if (K < 2 || K % 2 != 0) throw Error(ErrorCode::invalid_argument, "K must be even and >= 2");
  // on x_j = -pi + 2 pi j / K the modes n and n + K coincide
  FourierVector folded(K / 2);
  for (int n = -c.N(); n <= c.N(); ++n) {
    int r = ((n % K) + K) % K;
    if (r >= K / 2) r -= K;
    folded[r] += c[n];
  }
  return synthesize(folded, uniform_grid(K));
}

cplx evaluate(const FourierVector& c, double x) {
  cplx out;
  const double node[1] = {x};
  kernels::serial::synthesize({c.coeffs().data(), std::size_t(c.size())},
                              c.N(), node, {&out, 1});
  return out;
}

namespace {

void require_uniform(const GridFunction& f) {
  const std::size_t K = f.size();
  const double h = kTwoPi / double(K);
  for (std::size_t j = 0; j < K; ++j) {
    if (std::abs(f.nodes[j] - (f.nodes[0] + h * double(j))) > 1e-9) {
      throw Error(ErrorCode::invalid_argument,
                  "analysis requires a uniform periodic grid (spacing 2 pi / K)");
    }
  }
}

}  // namespace

FourierVector analyze(const GridFunction& f, int N) {
  f.validate();
  if (N < 0) throw Error(ErrorCode::invalid_argument, "negative truncation");
  if (f.size() < std::size_t(2 * N + 1)) {
    std::ostringstream msg;
    msg << "grid of " << f.size() << " points is too coarse for N = " << N
        << " (need >= " << 2 * N + 1 << ")";
    throw Error(ErrorCode::aliasing, msg.str());
  }
  require_uniform(f);
  FourierVector c(N);
  kernels::omp::analyze(f.values, f.nodes, N,
                        {c.coeffs().data(), std::size_t(c.size())});
  return c;
}

AnalysisReport analyze_checked(const GridFunction& f, int N, double tol) {
  AnalysisReport r{analyze(f, N)};
  const GridFunction back = synthesize(r.coeffs, f.nodes);
  double scale = 0.0;
  double resid = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    scale = std::max(scale, std::abs(f.values[j]));
    resid = std::max(resid, std::abs(f.values[j] - back.values[j]));
  }
  r.alias_residual = scale > 0.0 ? resid / scale : resid;
  r.aliased = r.alias_residual > tol;
  return r;
}

double grid_l2_norm(const GridFunction& f) {
  double acc = 0.0;
  for (const auto& v : f.values) acc += std::norm(v);
  return std::sqrt(acc * kTwoPi / double(f.size()));
}

void write_grid_csv(std::ostream& os, const GridFunction& f) {
  os << "x,re,im\n" << std::setprecision(17);
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << f.nodes[j] << ',' << f.values[j].real() << ',' << f.values[j].imag()
       << '\n';
  }
}

GridFunction read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::io, "empty grid CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,re,im") {
    throw Error(ErrorCode::io, "grid CSV header must be `x,re,im`");
  }
  GridFunction f;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    if (!(ls >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw Error(ErrorCode::io, "malformed grid CSV row " + std::to_string(row));
    }
    f.nodes.push_back(x);
    f.values.emplace_back(re, im);
  }
  f.validate();
  return f;
}

void write_grid_csv(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path);
  write_grid_csv(os, f);
}

GridFunction read_grid_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path);
  return read_grid_csv(is);
}

}  // namespace bos
