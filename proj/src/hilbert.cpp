#include "lightwit/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace lightwit::hilbert {

namespace {

void require_dims(int n_sites, int local_dim) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  if (local_dim < 2) throw std::invalid_argument("local_dim must be >= 2");
}

}  // namespace

std::size_t hilbert_dim(int n_sites, int local_dim) {
  require_dims(n_sites, local_dim);
  std::size_t dim = 1;
  for (int i = 0; i < n_sites; ++i) {
    dim *= static_cast<std::size_t>(local_dim);
    if (dim > (std::size_t{1} << 31)) throw std::overflow_error("Hilbert space too large for dense storage");
  }
  return dim;
}

std::size_t basis_index(std::span<const int> levels, int local_dim) {
  std::size_t index = 0;
  for (int level : levels) {
    if (level < 1 || level > local_dim)
      throw std::out_of_range("level " + std::to_string(level) + " outside [1, " + std::to_string(local_dim) + "]");
    index = index * static_cast<std::size_t>(local_dim) + static_cast<std::size_t>(level - 1);
  }
  return index;
}

std::vector<int> basis_levels(std::size_t index, int n_sites, int local_dim) {
  std::vector<int> levels(static_cast<std::size_t>(n_sites));
  for (int site = n_sites - 1; site >= 0; --site) {
    levels[static_cast<std::size_t>(site)] = static_cast<int>(index % static_cast<std::size_t>(local_dim)) + 1;
    index /= static_cast<std::size_t>(local_dim);
  }
  return levels;
}

CMatrix ladder(int alpha, int beta, int local_dim) {
  if (alpha < 1 || alpha > local_dim || beta < 1 || beta > local_dim)
    throw std::out_of_range("ladder level out of range");
  CMatrix m = CMatrix::Zero(local_dim, local_dim);
  m(alpha - 1, beta - 1) = 1.0;
  return m;
}

double hermiticity_error(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(CVector amplitudes, int n_sites, int local_dim)
    : amplitudes_(std::move(amplitudes)), n_sites_(n_sites), local_dim_(local_dim) {
  if (static_cast<std::size_t>(amplitudes_.size()) != hilbert_dim(n_sites, local_dim))
    throw std::invalid_argument("state vector length " + std::to_string(amplitudes_.size()) + " != d^N");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTol)
    throw std::invalid_argument("state vector not normalized (norm " + std::to_string(norm) + ")");
}

StateVector StateVector::normalized(CVector amplitudes, int n_sites, int local_dim) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  amplitudes /= norm;
  return StateVector(std::move(amplitudes), n_sites, local_dim);
}

StateVector StateVector::basis(std::span<const int> levels, int local_dim) {
  const int n = static_cast<int>(levels.size());
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(hilbert_dim(n, local_dim)));
  amps(static_cast<Eigen::Index>(basis_index(levels, local_dim))) = 1.0;
  return StateVector(std::move(amps), n, local_dim);
}

cplx StateVector::amplitude(std::span<const int> levels) const {
  if (static_cast<int>(levels.size()) != n_sites_) throw std::invalid_argument("level count != n_sites");
  return amplitudes_(static_cast<Eigen::Index>(basis_index(levels, local_dim_)));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix entries, int n_sites, int local_dim)
    : entries_(std::move(entries)), n_sites_(n_sites), local_dim_(local_dim) {
  const auto dim = hilbert_dim(n_sites, local_dim);
  if (static_cast<std::size_t>(entries_.rows()) != dim || static_cast<std::size_t>(entries_.cols()) != dim)
    throw std::invalid_argument("density matrix is not d^N x d^N");
  if (hermiticity_error(entries_) > kHermitianTol) throw std::invalid_argument("density matrix is not Hermitian");
  const cplx tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) throw std::invalid_argument("density matrix trace != 1");
  if (eigenvalues().minCoeff() < -kPsdTol) throw std::invalid_argument("density matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(Trusted, CMatrix entries, int n_sites, int local_dim)
    : entries_(std::move(entries)), n_sites_(n_sites), local_dim_(local_dim) {}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  CMatrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(Trusted{}, std::move(rho), psi.n_sites(), psi.local_dim());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_sites, int local_dim) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n_sites, local_dim));
  CMatrix rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(Trusted{}, std::move(rho), n_sites, local_dim);
}

DensityMatrix DensityMatrix::mixture(std::span<const double> weights, std::span<const DensityMatrix> states) {
  if (weights.size() != states.size() || states.empty()) throw std::invalid_argument("mixture: weight/state count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kTraceTol) throw std::invalid_argument("mixture: weights do not sum to 1");
  const int n = states.front().n_sites();
  const int d = states.front().local_dim();
  CMatrix rho = CMatrix::Zero(states.front().entries().rows(), states.front().entries().cols());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].n_sites() != n || states[k].local_dim() != d) throw std::invalid_argument("mixture: dimension mismatch");
    rho += weights[k] * states[k].entries();
  }
  return DensityMatrix(Trusted{}, std::move(rho), n, d);
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// ---------------------------------------------------------------------------
// Operators

CollectiveOperator::CollectiveOperator(std::vector<LocalOperator> terms, int n_sites) : terms_(std::move(terms)) {
  if (static_cast<int>(terms_.size()) != n_sites) throw std::invalid_argument("collective operator needs one term per site");
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.site < b.site; });
  for (int i = 0; i < n_sites; ++i) {
    if (terms_[static_cast<std::size_t>(i)].site != i + 1)
      throw std::invalid_argument("collective operator sites must be exactly 1..N");
    const auto& m = terms_[static_cast<std::size_t>(i)].matrix;
    if (m.rows() != m.cols() || m.rows() != terms_.front().matrix.rows())
      throw std::invalid_argument("collective operator terms must share one square dimension");
  }
}

CollectiveOperator CollectiveOperator::site_sum(std::vector<CMatrix> per_site) {
  std::vector<LocalOperator> terms;
  terms.reserve(per_site.size());
  int site = 1;
  for (auto& m : per_site) terms.push_back(LocalOperator{std::move(m), site++});
  const int n = static_cast<int>(terms.size());
  return CollectiveOperator(std::move(terms), n);
}

CMatrix tensor_embed(const LocalOperator& op, int n_sites, int local_dim) {
  require_dims(n_sites, local_dim);
  if (op.site < 1 || op.site > n_sites)
    throw std::out_of_range("site " + std::to_string(op.site) + " outside [1, " + std::to_string(n_sites) + "]");
  if (op.matrix.rows() != local_dim || op.matrix.cols() != local_dim)
    throw std::invalid_argument("local operator is not d x d");

  const auto left = static_cast<Eigen::Index>(hilbert_dim(op.site, local_dim) / static_cast<std::size_t>(local_dim));
  const auto right = static_cast<Eigen::Index>(hilbert_dim(n_sites - op.site + 1, local_dim) / static_cast<std::size_t>(local_dim));
  const Eigen::Index d = local_dim;
  const Eigen::Index dim = left * d * right;

  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index l = 0; l < left; ++l)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        const cplx v = op.matrix(a, b);
        if (v == cplx{}) continue;
        for (Eigen::Index r = 0; r < right; ++r) out((l * d + a) * right + r, (l * d + b) * right + r) = v;
      }
  return out;
}

CMatrix materialize(const CollectiveOperator& op) {
  const int n = op.n_sites();
  const int d = op.local_dim();
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n, d));
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& term : op.terms()) out += tensor_embed(term, n, d);
  return out;
}

cplx expectation(const DensityMatrix& rho, const CMatrix& op) {
  if (op.rows() != rho.entries().rows() || op.cols() != rho.entries().cols())
    throw std::invalid_argument("expectation: operator dimension does not match state");
  // tr(rho O) = sum_ij rho_ij O_ji
  return (rho.entries().transpose().cwiseProduct(op)).sum();
}

cplx expectation(const DensityMatrix& rho, const CollectiveOperator& op) {
  if (op.n_sites() != rho.n_sites() || op.local_dim() != rho.local_dim())
    throw std::invalid_argument("expectation: collective operator does not match state");
  return expectation(rho, materialize(op));
}

double variance(const DensityMatrix& rho, const CMatrix& op) {
  if (hermiticity_error(op) > kHermitianTol) throw std::invalid_argument("variance: operator is not Hermitian");
  const double mean = expectation(rho, op).real();
  const CMatrix sq = op * op;
  return expectation(rho, sq).real() - mean * mean;
}

double variance(const DensityMatrix& rho, const CollectiveOperator& op) {
  if (op.n_sites() != rho.n_sites() || op.local_dim() != rho.local_dim())
    throw std::invalid_argument("variance: collective operator does not match state");
  return variance(rho, materialize(op));
}

DensityMatrix mix_white_noise(const StateVector& psi, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise p must lie in [0, 1]");
  const auto dim = static_cast<Eigen::Index>(psi.dim());
  CMatrix rho = (1.0 - p) * (psi.amplitudes() * psi.amplitudes().adjoint());
  rho.diagonal().array() += p / static_cast<double>(dim);
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(rho), psi.n_sites(), psi.local_dim());
}

StateVector random_product_state(std::uint64_t seed, int n_sites, int local_dim) {
  require_dims(n_sites, local_dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector state = CVector::Ones(1);
  for (int site = 0; site < n_sites; ++site) {
    CVector local(local_dim);
    for (int k = 0; k < local_dim; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      local(k) = cplx(re, im);
    }
    local.normalize();
    CVector next(state.size() * local_dim);
    for (Eigen::Index i = 0; i < state.size(); ++i) next.segment(i * local_dim, local_dim) = state(i) * local;
    state = std::move(next);
  }
  return StateVector::normalized(std::move(state), n_sites, local_dim);
}

CMatrix reduced_density(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_sites();
  const int d = rho.local_dim();
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > n) throw std::out_of_range("reduced_density: site out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) throw std::invalid_argument("reduced_density: sites must be strictly increasing");
  }
  const int k = static_cast<int>(keep.size());
  const auto kept_dim = static_cast<Eigen::Index>(k == 0 ? 1 : hilbert_dim(k, d));

  // strides of each site in the flat index
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  std::size_t s = 1;
  for (int site = n - 1; site >= 0; --site) {
    stride[static_cast<std::size_t>(site)] = s;
    s *= static_cast<std::size_t>(d);
  }
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int site : keep) kept[static_cast<std::size_t>(site - 1)] = true;
  std::vector<int> traced;
  for (int site = 0; site < n; ++site)
    if (!kept[static_cast<std::size_t>(site)]) traced.push_back(site);

  const std::size_t env_dim = traced.empty() ? 1 : hilbert_dim(static_cast<int>(traced.size()), d);
  auto offset_of = [&](std::size_t digits, std::span<const int> sites) {
    std::size_t off = 0;
    for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
      off += (digits % static_cast<std::size_t>(d)) * stride[static_cast<std::size_t>(sites[static_cast<std::size_t>(i)])];
      digits /= static_cast<std::size_t>(d);
    }
    return off;
  };
  std::vector<int> keep0(keep.begin(), keep.end());
  for (auto& site : keep0) site -= 1;

  std::vector<std::size_t> kept_offset(static_cast<std::size_t>(kept_dim));
  for (Eigen::Index a = 0; a < kept_dim; ++a) kept_offset[static_cast<std::size_t>(a)] = offset_of(static_cast<std::size_t>(a), keep0);

  CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
  const auto& m = rho.entries();
  for (std::size_t e = 0; e < env_dim; ++e) {
    const std::size_t env_off = offset_of(e, traced);
    for (Eigen::Index a = 0; a < kept_dim; ++a)
      for (Eigen::Index b = 0; b < kept_dim; ++b)
        out(a, b) += m(static_cast<Eigen::Index>(env_off + kept_offset[static_cast<std::size_t>(a)]),
                       static_cast<Eigen::Index>(env_off + kept_offset[static_cast<std::size_t>(b)]));
  }
  return out;
}

}  // namespace lightwit::hilbert
