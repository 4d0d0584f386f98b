// Dense multi-qudit linear algebra.
//
// Basis convention: a product state |l_1 l_2 ... l_N> (levels 1..d, sites 1..N)
// lives at flat index sum_eta (l_eta - 1) * d^(N - eta), i.e. site 1 is the most
// significant digit and site N varies fastest. This matches the Kronecker order
// A_1 (x) A_2 (x) ... (x) A_N.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lightwit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace hilbert {

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// d^n as an index type; throws std::overflow_error past 2^31.
std::size_t hilbert_dim(int n_sites, int local_dim);

/// Flat index of the product basis state with 1-based `levels`.
std::size_t basis_index(std::span<const int> levels, int local_dim);

/// 1-based levels of flat basis index `index`.
std::vector<int> basis_levels(std::size_t index, int n_sites, int local_dim);

/// |alpha><beta| on one qudit, 1-based levels.
CMatrix ladder(int alpha, int beta, int local_dim);

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_error(const CMatrix& a);

class StateVector {
public:
  /// Throws std::invalid_argument unless the length is d^N and the norm is 1 within kNormTol.
  StateVector(CVector amplitudes, int n_sites, int local_dim);

  static StateVector normalized(CVector amplitudes, int n_sites, int local_dim);
  static StateVector basis(std::span<const int> levels, int local_dim);

  const CVector& amplitudes() const { return amplitudes_; }
  int n_sites() const { return n_sites_; }
  int local_dim() const { return local_dim_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  cplx amplitude(std::span<const int> levels) const;

private:
  CVector amplitudes_;
  int n_sites_;
  int local_dim_;
};

class DensityMatrix {
public:
  /// Validates hermiticity, unit trace and positivity (smallest eigenvalue >= -kPsdTol).
  DensityMatrix(CMatrix entries, int n_sites, int local_dim);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int n_sites, int local_dim);
  /// Sum_k w_k rho_k; weights must be non-negative and sum to 1.
  static DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> states);

  const CMatrix& entries() const { return entries_; }
  int n_sites() const { return n_sites_; }
  int local_dim() const { return local_dim_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  double purity() const;
  Eigen::VectorXd eigenvalues() const;

private:
  struct Trusted {};
  DensityMatrix(Trusted, CMatrix entries, int n_sites, int local_dim);

  CMatrix entries_;
  int n_sites_;
  int local_dim_;

  friend DensityMatrix mix_white_noise(const StateVector& psi, double p);
};

struct LocalOperator {
  CMatrix matrix;
  int site = 1;  // 1-based
};

/// Sum over sites of one local operator per site.
class CollectiveOperator {
public:
  /// Requires exactly n_sites terms on distinct sites, all of the same dimension.
  CollectiveOperator(std::vector<LocalOperator> terms, int n_sites);

  /// Term eta (0-based) acts on site eta + 1.
  static CollectiveOperator site_sum(std::vector<CMatrix> per_site);

  const std::vector<LocalOperator>& terms() const { return terms_; }
  int n_sites() const { return static_cast<int>(terms_.size()); }
  int local_dim() const { return static_cast<int>(terms_.front().matrix.rows()); }

private:
  std::vector<LocalOperator> terms_;
};

/// identity (x) ... (x) op.matrix (x) ... (x) identity, op.matrix at position op.site.
CMatrix tensor_embed(const LocalOperator& op, int n_sites, int local_dim);

/// Dense d^N x d^N matrix of a collective operator.
CMatrix materialize(const CollectiveOperator& op);

cplx expectation(const DensityMatrix& rho, const CMatrix& op);
cplx expectation(const DensityMatrix& rho, const CollectiveOperator& op);

/// <O^2> - <O>^2 for Hermitian O. Throws std::invalid_argument for non-Hermitian input.
double variance(const DensityMatrix& rho, const CMatrix& op);
double variance(const DensityMatrix& rho, const CollectiveOperator& op);

/// p * I / d^N + (1 - p) |psi><psi|
DensityMatrix mix_white_noise(const StateVector& psi, double p);

/// Tensor product of N independent Haar-random single-qudit states.
/// Generator: std::mt19937_64 seeded with `seed`, complex Gaussian amplitudes
/// from std::normal_distribution<double>, normalized per site.
StateVector random_product_state(std::uint64_t seed, int n_sites, int local_dim);

/// Reduced density matrix on `keep` (1-based, strictly increasing sites), in
/// the same digit order as the full space.
CMatrix reduced_density(const DensityMatrix& rho, std::span<const int> keep);

}  // namespace hilbert
}  // namespace lightwit
