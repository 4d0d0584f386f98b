#include "lightwit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lightwit::states {

std::string_view to_string(StateLabel label) {
  switch (label) {
    case StateLabel::dicke_symmetric: return "dicke_symmetric";
    case StateLabel::singlet: return "singlet";
    case StateLabel::w_state: return "w_state";
    case StateLabel::two_qutrit_example: return "two_qutrit_example";
    case StateLabel::custom: return "custom";
  }
  return "?";
}

std::optional<StateLabel> parse_label(std::string_view name) {
  for (auto label : {StateLabel::dicke_symmetric, StateLabel::singlet, StateLabel::w_state,
                     StateLabel::two_qutrit_example, StateLabel::custom})
    if (to_string(label) == name) return label;
  return std::nullopt;
}

hilbert::DensityMatrix NamedState::density() const {
  if (noise == 0.0) return hilbert::DensityMatrix::pure(psi);
  return hilbert::mix_white_noise(psi, noise);
}

int permutation_parity(std::span<const int> perm) {
  // count inversions; n is tiny
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace {

hilbert::StateVector permutation_state(int n, bool antisymmetric) {
  if (n < 2) throw std::invalid_argument("permutation states need n >= 2");
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(hilbert::hilbert_dim(n, n)));
  const auto perms = permutations(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(perms.size()));
  for (const auto& p : perms) {
    const double sign = antisymmetric ? permutation_parity(p) : 1;
    amps(static_cast<Eigen::Index>(hilbert::basis_index(p, n))) = sign * norm;
  }
  return hilbert::StateVector::normalized(std::move(amps), n, n);
}

}  // namespace

hilbert::StateVector dicke_symmetric(int n) { return permutation_state(n, false); }

hilbert::StateVector singlet_antisymmetric(int n) { return permutation_state(n, true); }

hilbert::StateVector w_state(int n, int local_dim) {
  if (n < 2) throw std::invalid_argument("W state needs n >= 2");
  if (local_dim < 3) throw std::invalid_argument("W state needs d >= 3");
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(hilbert::hilbert_dim(n, local_dim)));
  std::vector<int> levels(static_cast<std::size_t>(n), 1);
  for (int site = 0; site < n; ++site) {
    for (int j = 2; j <= local_dim; ++j) {
      levels[static_cast<std::size_t>(site)] = j;
      amps(static_cast<Eigen::Index>(hilbert::basis_index(levels, local_dim))) = 1.0;
    }
    levels[static_cast<std::size_t>(site)] = 1;
  }
  return hilbert::StateVector::normalized(std::move(amps), n, local_dim);
}

hilbert::StateVector two_qutrit_example() {
  CVector amps = CVector::Zero(9);
  for (auto levels : {std::vector<int>{1, 1}, std::vector<int>{2, 2}, std::vector<int>{1, 3}})
    amps(static_cast<Eigen::Index>(hilbert::basis_index(levels, 3))) = 1.0;
  return hilbert::StateVector::normalized(std::move(amps), 2, 3);
}

}  // namespace lightwit::states
