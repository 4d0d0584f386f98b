// Reference states: symmetric Dicke, antisymmetric singlet, qudit W state and
// the two-qutrit example (|11> + |22> + |13>)/sqrt3.
//
// Amplitudes follow the hilbert basis convention (site 1 most significant).
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lightwit/hilbert.hpp"

namespace lightwit::states {

enum class StateLabel { dicke_symmetric, singlet, w_state, two_qutrit_example, custom };

std::string_view to_string(StateLabel label);
std::optional<StateLabel> parse_label(std::string_view name);

struct NamedState {
  StateLabel label = StateLabel::custom;
  hilbert::StateVector psi;
  double noise = 0.0;  // white-noise weight p applied on top of psi

  int n_sites() const { return psi.n_sites(); }
  int local_dim() const { return psi.local_dim(); }
  hilbert::DensityMatrix density() const;
};

/// (1/sqrt N!) sum over permutations of |s(1) ... s(N)>, with d = N = n.
hilbert::StateVector dicke_symmetric(int n);

/// (1/sqrt N!) sum over permutations of sgn(s) |s(1) ... s(N)>, with d = N = n.
hilbert::StateVector singlet_antisymmetric(int n);

/// One excitation shared equally by all sites and all excited levels 2..d. Requires d >= 3.
hilbert::StateVector w_state(int n, int local_dim);

hilbert::StateVector two_qutrit_example();

/// +1 for even permutations, -1 for odd. `perm` holds 0-based images.
int permutation_parity(std::span<const int> perm);

/// All permutations of {1..n} in lexicographic order (1-based levels).
std::vector<std::vector<int>> permutations(int n);

}  // namespace lightwit::states
