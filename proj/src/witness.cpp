#include "lightwit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lightwit::witness {

MomentSet::MomentSet(int n_sites, int local_dim) : n_(n_sites), d_(local_dim) {
  const loos::LooIndexMap index(local_dim);
  for (Family f : loos::kFamilies) (*this)[f].resize(static_cast<std::size_t>(index.family_size(f)));
}

// ---------------------------------------------------------------------------

SiteMarginals::SiteMarginals(const hilbert::DensityMatrix& rho) : n_(rho.n_sites()), d_(rho.local_dim()) {
  for (int eta = 1; eta <= n_; ++eta) {
    const int keep[] = {eta};
    one_.push_back(hilbert::reduced_density(rho, keep));
  }
  for (int eta = 1; eta <= n_; ++eta)
    for (int nu = eta + 1; nu <= n_; ++nu) {
      const int keep[] = {eta, nu};
      two_.push_back(hilbert::reduced_density(rho, keep));
    }
}

std::size_t SiteMarginals::pair_slot(int eta, int nu) const {
  if (eta < 1 || nu > n_ || eta >= nu) throw std::out_of_range("two-site marginal needs 1 <= eta < nu <= N");
  // pairs (a, b) with a < eta come first
  std::size_t slot = 0;
  for (int a = 1; a < eta; ++a) slot += static_cast<std::size_t>(n_ - a);
  return slot + static_cast<std::size_t>(nu - eta - 1);
}

const CMatrix& SiteMarginals::one(int eta) const {
  if (eta < 1 || eta > n_) throw std::out_of_range("site out of range");
  return one_[static_cast<std::size_t>(eta - 1)];
}

const CMatrix& SiteMarginals::two(int eta, int nu) const { return two_[pair_slot(eta, nu)]; }

SiteMarginals SiteMarginals::with_white_noise(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise weight must lie in [0, 1]");
  SiteMarginals out;
  out.n_ = n_;
  out.d_ = d_;
  const double d1 = d_;
  const double d2 = d1 * d1;
  for (const auto& m : one_) out.one_.push_back((1.0 - p) * m + (p / d1) * CMatrix::Identity(d_, d_));
  for (const auto& m : two_) out.two_.push_back((1.0 - p) * m + (p / d2) * CMatrix::Identity(d_ * d_, d_ * d_));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// tr(rho2 (A (x) B)) with A on the leading factor.
cplx two_site_expectation(const CMatrix& rho2, const CMatrix& a, const CMatrix& b) {
  const auto d = a.rows();
  cplx sum{};
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const cplx aji = a(j, i);
      if (aji == 0.0) continue;
      for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) sum += rho2(i * d + k, j * d + l) * aji * b(l, k);
    }
  return sum;
}

cplx one_site_expectation(const CMatrix& rho1, const CMatrix& a) { return (rho1.transpose().cwiseProduct(a)).sum(); }

}  // namespace

MomentSet compute_moments(const SiteMarginals& marginals, const loos::LooFamily& family) {
  const int n = marginals.n_sites();
  const int d = marginals.local_dim();
  if (family.n_sites() != n || family.local_dim() != d)
    throw std::invalid_argument("state and LOO family disagree on (N, d)");

  MomentSet moments(n, d);
  const auto& index = family.index_map();
  for (Family f : loos::kFamilies) {
    auto& out = moments[f];
    for (int k = 0; k < index.family_size(f); ++k) {
      const int m = index.index_of(f, k);
      Moment mom;
      for (int eta = 1; eta <= n; ++eta) {
        const CMatrix& g = family.op(eta, m);
        mom.first += one_site_expectation(marginals.one(eta), g).real();
        mom.local += one_site_expectation(marginals.one(eta), g * g).real();
      }
      double cross = 0.0;
      for (int eta = 1; eta <= n; ++eta)
        for (int nu = eta + 1; nu <= n; ++nu)
          cross += two_site_expectation(marginals.two(eta, nu), family.op(eta, m), family.op(nu, m)).real();
      mom.second = mom.local + 2.0 * cross;
      out[static_cast<std::size_t>(k)] = mom;
    }
  }
  return moments;
}

MomentSet compute_moments(const hilbert::DensityMatrix& rho, const loos::LooFamily& family) {
  return compute_moments(SiteMarginals(rho), family);
}

// ---------------------------------------------------------------------------

FamilySums family_sums(const MomentSet& moments, Family f, std::vector<std::string>* warnings) {
  FamilySums s;
  const auto& list = moments[f];
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Moment& m = list[k];
    double var = m.variance();
    if (var < kVarianceFloor) {
      if (warnings) {
        std::ostringstream msg;
        msg << "variance of " << loos::to_char(f) << "[" << k + 1 << "] = " << var << " clamped to " << kVarianceFloor;
        warnings->push_back(msg.str());
      }
      var = kVarianceFloor;
    }
    s.variance += var;
    s.modified_variance += var - m.local;
    s.modified_second += m.second - m.local;
  }
  return s;
}

namespace {

struct Candidates {
  double w1;
  std::array<double, 3> w2;
  std::array<double, 3> w3;
};

Candidates all_candidates(const MomentSet& moments, std::vector<std::string>* warnings) {
  const double n = moments.n_sites();
  const double d = moments.local_dim();
  std::array<FamilySums, 3> s;
  for (Family f : loos::kFamilies) s[static_cast<std::size_t>(f)] = family_sums(moments, f, warnings);

  Candidates c{};
  c.w1 = s[0].variance + s[1].variance + s[2].variance - (d - 1.0) * n;
  const double offset = n * (n - 1.0);
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t b = (a + 1) % 3;
    const std::size_t e = (a + 2) % 3;
    c.w2[a] = (n - 1.0) * s[a].modified_variance - s[b].modified_second - s[e].modified_second + offset;
    c.w3[a] = (n - 1.0) * (s[b].modified_variance + s[e].modified_variance) - s[a].modified_second + offset;
  }
  return c;
}

}  // namespace

double w1(const MomentSet& moments) { return all_candidates(moments, nullptr).w1; }

double w2(const MomentSet& moments, Family variance_family) {
  return all_candidates(moments, nullptr).w2[static_cast<std::size_t>(variance_family)];
}

double w3(const MomentSet& moments, Family second_moment_family) {
  return all_candidates(moments, nullptr).w3[static_cast<std::size_t>(second_moment_family)];
}

std::array<double, 7> WitnessBreakdown::candidates() const {
  return {w1, w2[0], w2[1], w2[2], w3[0], w3[1], w3[2]};
}

WitnessBreakdown evaluate(const MomentSet& moments) {
  WitnessBreakdown out;
  const Candidates c = all_candidates(moments, &out.warnings);
  out.w1 = c.w1;
  out.w2 = c.w2;
  out.w3 = c.w3;
  const auto values = out.candidates();
  const auto it = std::min_element(values.begin(), values.end());
  out.W = *it;
  out.min_label = kCandidateLabels[static_cast<std::size_t>(it - values.begin())];
  return out;
}

WitnessBreakdown witness_min(const SiteMarginals& marginals, const loos::LooFamily& family) {
  WitnessBreakdown out = evaluate(compute_moments(marginals, family));
  out.direction = family.direction();
  out.warnings.insert(out.warnings.begin(), family.warnings().begin(), family.warnings().end());
  return out;
}

WitnessBreakdown witness_min(const hilbert::DensityMatrix& rho, const loos::LooFamily& family) {
  return witness_min(SiteMarginals(rho), family);
}

BlindTriple polarization_blind_values(const hilbert::DensityMatrix& rho, const loos::LooFamily& family) {
  const auto b = witness_min(rho, family);
  return {b.w1, b.w2[static_cast<std::size_t>(Family::Z)], b.w3[static_cast<std::size_t>(Family::Z)]};
}

// ---------------------------------------------------------------------------

ThresholdSearch noise_threshold(const hilbert::StateVector& psi, const geometry::EmitterArray& array,
                                const geometry::TransitionTable& table, const geometry::DetectionChannel& channel,
                                double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("threshold resolution must be positive");
  const auto family = loos::build_loos(array, table, channel);
  const SiteMarginals pure(hilbert::DensityMatrix::pure(psi));

  ThresholdSearch out;
  auto W = [&](double p) {
    ++out.evaluations;
    return witness_min(pure.with_white_noise(p), family);
  };

  const auto at_zero = W(0.0);
  out.w_at_zero = at_zero.W;
  out.min_label_at_zero = at_zero.min_label;
  if (at_zero.W >= 0.0) return out;

  double lo = 0.0;
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= kCoarseSteps; ++k) {
    const double p = static_cast<double>(k) / kCoarseSteps;
    if (W(p).W >= 0.0) {
      hi = p;
      break;
    }
    lo = p;
  }
  if (std::isnan(hi)) throw std::runtime_error("witness negative for the maximally mixed state");

  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (W(mid).W >= 0.0 ? hi : lo) = mid;
  }
  out.p_star = hi;
  return out;
}

}  // namespace lightwit::witness
