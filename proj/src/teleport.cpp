#include "qpr/teleport.hpp"

#include <cmath>
#include <numbers>

namespace qpr {

namespace {

constexpr double kSlack = 1e-12;
// Resource eigenvalues below this contribute no Kraus operator.
constexpr double kDropWeight = 1e-15;

void check_p(double p) {
  if (!(p >= -1.0 / 3.0 - kSlack && p <= 1.0 + kSlack))
    throw Error("teleport: noise parameter p must lie in [-1/3, 1]");
}

void check_theta(double theta) {
  if (!(theta >= -kSlack && theta <= std::numbers::pi / 4 + kSlack))
    throw Error("teleport: theta must lie in [0, pi/4]");
}

ComplexMatrix noisy_mixture(double p, const ComplexVector& pure) {
  ComplexMatrix m = p * (pure * pure.adjoint());
  m += (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
  return m;
}

}  // namespace

std::string_view to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::Bell: return "bell";
    case ResourceKind::Werner: return "werner";
    case ResourceKind::NoisyNonMax: return "noisy-non-max";
    case ResourceKind::Custom: return "custom";
  }
  return "?";
}

TeleportResource TeleportResource::bell() {
  return {ResourceKind::Bell, 1.0, std::numbers::pi / 4, DensityOperator::from_pure(bell_state(0))};
}

TeleportResource TeleportResource::werner(double p) {
  check_p(p);
  return {ResourceKind::Werner, p, std::numbers::pi / 4,
          DensityOperator(noisy_mixture(p, bell_state(0).amplitudes()))};
}

TeleportResource TeleportResource::noisy_non_max(double p, double theta) {
  check_theta(theta);
  ComplexVector eta = ComplexVector::Zero(4);
  eta(0) = std::cos(theta);
  eta(3) = std::sin(theta);
  // PSD is checked numerically by DensityOperator.
  return {ResourceKind::NoisyNonMax, p, theta, DensityOperator(noisy_mixture(p, eta))};
}

TeleportResource TeleportResource::custom(DensityOperator state) {
  if (state.dim() != 4) throw Error("teleport: resource must be a two-qubit state");
  return {ResourceKind::Custom, 0.0, 0.0, std::move(state)};
}

PureState bell_state(int index) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (index) {
    case 0: v(0) = h; v(3) = h; break;   // Φ₊
    case 1: v(0) = h; v(3) = -h; break;  // Φ₋
    case 2: v(1) = h; v(2) = h; break;   // Ψ₊
    case 3: v(1) = h; v(2) = -h; break;  // Ψ₋
    default: throw Error("bell_state: index must be 0..3");
  }
  return PureState(std::move(v));
}

ComplexMatrix bell_correction(int index) {
  switch (index) {
    case 0: return pauli::identity();
    case 1: return pauli::z();
    case 2: return pauli::x();
    case 3: return pauli::x() * pauli::z();
    default: throw Error("bell_correction: index must be 0..3");
  }
}

KrausChannel teleport_channel(const TeleportResource& resource) {
  const auto eig = hermitian_eig(resource.state().matrix());
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < 4; ++k) {
    const ComplexVector bk = bell_state(k).amplitudes();
    const ComplexMatrix correction = bell_correction(k);
    for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
      const double r = eig.eigenvalues(j);
      if (r < kDropWeight) continue;
      const ComplexVector& psi = eig.eigenvectors[static_cast<std::size_t>(j)].amplitudes();
      // m(c, i) = Σ_b conj(B_k[i, b]) ψ[b, c]: input qubit i, Bob's qubit c.
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 2; ++i)
          for (int b = 0; b < 2; ++b) m(c, i) += std::conj(bk(2 * i + b)) * psi(2 * b + c);
      ops.push_back(std::sqrt(r) * correction * m);
    }
  }
  return KrausChannel(std::move(ops));
}

ComplexMatrix noisy_non_max_output(double p, double theta, const PureState& input) {
  if (input.dim() != 2) throw Error("noisy_non_max_output: input must be a qubit");
  const auto a = input[0], b = input[1];
  const double s = std::sin(2 * theta);
  ComplexMatrix m(2, 2);
  m << std::norm(a), a * std::conj(b) * s, std::conj(a) * b * s, std::norm(b);
  return p * m + (1.0 - p) / 2.0 * ComplexMatrix::Identity(2, 2);
}

TeleportPointStats teleport_point_stats(double p, double theta, double mu, double nu) {
  check_p(p);
  check_theta(theta);
  const double gap = 1.0 - std::sin(2 * theta);
  const double sin_mu = std::sin(mu);
  const double ab2 = sin_mu * sin_mu / 4.0;  // |αβ|²
  return {mu, nu, (1.0 + p) / 2.0 - 2.0 * p * gap * ab2, std::abs(p) / 4.0 * gap * std::abs(std::sin(2 * mu))};
}

TeleportPointStats teleport_point_stats_simulated(double p, double theta, double mu, double nu) {
  check_p(p);
  const auto channel = teleport_channel(TeleportResource::noisy_non_max(p, theta));
  const auto input = qubit_from_angles(mu, nu);
  const auto rho = apply_channel(channel, input);
  return {mu, nu, fidelity(rho, input), randomness_closed_form(rho, input)};
}

ProcessStats teleport_averages(double p, double theta) {
  check_p(p);
  check_theta(theta);
  const double gap = 1.0 - std::sin(2 * theta);
  return {(1.0 + p) / 2.0 - p / 3.0 * gap, std::abs(p) / 6.0 * gap};
}

AveragedStats teleport_monte_carlo(double p, double theta, std::uint64_t samples, std::uint64_t seed,
                                   unsigned threads) {
  check_p(p);
  const auto channel = teleport_channel(TeleportResource::noisy_non_max(p, theta));
  AverageOptions opts;
  opts.threads = threads;
  return average_over_haar(channel, identity_target(), samples, seed, opts);
}

}  // namespace qpr
