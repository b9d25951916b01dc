#pragma once

// Standard one-qubit teleportation run through an arbitrary two-qubit
// resource: Bell measurement on (input, Alice), Pauli correction at Bob.

#include <cstdint>
#include <string_view>

#include "qpr/process.hpp"

namespace qpr {

enum class ResourceKind { Bell, Werner, NoisyNonMax, Custom };

std::string_view to_string(ResourceKind kind);

/// Shared two-qubit state (Alice ⊗ Bob).
class TeleportResource {
 public:
  /// |Φ₊⟩⟨Φ₊|
  static TeleportResource bell();
  /// p|Φ₊⟩⟨Φ₊| + (1−p)/4 I₄, p ∈ [−1/3, 1].
  static TeleportResource werner(double p);
  /// p|η⟩⟨η| + (1−p)/4 I₄ with |η⟩ = cos θ|00⟩ + sin θ|11⟩, θ ∈ [0, π/4].
  static TeleportResource noisy_non_max(double p, double theta);
  static TeleportResource custom(DensityOperator state);

  ResourceKind kind() const { return kind_; }
  double p() const { return p_; }
  double theta() const { return theta_; }
  const DensityOperator& state() const { return state_; }

 private:
  TeleportResource(ResourceKind kind, double p, double theta, DensityOperator state)
      : kind_(kind), p_(p), theta_(theta), state_(std::move(state)) {}

  ResourceKind kind_;
  double p_;
  double theta_;
  DensityOperator state_;
};

/// Bell-basis vectors in the order Φ₊, Φ₋, Ψ₊, Ψ₋.
PureState bell_state(int index);

/// Pauli correction for Bell outcome `index`: I, σ_z, σ_x, σ_xσ_z.
ComplexMatrix bell_correction(int index);

/// Qubit→qubit channel of the protocol. Kraus operators are
/// √rⱼ σₖ (⟨Bₖ|₁₂ ⊗ I₃)(I₁ ⊗ |ψⱼ⟩₂₃) over Bell outcomes k and the
/// eigenpairs (rⱼ, ψⱼ) of the resource.
KrausChannel teleport_channel(const TeleportResource& resource);

/// Output predicted for the noisy non-maximal family:
/// p [[|α|², αβ* sin2θ], [α*β sin2θ, |β|²]] + (1−p)/2 I₂.
ComplexMatrix noisy_non_max_output(double p, double theta, const PureState& input);

struct TeleportPointStats {
  double mu = 0;
  double nu = 0;
  double fidelity = 0;
  double randomness = 0;
};

/// F = (1+p)/2 − 2p(1−sin2θ)|αβ|², Q = (|p|/4)(1−sin2θ)|sin 2μ|.
TeleportPointStats teleport_point_stats(double p, double theta, double mu, double nu);

/// The same quantities through teleport_channel → apply_channel →
/// fidelity / randomness_closed_form with target = input.
TeleportPointStats teleport_point_stats_simulated(double p, double theta, double mu, double nu);

/// F̄ = (1+p)/2 − (p/3)(1−sin2θ), Q̄ = (|p|/6)(1−sin2θ).
ProcessStats teleport_averages(double p, double theta);

/// Monte Carlo averages of the simulated channel over Haar inputs.
AveragedStats teleport_monte_carlo(double p, double theta, std::uint64_t samples, std::uint64_t seed,
                                   unsigned threads = 0);

}  // namespace qpr
