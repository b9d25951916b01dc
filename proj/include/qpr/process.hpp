#pragma once

// Fidelity and quantum process randomness of a CPTP process against a
// pure-state target, plus Haar-uniform averaging over qubit inputs.

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "qpr/qcore.hpp"
#include "qpr/random.hpp"

namespace qpr {

/// Completely positive trace-preserving map given by Kraus operators
/// (each output_dim x input_dim).
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  static KrausChannel identity(Eigen::Index dim);
  /// Replaces every qubit input by I/2.
  static KrausChannel fully_depolarizing_qubit();

  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index output_dim() const { return output_dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }

  /// Largest entrywise deviation of Σ K†K from the identity.
  double trace_preservation_defect() const;

 private:
  std::vector<ComplexMatrix> ops_;
  Eigen::Index input_dim_ = 0;
  Eigen::Index output_dim_ = 0;
};

/// Protocol rule |φ⟩ ↦ |φ̃⟩.
using TargetMap = std::function<PureState(const PureState&)>;

/// Target equal to the input.
TargetMap identity_target();

/// Input sampler for Monte Carlo averages: sample `index` under `seed`.
using InputSampler = std::function<PureState(std::uint64_t seed, std::uint64_t index)>;

/// Eigenvalues λᵢ of ρ (completed basis entries carry λ = 0) and Born
/// probabilities pᵢ = |⟨φ̃|mᵢ⟩|² of the target in that basis.
struct MeasurementDistribution {
  std::vector<double> eigenvalues;
  std::vector<double> probabilities;

  double mean() const;
  double second_moment() const;
};

struct ProcessStats {
  double fidelity = 0;
  double randomness = 0;
};

/// Monte Carlo averages with 1σ standard errors of the means.
struct AveragedStats {
  ProcessStats mean;
  double fidelity_stderr = 0;
  double randomness_stderr = 0;
  std::uint64_t n_samples = 0;
};

enum class MeritRule { Ratio, Difference };

struct FigureOfMerit {
  double value = 0;
  MeritRule rule = MeritRule::Ratio;
};

std::string_view to_string(MeritRule rule);

/// ρ = Σ K|φ⟩⟨φ|K†.
DensityOperator apply_channel(const KrausChannel& channel, const PureState& state);

/// ⟨φ̃|ρ|φ̃⟩
double fidelity(const DensityOperator& rho, const PureState& target);

/// Measurement in the eigenbasis of ρ, completed to a full basis when ρ is
/// rank-deficient. Eigenvalues in [-1e-10, 0) are clamped to zero.
MeasurementDistribution measurement_distribution(const DensityOperator& rho, const PureState& target,
                                                 CompletionOrder order = CompletionOrder::Forward);

/// Same measurement in a caller-supplied orthonormal basis with eigenvalue
/// labels; used to probe invariance under the choice of eigenbasis.
MeasurementDistribution measurement_distribution_in_basis(std::span<const double> eigenvalues,
                                                          std::span<const PureState> basis,
                                                          const PureState& target);

/// Standard deviation √(Σλ²p − (Σλp)²).
double randomness_from_distribution(const MeasurementDistribution& dist);

/// Standard deviation via moments of ρ: √(⟨φ̃|ρ²|φ̃⟩ − ⟨φ̃|ρ|φ̃⟩²).
double randomness_closed_form(const DensityOperator& rho, const PureState& target);

/// Randomness when the output is the pure state |χ⟩.
double pure_output_randomness(const PureState& chi, const PureState& target);

/// Fidelity and closed-form randomness of a single input.
ProcessStats point_stats(const KrausChannel& channel, const TargetMap& target, const PureState& input);

/// α|0⟩ + β|1⟩ with α = cos(μ/2)e^{iν/2}, β = sin(μ/2)e^{−iν/2}.
PureState qubit_from_angles(double mu, double nu);

/// Haar-uniform qubit: cos μ uniform on [−1, 1], ν uniform on [0, 2π).
PureState haar_sample_qubit(CounterStream& rng);

/// Sampler drawing Haar qubits from CounterStream(seed, index).
InputSampler haar_qubit_sampler();

struct AverageOptions {
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  InputSampler sampler = haar_qubit_sampler();
};

/// Monte Carlo estimate of the averaged efficiency and averaged randomness.
/// Q is averaged per sample (the mean of standard deviations).
AveragedStats average_over_haar(const KrausChannel& channel, const TargetMap& target,
                                std::uint64_t n_samples, std::uint64_t seed,
                                const AverageOptions& options = {});

/// Q̄/F̄ when both exceed 1e-12, otherwise Q̄ − F̄.
FigureOfMerit figure_of_merit(double fbar, double qbar);

}  // namespace qpr
