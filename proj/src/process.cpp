#include "qpr/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <thread>

namespace qpr {

namespace {

constexpr double kTracePreservation = 1e-10;
constexpr double kVarianceClamp = 1e-12;
constexpr double kMeritZero = 1e-12;
constexpr double kSupportThreshold = 1e-10;
// Fixed reduction block; partial sums are combined in block order.
constexpr std::uint64_t kBlock = 4096;

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": dimension mismatch");
}

double clamp_variance(double var) {
  if (var < -kVarianceClamp)
    throw Error("randomness: negative variance " + std::to_string(var) + " (numerical inconsistency)");
  return std::max(var, 0.0);
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw Error("KrausChannel: no Kraus operators");
  output_dim_ = ops_.front().rows();
  input_dim_ = ops_.front().cols();
  for (const auto& k : ops_) {
    if (k.rows() != output_dim_ || k.cols() != input_dim_)
      throw Error("KrausChannel: inconsistent Kraus operator shapes");
    if (!all_finite(k)) throw Error("KrausChannel: non-finite Kraus entry");
  }
  if (trace_preservation_defect() > kTracePreservation)
    throw Error("KrausChannel: Kraus operators are not trace preserving");
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
  return KrausChannel({ComplexMatrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::fully_depolarizing_qubit() {
  return KrausChannel({pauli::identity() / 2.0, pauli::x() / 2.0, pauli::y() / 2.0, pauli::z() / 2.0});
}

double KrausChannel::trace_preservation_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(input_dim_, input_dim_);
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(input_dim_, input_dim_)).cwiseAbs().maxCoeff();
}

TargetMap identity_target() {
  return [](const PureState& s) { return s; };
}

double MeasurementDistribution::mean() const {
  double acc = 0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) acc += eigenvalues[i] * probabilities[i];
  return acc;
}

double MeasurementDistribution::second_moment() const {
  double acc = 0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    acc += eigenvalues[i] * eigenvalues[i] * probabilities[i];
  return acc;
}

std::string_view to_string(MeritRule rule) {
  return rule == MeritRule::Ratio ? "ratio" : "difference";
}

DensityOperator apply_channel(const KrausChannel& channel, const PureState& state) {
  require_same_dim(channel.input_dim(), state.dim(), "apply_channel");
  const ComplexMatrix in = state.projector();
  ComplexMatrix out = ComplexMatrix::Zero(channel.output_dim(), channel.output_dim());
  for (const auto& k : channel.kraus_ops()) out += k * in * k.adjoint();
  // Symmetrize away rounding so the Hermitian check is exact.
  out = (out + out.adjoint()).eval() / 2.0;
  return DensityOperator(std::move(out));
}

double fidelity(const DensityOperator& rho, const PureState& target) {
  require_same_dim(rho.dim(), target.dim(), "fidelity");
  return rho.expectation(target);
}

MeasurementDistribution measurement_distribution_in_basis(std::span<const double> eigenvalues,
                                                          std::span<const PureState> basis,
                                                          const PureState& target) {
  if (eigenvalues.size() != basis.size())
    throw Error("measurement_distribution: eigenvalue and basis counts differ");
  if (static_cast<Eigen::Index>(basis.size()) != target.dim())
    throw Error("measurement_distribution: basis does not span the target space");
  MeasurementDistribution d;
  d.eigenvalues.reserve(basis.size());
  d.probabilities.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double lambda = eigenvalues[i];
    if (lambda < -tolerance::kNegativeEigenvalue)
      throw Error("measurement_distribution: eigenvalue below -1e-10");
    lambda = std::max(lambda, 0.0);
    d.eigenvalues.push_back(lambda);
    d.probabilities.push_back(std::norm(target.inner(basis[i])));
  }
  return d;
}

MeasurementDistribution measurement_distribution(const DensityOperator& rho, const PureState& target,
                                                 CompletionOrder order) {
  require_same_dim(rho.dim(), target.dim(), "measurement_distribution");
  const auto eig = hermitian_eig(rho.matrix());

  // Support of ρ, then completion with λ = 0 on the added vectors.
  std::vector<PureState> support;
  std::vector<double> lambdas;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > kSupportThreshold) {
      support.push_back(eig.eigenvectors[static_cast<std::size_t>(i)]);
      lambdas.push_back(eig.eigenvalues(i));
    } else if (eig.eigenvalues(i) < -tolerance::kNegativeEigenvalue) {
      throw Error("measurement_distribution: eigenvalue below -1e-10");
    }
  }
  const auto basis = complete_basis(support, rho.dim(), order);
  lambdas.resize(basis.size(), 0.0);
  return measurement_distribution_in_basis(lambdas, basis, target);
}

double randomness_from_distribution(const MeasurementDistribution& dist) {
  const double psum = std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0);
  if (std::abs(psum - 1.0) > 1e-10) throw Error("randomness_from_distribution: probabilities do not sum to 1");
  // Σp(λ − m)² equals Σpλ² − m² when Σp = 1 and avoids the cancellation.
  const double m1 = dist.mean();
  double var = 0;
  for (std::size_t i = 0; i < dist.eigenvalues.size(); ++i) {
    const double d = dist.eigenvalues[i] - m1;
    var += dist.probabilities[i] * d * d;
  }
  return std::sqrt(clamp_variance(var));
}

double randomness_closed_form(const DensityOperator& rho, const PureState& target) {
  require_same_dim(rho.dim(), target.dim(), "randomness_closed_form");
  // ⟨φ̃|ρ²|φ̃⟩ − ⟨φ̃|ρ|φ̃⟩² = ‖(ρ − F)|φ̃⟩‖² for Hermitian ρ; the norm form
  // keeps full relative precision when Q is near zero.
  const ComplexVector r = rho.matrix() * target.amplitudes();
  const double first = std::real(target.amplitudes().dot(r));
  return (r - first * target.amplitudes()).norm();
}

double pure_output_randomness(const PureState& chi, const PureState& target) {
  require_same_dim(chi.dim(), target.dim(), "pure_output_randomness");
  // |⟨φ|χ⟩| · ‖χ − ⟨φ|χ⟩φ‖, the same as √(o(1 − o)) with o = |⟨φ|χ⟩|².
  const auto overlap = target.inner(chi);
  return std::abs(overlap) * (chi.amplitudes() - overlap * target.amplitudes()).norm();
}

ProcessStats point_stats(const KrausChannel& channel, const TargetMap& target, const PureState& input) {
  const auto rho = apply_channel(channel, input);
  const auto t = target(input);
  return {fidelity(rho, t), randomness_closed_form(rho, t)};
}

PureState qubit_from_angles(double mu, double nu) {
  ComplexVector v(2);
  const std::complex<double> half_phase = std::exp(std::complex<double>(0.0, nu / 2));
  v(0) = std::cos(mu / 2) * half_phase;
  v(1) = std::sin(mu / 2) * std::conj(half_phase);
  return PureState::normalized(std::move(v));
}

PureState haar_sample_qubit(CounterStream& rng) {
  const double cos_mu = 1.0 - 2.0 * rng.next_uniform();
  const double nu = 2.0 * std::numbers::pi * rng.next_uniform();
  return qubit_from_angles(std::acos(std::clamp(cos_mu, -1.0, 1.0)), nu);
}

InputSampler haar_qubit_sampler() {
  return [](std::uint64_t seed, std::uint64_t index) {
    CounterStream rng(seed, index);
    return haar_sample_qubit(rng);
  };
}

AveragedStats average_over_haar(const KrausChannel& channel, const TargetMap& target,
                                std::uint64_t n_samples, std::uint64_t seed,
                                const AverageOptions& options) {
  if (n_samples == 0) throw Error("average_over_haar: n_samples must be at least 1");

  struct Sums {
    double f = 0, f2 = 0, q = 0, q2 = 0;
  };
  const std::uint64_t n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<Sums> blocks(n_blocks);

  auto run_block = [&](std::uint64_t b) {
    Sums s;
    const std::uint64_t end = std::min(n_samples, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) {
      const auto st = point_stats(channel, target, options.sampler(seed, i));
      s.f += st.fidelity;
      s.f2 += st.fidelity * st.fidelity;
      s.q += st.randomness;
      s.q2 += st.randomness * st.randomness;
    }
    blocks[b] = s;
  };

  unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < n_blocks; b += workers) run_block(b);
      });
  }

  Sums total;
  for (const auto& s : blocks) {
    total.f += s.f;
    total.f2 += s.f2;
    total.q += s.q;
    total.q2 += s.q2;
  }
  const double n = static_cast<double>(n_samples);
  auto stderr_of = [n](double sum, double sum2) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };

  AveragedStats out;
  out.mean = {total.f / n, total.q / n};
  out.fidelity_stderr = stderr_of(total.f, total.f2);
  out.randomness_stderr = stderr_of(total.q, total.q2);
  out.n_samples = n_samples;
  return out;
}

FigureOfMerit figure_of_merit(double fbar, double qbar) {
  if (std::abs(fbar) < kMeritZero || std::abs(qbar) < kMeritZero)
    return {qbar - fbar, MeritRule::Difference};
  return {qbar / fbar, MeritRule::Ratio};
}

}  // namespace qpr
