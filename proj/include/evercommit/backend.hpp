// Exact simulation primitives.
//
// BB84Register holds product states symbolically (basis, value) per qubit and
// supports any width. DenseState is a density matrix on at most
// kMaxDenseQubits qubits.
//
// Qubit ordering for dense states: qubit 0 is the most significant bit of the
// basis index, so a product state is rho_0 ⊗ rho_1 ⊗ ... ⊗ rho_{n-1}.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "evercommit/bits.hpp"
#include "evercommit/rng.hpp"

namespace evercommit {

inline constexpr int kMaxDenseQubits = 12;
inline constexpr double kTolerance = 1e-9;

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class Basis : std::uint8_t { kComputational = 0, kHadamard = 1 };

struct BB84Cell {
  Basis basis = Basis::kComputational;
  std::uint8_t value = 0;
  /// True once a measurement has overwritten the original preparation.
  bool collapsed = false;
};

/// Product of BB84 states H^{basis_i}|value_i>. Mutable: measurement collapses cells.
class BB84Register {
 public:
  BB84Register(const BitString& bases, const BitString& values);

  std::size_t width() const { return cells_.size(); }

  /// Measures cell i in `basis`. Matching basis returns the stored bit; the
  /// conjugate basis returns a uniform bit and re-prepares the cell.
  std::uint8_t measure(std::size_t i, Basis basis, Rng& rng);
  BitString measure_all(const BitString& meas_bases, Rng& rng);

  /// Simulator-side inspection. Adversary code only ever sees a QuantumView.
  const std::vector<BB84Cell>& cells() const { return cells_; }

 private:
  std::vector<BB84Cell> cells_;
};

/// Measurement-only handle on a register, handed to adversary strategies.
class QuantumView {
 public:
  explicit QuantumView(BB84Register& reg) : reg_(&reg) {}

  std::size_t width() const { return reg_->width(); }
  std::uint8_t measure(std::size_t i, Basis basis, Rng& rng) { return reg_->measure(i, basis, rng); }
  BitString measure_all(const BitString& meas_bases, Rng& rng) { return reg_->measure_all(meas_bases, rng); }

 private:
  BB84Register* reg_;
};

class DenseState {
 public:
  /// The zero-qubit state (the scalar 1); a placeholder until assigned.
  DenseState() : num_qubits_(0), rho_(Matrix::Ones(1, 1)) {}

  /// Validates the density-matrix invariants (Hermitian, unit trace, PSD).
  static DenseState from_matrix(Matrix rho);
  /// Skips validation; for results of operations that preserve the invariants.
  static DenseState trusted(Matrix rho);

  static DenseState basis_state(int num_qubits, std::uint64_t index);
  static DenseState pure(const Eigen::VectorXcd& psi);
  static DenseState maximally_mixed(int num_qubits);
  /// Random mixed state (normalized Wishart), for tests.
  static DenseState random(int num_qubits, Rng& rng);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& rho() const { return rho_; }

  DenseState tensor(const DenseState& other) const;

 private:
  DenseState(int n, Matrix rho) : num_qubits_(n), rho_(std::move(rho)) {}

  int num_qubits_;
  Matrix rho_;
};

struct PauliMask {
  BitString x;
  BitString z;
};

/// Two-outcome measurement {Π, I−Π} acting on `support` (ordered qubit indices).
class Povm {
 public:
  Povm(std::vector<int> support, Matrix projector);

  const std::vector<int>& support() const { return support_; }
  const Matrix& projector() const { return projector_; }
  Povm complement() const;

 private:
  std::vector<int> support_;
  Matrix projector_;
};

enum class Outcome : std::uint8_t { kReject = 0, kAccept = 1 };

BB84Register new_bb84(const BitString& bases, const BitString& values);

/// X^x Z^z rho Z^z X^x.
DenseState apply_pauli_mask(const DenseState& state, const PauliMask& mask);
double povm_prob(const DenseState& state, const Povm& povm);
std::pair<Outcome, DenseState> povm_measure(const DenseState& state, const Povm& povm, Rng& rng);
DenseState partial_trace(const DenseState& state, std::span<const int> keep);
double trace_distance(const DenseState& a, const DenseState& b);

/// Full-width operator equal to `local` on `support` and identity elsewhere.
Matrix embed_operator(const Matrix& local, std::span<const int> support, int num_qubits);
/// `local` on `support` with every other qubit in |0><0|.
DenseState embed_state(const DenseState& local, std::span<const int> support, int num_qubits);

double frobenius_distance(const Matrix& a, const Matrix& b);

/// Single-qubit and small multi-qubit helpers.
namespace gates {
Matrix identity(int num_qubits);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix kron(const Matrix& a, const Matrix& b);
}  // namespace gates

}  // namespace evercommit
