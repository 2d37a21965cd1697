#include "evercommit/backend.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace evercommit {

namespace {

std::uint64_t dim_of(int n) { return std::uint64_t{1} << n; }

int qubits_for_dim(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) throw Error("dense state: dimension is not a power of two");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

/// Index arithmetic for an ordered qubit subset of an n-qubit register.
class SupportMap {
 public:
  SupportMap(std::span<const int> support, int n) : k_(static_cast<int>(support.size())) {
    deposit_.assign(dim_of(k_), 0);
    for (int j = 0; j < k_; ++j) {
      int q = support[static_cast<std::size_t>(j)];
      if (q < 0 || q >= n) throw Error("support index " + std::to_string(q) + " out of range");
      std::uint64_t full_bit = std::uint64_t{1} << (n - 1 - q);
      if (mask_ & full_bit) throw Error("support contains a repeated qubit");
      mask_ |= full_bit;
      positions_.push_back(n - 1 - q);
    }
    for (std::uint64_t l = 0; l < deposit_.size(); ++l) {
      std::uint64_t a = 0;
      for (int j = 0; j < k_; ++j) {
        if ((l >> (k_ - 1 - j)) & 1u) a |= std::uint64_t{1} << positions_[static_cast<std::size_t>(j)];
      }
      deposit_[l] = a;
    }
  }

  std::uint64_t local(std::uint64_t a) const {
    std::uint64_t l = 0;
    for (int j = 0; j < k_; ++j) l |= ((a >> positions_[static_cast<std::size_t>(j)]) & 1u) << (k_ - 1 - j);
    return l;
  }
  std::uint64_t rest(std::uint64_t a) const { return a & ~mask_; }
  std::uint64_t deposit(std::uint64_t l) const { return deposit_[l]; }
  std::uint64_t local_dim() const { return deposit_.size(); }

 private:
  int k_;
  std::uint64_t mask_ = 0;
  std::vector<int> positions_;
  std::vector<std::uint64_t> deposit_;
};

/// (Π ⊗ I) rho (Π ⊗ I) with Π acting on the support.
Matrix sandwich(const Matrix& rho, const Matrix& local, const SupportMap& map) {
  const auto d = static_cast<std::uint64_t>(rho.rows());
  Matrix left = Matrix::Zero(rho.rows(), rho.cols());
  for (std::uint64_t a = 0; a < d; ++a) {
    std::uint64_t la = map.local(a), ra = map.rest(a);
    for (std::uint64_t lp = 0; lp < map.local_dim(); ++lp) {
      Complex coeff = local(static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(lp));
      if (coeff == Complex{}) continue;
      left.row(static_cast<Eigen::Index>(a)) += coeff * rho.row(static_cast<Eigen::Index>(ra | map.deposit(lp)));
    }
  }
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::uint64_t b = 0; b < d; ++b) {
    std::uint64_t lb = map.local(b), rb = map.rest(b);
    for (std::uint64_t lp = 0; lp < map.local_dim(); ++lp) {
      Complex coeff = local(static_cast<Eigen::Index>(lp), static_cast<Eigen::Index>(lb));
      if (coeff == Complex{}) continue;
      out.col(static_cast<Eigen::Index>(b)) += coeff * left.col(static_cast<Eigen::Index>(rb | map.deposit(lp)));
    }
  }
  return out;
}

Matrix reduce(const Matrix& rho, const SupportMap& map) {
  const auto d = static_cast<std::uint64_t>(rho.rows());
  const auto kd = static_cast<Eigen::Index>(map.local_dim());
  Matrix out = Matrix::Zero(kd, kd);
  for (std::uint64_t a = 0; a < d; ++a) {
    std::uint64_t la = map.local(a), ra = map.rest(a);
    for (std::uint64_t lb = 0; lb < map.local_dim(); ++lb) {
      out(static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(lb)) +=
          rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(ra | map.deposit(lb)));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// BB84Register

BB84Register::BB84Register(const BitString& bases, const BitString& values) {
  if (bases.size() != values.size()) throw Error("bb84: bases and values differ in length");
  if (bases.empty()) throw Error("bb84: register must have at least one qubit");
  cells_.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    cells_.push_back({static_cast<Basis>(bases[i]), values[i], false});
  }
}

std::uint8_t BB84Register::measure(std::size_t i, Basis basis, Rng& rng) {
  BB84Cell& cell = cells_.at(i);
  if (cell.basis == basis) return cell.value;
  cell.basis = basis;
  cell.value = rng.bit();
  cell.collapsed = true;
  return cell.value;
}

BitString BB84Register::measure_all(const BitString& meas_bases, Rng& rng) {
  if (meas_bases.size() != width()) throw Error("bb84: measurement basis length mismatch");
  BitString out(width());
  for (std::size_t i = 0; i < width(); ++i) out[i] = measure(i, static_cast<Basis>(meas_bases[i]), rng);
  return out;
}

BB84Register new_bb84(const BitString& bases, const BitString& values) { return {bases, values}; }

// ---------------------------------------------------------------------------
// DenseState

DenseState DenseState::from_matrix(Matrix rho) {
  if (rho.rows() != rho.cols()) throw Error("dense state: matrix is not square");
  int n = qubits_for_dim(rho.rows());
  if (n < 1 || n > kMaxDenseQubits) throw Error("dense state: qubit count outside [1, 12]");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTolerance) throw Error("dense state: not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kTolerance) throw Error("dense state: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kTolerance) throw Error("dense state: negative eigenvalue");
  return {n, std::move(rho)};
}

DenseState DenseState::trusted(Matrix rho) {
  int n = qubits_for_dim(rho.rows());
  return {n, std::move(rho)};
}

DenseState DenseState::basis_state(int num_qubits, std::uint64_t index) {
  auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  Matrix rho = Matrix::Zero(d, d);
  rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return {num_qubits, std::move(rho)};
}

DenseState DenseState::pure(const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd v = psi / psi.norm();
  return from_matrix(v * v.adjoint());
}

DenseState DenseState::maximally_mixed(int num_qubits) {
  auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  return {num_qubits, Matrix::Identity(d, d) / static_cast<double>(d)};
}

DenseState DenseState::random(int num_qubits, Rng& rng) {
  auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  std::normal_distribution<double> normal;
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex{normal(rng.engine()), normal(rng.engine())};
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {num_qubits, std::move(rho)};
}

DenseState DenseState::tensor(const DenseState& other) const {
  if (num_qubits_ + other.num_qubits_ > kMaxDenseQubits) throw Error("dense state: tensor exceeds 12 qubits");
  return {num_qubits_ + other.num_qubits_, gates::kron(rho_, other.rho_)};
}

// ---------------------------------------------------------------------------
// Povm

Povm::Povm(std::vector<int> support, Matrix projector)
    : support_(std::move(support)), projector_(std::move(projector)) {
  if (support_.empty()) throw Error("povm: empty support");
  auto d = static_cast<Eigen::Index>(dim_of(static_cast<int>(support_.size())));
  if (projector_.rows() != d || projector_.cols() != d) throw Error("povm: projector dimension does not match support");
  std::vector<int> sorted = support_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("povm: repeated support index");
  if (sorted.front() < 0) throw Error("povm: negative support index");
  if ((projector_ - projector_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) throw Error("povm: projector not Hermitian");
  if ((projector_ * projector_ - projector_).cwiseAbs().maxCoeff() > kTolerance) throw Error("povm: projector not idempotent");
}

Povm Povm::complement() const {
  return {support_, Matrix::Identity(projector_.rows(), projector_.cols()) - projector_};
}

// ---------------------------------------------------------------------------
// Operations

DenseState apply_pauli_mask(const DenseState& state, const PauliMask& mask) {
  const int n = state.num_qubits();
  if (mask.x.size() != static_cast<std::size_t>(n) || mask.z.size() != static_cast<std::size_t>(n))
    throw Error("pauli mask: length does not match qubit count");
  std::uint64_t xm = 0, zm = 0;
  for (int q = 0; q < n; ++q) {
    xm |= static_cast<std::uint64_t>(mask.x[static_cast<std::size_t>(q)]) << (n - 1 - q);
    zm |= static_cast<std::uint64_t>(mask.z[static_cast<std::size_t>(q)]) << (n - 1 - q);
  }
  const auto d = dim_of(n);
  const Matrix& rho = state.rho();
  Matrix out(rho.rows(), rho.cols());
  for (std::uint64_t a = 0; a < d; ++a) {
    std::uint64_t sa = a ^ xm;
    int sign_a = std::popcount(zm & sa) & 1;
    for (std::uint64_t b = 0; b < d; ++b) {
      std::uint64_t sb = b ^ xm;
      int sign = sign_a ^ (std::popcount(zm & sb) & 1);
      Complex v = rho(static_cast<Eigen::Index>(sa), static_cast<Eigen::Index>(sb));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sign ? -v : v;
    }
  }
  return DenseState::trusted(std::move(out));
}

double povm_prob(const DenseState& state, const Povm& povm) {
  SupportMap map(povm.support(), state.num_qubits());
  Matrix reduced = reduce(state.rho(), map);
  double p = (povm.projector() * reduced).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

std::pair<Outcome, DenseState> povm_measure(const DenseState& state, const Povm& povm, Rng& rng) {
  SupportMap map(povm.support(), state.num_qubits());
  double p = std::clamp((povm.projector() * reduce(state.rho(), map)).trace().real(), 0.0, 1.0);
  bool accept = rng.uniform() < p;
  const Matrix local = accept ? povm.projector()
                              : Matrix(Matrix::Identity(povm.projector().rows(), povm.projector().cols()) -
                                       povm.projector());
  Matrix post = sandwich(state.rho(), local, map);
  double norm = post.trace().real();
  post /= norm;
  return {accept ? Outcome::kAccept : Outcome::kReject, DenseState::trusted(std::move(post))};
}

DenseState partial_trace(const DenseState& state, std::span<const int> keep) {
  if (keep.empty()) throw Error("partial trace: keep set is empty");
  SupportMap map(keep, state.num_qubits());
  return DenseState::trusted(reduce(state.rho(), map));
}

double trace_distance(const DenseState& a, const DenseState& b) {
  if (a.num_qubits() != b.num_qubits()) throw Error("trace distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.rho() - b.rho(), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Matrix embed_operator(const Matrix& local, std::span<const int> support, int num_qubits) {
  SupportMap map(support, num_qubits);
  if (static_cast<std::uint64_t>(local.rows()) != map.local_dim()) throw Error("embed: operator dimension mismatch");
  const auto d = dim_of(num_qubits);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::uint64_t a = 0; a < d; ++a) {
    std::uint64_t la = map.local(a), ra = map.rest(a);
    for (std::uint64_t lb = 0; lb < map.local_dim(); ++lb) {
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(ra | map.deposit(lb))) =
          local(static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(lb));
    }
  }
  return out;
}

DenseState embed_state(const DenseState& local, std::span<const int> support, int num_qubits) {
  SupportMap map(support, num_qubits);
  if (local.dim() != map.local_dim()) throw Error("embed: state dimension mismatch");
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  Matrix out = Matrix::Zero(d, d);
  for (std::uint64_t la = 0; la < map.local_dim(); ++la)
    for (std::uint64_t lb = 0; lb < map.local_dim(); ++lb)
      out(static_cast<Eigen::Index>(map.deposit(la)), static_cast<Eigen::Index>(map.deposit(lb))) =
          local.rho()(static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(lb));
  return DenseState::trusted(std::move(out));
}

double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

namespace gates {

Matrix identity(int num_qubits) {
  auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  return Matrix::Identity(d, d);
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex{0, -1}, Complex{0, 1}, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace gates

}  // namespace evercommit
