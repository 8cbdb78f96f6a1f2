#include "qspir/state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <unordered_set>

namespace qspir {

namespace {

void check_unique(const std::vector<QubitId>& qubits) {
  std::unordered_set<std::string> seen;
  for (const auto& q : qubits) {
    if (!seen.insert(q.name).second)
      throw std::invalid_argument("duplicate qubit name: " + q.name);
  }
}

}  // namespace

QuantumRegister::QuantumRegister(std::vector<QubitId> qubits,
                                 Eigen::VectorXcd amplitudes)
    : qubits_(std::move(qubits)), amp_(std::move(amplitudes)) {
  check_unique(qubits_);
  if (int(qubits_.size()) > kMaxQubits)
    throw capacity_error("dense register exceeds " +
                         std::to_string(kMaxQubits) + " qubits");
  if (amp_.size() != Eigen::Index(1) << qubits_.size())
    throw std::invalid_argument("amplitude vector has wrong dimension");
  if (std::abs(amp_.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("register is not normalized");
}

int QuantumRegister::index_of(const QubitId& q) const {
  for (std::size_t i = 0; i < qubits_.size(); ++i)
    if (qubits_[i].name == q.name) return int(i);
  throw std::invalid_argument("unknown qubit: " + q.name);
}

bool QuantumRegister::contains(const QubitId& q) const {
  return std::any_of(qubits_.begin(), qubits_.end(),
                     [&](const QubitId& x) { return x.name == q.name; });
}

std::string QuantumRegister::debug_dump() const {
  std::ostringstream os;
  os << "register[";
  for (std::size_t i = 0; i < qubits_.size(); ++i)
    os << (i ? "," : "") << qubits_[i].name;
  os << "] (qubit 0 = msb)\n";
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if (std::abs(amp_[i]) < 1e-14) continue;
    os << "  |";
    for (int b = num_qubits() - 1; b >= 0; --b) os << ((i >> b) & 1);
    os << ">: " << amp_[i].real() << (amp_[i].imag() < 0 ? "-" : "+")
       << std::abs(amp_[i].imag()) << "i\n";
  }
  return os.str();
}

DensityMatrix::DensityMatrix(std::vector<QubitId> qubits,
                             Eigen::MatrixXcd matrix)
    : qubits_(std::move(qubits)), mat_(std::move(matrix)) {
  check_unique(qubits_);
  const Eigen::Index d = Eigen::Index(1) << qubits_.size();
  if (mat_.rows() != d || mat_.cols() != d)
    throw std::invalid_argument("density matrix has wrong dimension");
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(mat_.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("density matrix trace is not 1");
}

int DensityMatrix::index_of(const QubitId& q) const {
  for (std::size_t i = 0; i < qubits_.size(); ++i)
    if (qubits_[i].name == q.name) return int(i);
  throw std::invalid_argument("unknown qubit: " + q.name);
}

QuantumRegister make_bell_pair(const QubitId& q1, const QubitId& q2) {
  if (q1.name == q2.name)
    throw std::invalid_argument("bell pair needs two distinct qubits");
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(4);
  amp[0] = amp[3] = 1.0 / std::sqrt(2.0);
  return QuantumRegister({q1, q2}, std::move(amp));
}

QuantumRegister tensor(const QuantumRegister& a, const QuantumRegister& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<QubitId> qubits = a.qubits();
  qubits.insert(qubits.end(), b.qubits().begin(), b.qubits().end());
  Eigen::VectorXcd amp(Eigen::Index(a.dim() * b.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      amp[Eigen::Index(i * b.dim() + j)] = a.amplitudes()[i] * b.amplitudes()[j];
  return QuantumRegister(std::move(qubits), std::move(amp));
}

QuantumRegister apply_weyl(const QuantumRegister& reg, const QubitId& q,
                           SignedWeyl op) {
  const int pos = reg.index_of(q);
  const int shift = reg.num_qubits() - 1 - pos;  // qubit 0 is msb
  const Mat2 m = matrix(op);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Eigen::Index(reg.dim()));
  for (std::size_t j = 0; j < reg.dim(); ++j) {
    const int bit = int(j >> shift) & 1;
    for (int i = 0; i < 2; ++i) {
      if (m[i][bit] == std::complex<double>(0.0)) continue;
      const std::size_t tgt = (j & ~(std::size_t(1) << shift)) |
                              (std::size_t(i) << shift);
      out[Eigen::Index(tgt)] += m[i][bit] * reg.amplitudes()[Eigen::Index(j)];
    }
  }
  return QuantumRegister(reg.qubits(), std::move(out));
}

std::vector<PvmBranch> bell_pvm_outcomes(const QuantumRegister& reg,
                                         const QubitId& q1, const QubitId& q2) {
  if (q1.name == q2.name)
    throw std::invalid_argument("bell PVM needs two distinct qubits");
  const int p1 = reg.index_of(q1);
  const int p2 = reg.index_of(q2);
  const int n = reg.num_qubits();
  const int s1 = n - 1 - p1;
  const int s2 = n - 1 - p2;

  std::vector<QubitId> rest;
  for (const auto& q : reg.qubits())
    if (q.name != q1.name && q.name != q2.name) rest.push_back(q);
  const std::size_t rest_dim = std::size_t(1) << rest.size();

  // Positions of remaining qubits, msb-first, in the original register.
  std::vector<int> rest_shift;
  for (int i = 0; i < n; ++i)
    if (i != p1 && i != p2) rest_shift.push_back(n - 1 - i);

  std::vector<PvmBranch> branches;
  branches.reserve(4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int oi = 0; oi < 4; ++oi) {
    const WeylLabel g = label_from_index(oi);
    // Projector vector (I (x) W(a,b))|Phi> = (1/sqrt2) sum_r (-1)^{rb} |r, r+a>.
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(rest_dim));
    for (std::size_t k = 0; k < rest_dim; ++k) {
      // Base index with rest bits placed back at their original positions.
      std::size_t base = 0;
      for (std::size_t bi = 0; bi < rest_shift.size(); ++bi) {
        const std::size_t bit = (k >> (rest.size() - 1 - bi)) & 1;
        base |= bit << rest_shift[bi];
      }
      std::complex<double> acc = 0.0;
      for (int r = 0; r < 2; ++r) {
        const int r2 = (r + g.a) & 1;
        const double ph = ((r * g.b) & 1) ? -1.0 : 1.0;
        const std::size_t idx = base | (std::size_t(r) << s1) |
                                (std::size_t(r2) << s2);
        acc += inv_sqrt2 * ph * reg.amplitudes()[Eigen::Index(idx)];
      }
      v[Eigen::Index(k)] = acc;
    }
    PvmBranch br;
    br.outcome = g;
    br.probability = v.squaredNorm();
    if (br.probability < 1e-24) {
      br.probability = 0.0;
      br.empty = true;
    } else if (!rest.empty()) {
      br.post_state = QuantumRegister(rest, v / std::sqrt(br.probability));
    }
    branches.push_back(std::move(br));
  }
  return branches;
}

std::pair<WeylLabel, QuantumRegister> sample_bell_pvm(const QuantumRegister& reg,
                                                      const QubitId& q1,
                                                      const QubitId& q2,
                                                      std::mt19937_64& rng) {
  auto branches = bell_pvm_outcomes(reg, q1, q2);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  for (const auto& br : branches) {
    if (br.probability > 0.0 && u < br.probability)
      return {br.outcome, br.post_state};
    u -= br.probability;
  }
  // Numerical edge: fall back to the last non-empty branch.
  for (auto it = branches.rbegin(); it != branches.rend(); ++it)
    if (it->probability > 0.0) return {it->outcome, it->post_state};
  throw std::logic_error("bell PVM produced no branch");
}

std::pair<WeylLabel, QuantumRegister> sample_bell_pvm(const QuantumRegister& reg,
                                                      const QubitId& q1,
                                                      const QubitId& q2,
                                                      std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return sample_bell_pvm(reg, q1, q2, rng);
}

DensityMatrix density(const QuantumRegister& reg) {
  Eigen::MatrixXcd m = reg.amplitudes() * reg.amplitudes().adjoint();
  return DensityMatrix(reg.qubits(), std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& dm,
                            const std::vector<QubitId>& keep) {
  const int n = int(dm.qubits().size());
  std::vector<int> keep_pos;
  for (const auto& q : keep) keep_pos.push_back(dm.index_of(q));
  std::vector<int> drop_pos;
  for (int i = 0; i < n; ++i)
    if (std::find(keep_pos.begin(), keep_pos.end(), i) == keep_pos.end())
      drop_pos.push_back(i);

  const std::size_t kd = std::size_t(1) << keep_pos.size();
  const std::size_t dd = std::size_t(1) << drop_pos.size();
  auto assemble = [&](std::size_t kbits, std::size_t dbits) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < keep_pos.size(); ++i)
      idx |= ((kbits >> (keep_pos.size() - 1 - i)) & 1)
             << (n - 1 - keep_pos[i]);
    for (std::size_t i = 0; i < drop_pos.size(); ++i)
      idx |= ((dbits >> (drop_pos.size() - 1 - i)) & 1)
             << (n - 1 - drop_pos[i]);
    return idx;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(Eigen::Index(kd),
                                                Eigen::Index(kd));
  for (std::size_t r = 0; r < kd; ++r)
    for (std::size_t c = 0; c < kd; ++c) {
      std::complex<double> acc = 0.0;
      for (std::size_t d = 0; d < dd; ++d)
        acc += dm.matrix()(Eigen::Index(assemble(r, d)),
                           Eigen::Index(assemble(c, d)));
      out(Eigen::Index(r), Eigen::Index(c)) = acc;
    }

  std::vector<QubitId> kept;
  for (int p : keep_pos) kept.push_back(dm.qubits()[std::size_t(p)]);
  return DensityMatrix(std::move(kept), std::move(out));
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("entropy of non-Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()[i];
    if (lam < kEigClip) continue;  // 0 log 0 = 0, clip solver noise
    s -= lam * std::log2(lam);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& dm) {
  return von_neumann_entropy(dm.matrix());
}

double holevo_information(
    const std::vector<std::pair<double, Eigen::MatrixXcd>>& ensemble) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  double psum = 0.0;
  const Eigen::Index d = ensemble.front().second.rows();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(d, d);
  double cond = 0.0;
  for (const auto& [p, rho] : ensemble) {
    if (rho.rows() != d)
      throw std::invalid_argument("ensemble states live on mismatched registers");
    psum += p;
    if (p == 0.0) continue;
    avg += p * rho;
    cond += p * von_neumann_entropy(rho);
  }
  if (std::abs(psum - 1.0) > kNormTol)
    throw std::invalid_argument("ensemble probabilities do not sum to 1");
  return von_neumann_entropy(avg) - cond;
}

double holevo_information(
    const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  std::vector<std::pair<double, Eigen::MatrixXcd>> flat;
  flat.reserve(ensemble.size());
  for (const auto& [p, dm] : ensemble) {
    if (!ensemble.empty() &&
        dm.qubits().size() != ensemble.front().second.qubits().size())
      throw std::invalid_argument("ensemble states live on mismatched registers");
    flat.emplace_back(p, dm.matrix());
  }
  return holevo_information(flat);
}

Eigen::VectorXcd random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i)
    v[i] = std::complex<double>(gauss(rng), gauss(rng));
  return v / v.norm();
}

Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  // Fix the phase convention so the distribution is rotation invariant.
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    std::complex<double> d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace qspir
