#include "qric/statealg.h"

#include "index_util.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

namespace qric {

Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<cplx> random_unit_vector(std::size_t dim, Rng& rng) {
  if (dim == 0) throw InvalidArgument("random_unit_vector needs dim >= 1");
  std::vector<cplx> out(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& z : out) {
      const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
      const double t = 2.0 * std::numbers::pi * uniform01(rng);
      z = {r * std::cos(t), r * std::sin(t)};
      norm2 += std::norm(z);
    }
  } while (norm2 < 1e-300);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : out) z *= inv;
  return out;
}

std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("sampling weights must be non-negative");
    total += w;
  }
  if (weights.empty() || total <= 0.0) throw InvalidArgument("sampling weights sum to zero");
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (target < acc) return i;
  }
  return last;
}

std::uint64_t max_pure_dim() {
  const char* env = std::getenv("QRIC_MAX_DIM");
  if (env == nullptr || *env == '\0') return kDefaultMaxPureDim;
  std::string_view text(env);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
    throw InvalidArgument("QRIC_MAX_DIM must be a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t max_density_dim() { return std::min(kDefaultMaxDensityDim, max_pure_dim()); }

std::uint64_t checked_power(int d, std::size_t n, std::uint64_t limit) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (result > limit / static_cast<std::uint64_t>(d)) {
      throw SizeGuardError("dimension " + std::to_string(d) + "^" + std::to_string(n) +
                           " exceeds the limit of " + std::to_string(limit));
    }
    result *= static_cast<std::uint64_t>(d);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Register

Register::Register(int d, std::vector<std::string> labels) : d_(d), labels_(std::move(labels)) {
  if (d_ < 2) throw InvalidArgument("qudit dimension must be >= 2, got " + std::to_string(d_));
  if (labels_.empty()) throw InvalidArgument("register needs at least one label");
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) throw InvalidArgument("duplicate label '" + label + "'");
  }
  total_dim_ = checked_power(d_, labels_.size(), std::uint64_t{1} << 62);
  strides_.resize(labels_.size());
  std::uint64_t s = 1;
  for (std::size_t k = labels_.size(); k-- > 0;) {
    strides_[k] = s;
    s *= static_cast<std::uint64_t>(d_);
  }
}

bool Register::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t Register::position(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InvalidArgument("unknown label '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<int> Register::dits(std::uint64_t index) const {
  std::vector<int> out(labels_.size());
  for (std::size_t k = labels_.size(); k-- > 0;) {
    out[k] = static_cast<int>(index % static_cast<std::uint64_t>(d_));
    index /= static_cast<std::uint64_t>(d_);
  }
  return out;
}

std::uint64_t Register::index(std::span<const int> dits) const {
  if (dits.size() != labels_.size()) throw InvalidArgument("dit string length mismatch");
  std::uint64_t idx = 0;
  for (int j : dits) {
    if (j < 0 || j >= d_) throw InvalidArgument("dit out of range");
    idx = idx * static_cast<std::uint64_t>(d_) + static_cast<std::uint64_t>(j);
  }
  return idx;
}

Register Register::subset(std::span<const std::string> keep) const {
  std::vector<std::string> out;
  for (const auto& label : labels_) {
    if (std::find(keep.begin(), keep.end(), label) != keep.end()) out.push_back(label);
  }
  for (const auto& label : keep) position(label);
  return Register(d_, std::move(out));
}

std::vector<std::string> Register::complement(std::span<const std::string> keep) const {
  std::vector<std::string> out;
  for (const auto& label : labels_) {
    if (std::find(keep.begin(), keep.end(), label) == keep.end()) out.push_back(label);
  }
  return out;
}

namespace detail {

IndexSplit split_indices(const Register& reg, const std::vector<bool>& in_keep) {
  const std::size_t n = reg.size();
  const auto d = static_cast<std::uint64_t>(reg.d());
  std::vector<std::uint64_t> sub_stride(n);
  IndexSplit split;
  for (std::size_t k = n; k-- > 0;) {
    if (in_keep[k]) {
      sub_stride[k] = split.kept_dim;
      split.kept_dim *= d;
    } else {
      sub_stride[k] = split.rest_dim;
      split.rest_dim *= d;
    }
  }
  const std::uint64_t total = reg.total_dim();
  split.kept.resize(total);
  split.rest.resize(total);
  std::vector<int> dits(n, 0);
  std::uint64_t ki = 0, ri = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    split.kept[i] = ki;
    split.rest[i] = ri;
    for (std::size_t k = n; k-- > 0;) {
      std::uint64_t& acc = in_keep[k] ? ki : ri;
      if (++dits[k] < reg.d()) {
        acc += sub_stride[k];
        break;
      }
      dits[k] = 0;
      acc -= sub_stride[k] * (d - 1);
    }
  }
  return split;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PureState / DensityOperator

namespace {

void guard_pure(const Register& reg) {
  if (reg.total_dim() > max_pure_dim()) {
    throw SizeGuardError("pure state of dimension " + std::to_string(reg.total_dim()) +
                         " exceeds the size guard " + std::to_string(max_pure_dim()));
  }
}

void guard_density(const Register& reg) {
  if (reg.total_dim() > max_density_dim()) {
    throw SizeGuardError("density operator of dimension " + std::to_string(reg.total_dim()) +
                         " exceeds the size guard " + std::to_string(max_density_dim()));
  }
}

// Maps each old index to the index with dit p moved to position new_pos[p].
std::vector<std::uint64_t> position_map(const Register& reg, const std::vector<std::size_t>& new_pos) {
  const std::size_t n = reg.size();
  const std::uint64_t total = reg.total_dim();
  std::vector<std::uint64_t> target_stride(n);
  for (std::size_t p = 0; p < n; ++p) target_stride[p] = reg.stride(new_pos[p]);
  std::vector<std::uint64_t> out(total);
  std::vector<int> dits(n, 0);
  std::uint64_t idx = 0;
  const auto d = static_cast<std::uint64_t>(reg.d());
  for (std::uint64_t i = 0; i < total; ++i) {
    out[i] = idx;
    for (std::size_t k = n; k-- > 0;) {
      if (++dits[k] < reg.d()) {
        idx += target_stride[k];
        break;
      }
      dits[k] = 0;
      idx -= target_stride[k] * (d - 1);
    }
  }
  return out;
}

std::vector<bool> membership(const Register& reg, std::span<const std::string> keep) {
  std::vector<bool> in_keep(reg.size(), false);
  for (const auto& label : keep) {
    std::size_t p = reg.position(label);
    if (in_keep[p]) throw InvalidArgument("label '" + label + "' listed twice");
    in_keep[p] = true;
  }
  return in_keep;
}

}  // namespace

PureState::PureState(Register reg, Vector amps) : reg_(std::move(reg)), amps_(std::move(amps)) {
  guard_pure(reg_);
  if (static_cast<std::uint64_t>(amps_.size()) != reg_.total_dim()) {
    throw InvalidArgument("amplitude vector has length " + std::to_string(amps_.size()) +
                          ", register needs " + std::to_string(reg_.total_dim()));
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > kTolerance) {
    throw InvalidArgument("state is not normalized (norm^2 = " + std::to_string(amps_.squaredNorm()) + ")");
  }
}

PureState PureState::normalized(Register reg, Vector amps) {
  double nrm = amps.norm();
  if (nrm < 1e-300) throw InvalidArgument("cannot normalize a zero vector");
  amps /= nrm;
  return PureState(std::move(reg), std::move(amps));
}

PureState PureState::basis(Register reg, std::span<const int> dits) {
  guard_pure(reg);
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  amps[static_cast<Eigen::Index>(reg.index(dits))] = 1.0;
  return PureState(std::move(reg), std::move(amps));
}

DensityOperator::DensityOperator(Register reg, Matrix mat) : reg_(std::move(reg)), mat_(std::move(mat)) {
  guard_density(reg_);
  const auto dim = static_cast<Eigen::Index>(reg_.total_dim());
  if (mat_.rows() != dim || mat_.cols() != dim) {
    throw InvalidArgument("density matrix must be " + std::to_string(dim) + " x " + std::to_string(dim));
  }
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(mat_.trace() - cplx(1.0)) > kTolerance) {
    throw InvalidArgument("density matrix trace is " + std::to_string(mat_.trace().real()) + ", not 1");
  }
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  guard_density(psi.reg());
  return DensityOperator(psi.reg(), psi.amps() * psi.amps().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Register reg) {
  guard_density(reg);
  const auto dim = static_cast<Eigen::Index>(reg.total_dim());
  Matrix mat = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityOperator(std::move(reg), std::move(mat));
}

double DensityOperator::purity() const { return (mat_ * mat_).trace().real(); }

Eigen::VectorXd DensityOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double DensityOperator::min_eigenvalue() const { return eigenvalues().minCoeff(); }

void Cut::validate(const Register& reg) const {
  if (group_a.empty() || group_b.empty()) throw InvalidArgument("cut groups must be non-empty");
  std::set<std::string> seen;
  for (const auto* group : {&group_a, &group_b}) {
    for (const auto& label : *group) {
      reg.position(label);
      if (!seen.insert(label).second) throw InvalidArgument("label '" + label + "' on both sides of cut");
    }
  }
  if (seen.size() != reg.size()) throw InvalidArgument("cut does not cover every label");
}

// ---------------------------------------------------------------------------
// Operations

PureState tensor(const PureState& a, const PureState& b) {
  if (a.d() != b.d()) throw InvalidArgument("tensor: qudit dimensions differ");
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  checked_power(a.d(), labels.size(), max_pure_dim());
  Register reg(a.d(), std::move(labels));
  Vector amps(static_cast<Eigen::Index>(reg.total_dim()));
  const Eigen::Index nb = b.amps().size();
  for (Eigen::Index i = 0; i < a.amps().size(); ++i) {
    amps.segment(i * nb, nb) = a.amps()[i] * b.amps();
  }
  return PureState(std::move(reg), std::move(amps));
}

void apply_local_inplace(std::span<cplx> amps, int d, std::size_t n, std::size_t pos, const Matrix& op) {
  std::uint64_t stride = 1;
  for (std::size_t k = pos + 1; k < n; ++k) stride *= static_cast<std::uint64_t>(d);
  const std::uint64_t block = stride * static_cast<std::uint64_t>(d);
  std::vector<cplx> in(static_cast<std::size_t>(d));
  for (std::uint64_t base = 0; base < amps.size(); base += block) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      cplx* p = amps.data() + base + off;
      for (int k = 0; k < d; ++k) in[static_cast<std::size_t>(k)] = p[k * stride];
      for (int r = 0; r < d; ++r) {
        cplx acc = 0.0;
        for (int c = 0; c < d; ++c) acc += op(r, c) * in[static_cast<std::size_t>(c)];
        p[r * stride] = acc;
      }
    }
  }
}

namespace {
void check_local_op(const Matrix& op, int d) {
  if (op.rows() != op.cols()) throw InvalidArgument("local operator must be square");
  if (op.rows() != d) {
    throw InvalidArgument("local operator is " + std::to_string(op.rows()) + "-dimensional, qudits are " +
                          std::to_string(d) + "-dimensional");
  }
}
}  // namespace

PureState apply_local(const PureState& state, const Matrix& op, std::string_view target, bool check_unitary,
                      double tol) {
  check_local_op(op, state.d());
  if (check_unitary && !(op.adjoint() * op).isIdentity(tol)) {
    throw InvalidArgument("operator is not unitary");
  }
  const std::size_t pos = state.reg().position(target);
  Vector amps = state.amps();
  apply_local_inplace({amps.data(), static_cast<std::size_t>(amps.size())}, state.d(), state.reg().size(), pos, op);
  return PureState(state.reg(), std::move(amps));
}

Matrix apply_local_left(const Matrix& rho, const Register& reg, const Matrix& op, std::string_view target) {
  check_local_op(op, reg.d());
  const std::size_t pos = reg.position(target);
  Matrix out = rho;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    apply_local_inplace({out.col(c).data(), static_cast<std::size_t>(out.rows())}, reg.d(), reg.size(), pos, op);
  }
  return out;
}

DensityOperator partial_trace(const PureState& psi, std::span<const std::string> keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  const auto in_keep = membership(psi.reg(), keep);
  Register kept_reg = psi.reg().subset(keep);
  guard_density(kept_reg);
  const detail::IndexSplit split = detail::split_indices(psi.reg(), in_keep);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(split.kept_dim), static_cast<Eigen::Index>(split.rest_dim));
  for (std::uint64_t i = 0; i < psi.reg().total_dim(); ++i) {
    m(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.rest[i])) =
        psi.amps()[static_cast<Eigen::Index>(i)];
  }
  Matrix rho = m * m.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(kept_reg), std::move(rho));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  const auto in_keep = membership(rho.reg(), keep);
  Register kept_reg = rho.reg().subset(keep);
  const detail::IndexSplit split = detail::split_indices(rho.reg(), in_keep);
  // full index for (kept, rest)
  std::vector<std::uint64_t> full(split.kept_dim * split.rest_dim);
  for (std::uint64_t i = 0; i < rho.reg().total_dim(); ++i) {
    full[split.kept[i] * split.rest_dim + split.rest[i]] = i;
  }
  const auto kd = static_cast<Eigen::Index>(split.kept_dim);
  Matrix out = Matrix::Zero(kd, kd);
  for (Eigen::Index a = 0; a < kd; ++a) {
    for (Eigen::Index b = 0; b < kd; ++b) {
      cplx acc = 0.0;
      for (std::uint64_t r = 0; r < split.rest_dim; ++r) {
        acc += rho.mat()(static_cast<Eigen::Index>(full[static_cast<std::uint64_t>(a) * split.rest_dim + r]),
                         static_cast<Eigen::Index>(full[static_cast<std::uint64_t>(b) * split.rest_dim + r]));
      }
      out(a, b) = acc;
    }
  }
  return DensityOperator(std::move(kept_reg), std::move(out));
}

namespace {

std::vector<std::size_t> relabel_positions(const Register& reg, const std::map<std::string, std::string>& relabeling) {
  std::vector<std::size_t> new_pos(reg.size());
  std::vector<bool> hit(reg.size(), false);
  for (std::size_t p = 0; p < reg.size(); ++p) {
    auto it = relabeling.find(reg.label(p));
    const std::string& dest = it == relabeling.end() ? reg.label(p) : it->second;
    new_pos[p] = reg.position(dest);
    if (hit[new_pos[p]]) throw InvalidArgument("relabeling is not a bijection (collision at '" + dest + "')");
    hit[new_pos[p]] = true;
  }
  for (const auto& [from, to] : relabeling) {
    reg.position(from);
    reg.position(to);
  }
  return new_pos;
}

std::vector<std::size_t> order_positions(const Register& reg, std::span<const std::string> order) {
  if (order.size() != reg.size()) throw InvalidArgument("reorder: label count mismatch");
  Register target(reg.d(), std::vector<std::string>(order.begin(), order.end()));
  std::vector<std::size_t> new_pos(reg.size());
  for (std::size_t p = 0; p < reg.size(); ++p) new_pos[p] = target.position(reg.label(p));
  return new_pos;
}

Vector move_amplitudes(const Register& reg, const Vector& amps, const std::vector<std::size_t>& new_pos) {
  const auto map = position_map(reg, new_pos);
  Vector out(amps.size());
  for (std::uint64_t i = 0; i < map.size(); ++i) {
    out[static_cast<Eigen::Index>(map[i])] = amps[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Matrix move_matrix(const Register& reg, const Matrix& mat, const std::vector<std::size_t>& new_pos) {
  const auto map = position_map(reg, new_pos);
  Matrix out(mat.rows(), mat.cols());
  for (std::uint64_t c = 0; c < map.size(); ++c) {
    for (std::uint64_t r = 0; r < map.size(); ++r) {
      out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
          mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

}  // namespace

PureState permute(const PureState& state, const std::map<std::string, std::string>& relabeling) {
  const auto new_pos = relabel_positions(state.reg(), relabeling);
  return PureState(state.reg(), move_amplitudes(state.reg(), state.amps(), new_pos));
}

DensityOperator permute(const DensityOperator& rho, const std::map<std::string, std::string>& relabeling) {
  const auto new_pos = relabel_positions(rho.reg(), relabeling);
  return DensityOperator(rho.reg(), move_matrix(rho.reg(), rho.mat(), new_pos));
}

PureState reorder(const PureState& state, std::span<const std::string> order) {
  const auto new_pos = order_positions(state.reg(), order);
  return PureState(Register(state.d(), {order.begin(), order.end()}),
                   move_amplitudes(state.reg(), state.amps(), new_pos));
}

DensityOperator reorder(const DensityOperator& rho, std::span<const std::string> order) {
  const auto new_pos = order_positions(rho.reg(), order);
  return DensityOperator(Register(rho.d(), {order.begin(), order.end()}),
                         move_matrix(rho.reg(), rho.mat(), new_pos));
}

PureState rename(const PureState& state, const std::map<std::string, std::string>& names) {
  std::vector<std::string> labels = state.labels();
  for (const auto& [from, to] : names) {
    labels[state.reg().position(from)] = to;
  }
  return PureState(Register(state.d(), std::move(labels)), state.amps());
}

PureState fan_out(const PureState& state, std::string_view source, std::span<const std::string> targets) {
  if (targets.empty()) throw InvalidArgument("fan_out needs at least one target");
  const std::size_t pos = state.reg().position(source);
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < state.reg().size(); ++p) {
    if (p == pos) {
      labels.insert(labels.end(), targets.begin(), targets.end());
    } else {
      labels.push_back(state.reg().label(p));
    }
  }
  checked_power(state.d(), labels.size(), max_pure_dim());
  Register reg(state.d(), std::move(labels));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  for (std::uint64_t i = 0; i < state.reg().total_dim(); ++i) {
    const cplx a = state.amps()[static_cast<Eigen::Index>(i)];
    if (a == cplx(0.0)) continue;
    auto old = state.reg().dits(i);
    std::vector<int> dits;
    dits.reserve(reg.size());
    for (std::size_t p = 0; p < old.size(); ++p) {
      if (p == pos) {
        dits.insert(dits.end(), targets.size(), old[p]);
      } else {
        dits.push_back(old[p]);
      }
    }
    amps[static_cast<Eigen::Index>(reg.index(dits))] = a;
  }
  return PureState(std::move(reg), std::move(amps));
}

cplx overlap(const PureState& a, const PureState& b) {
  if (!(a.reg() == b.reg())) throw InvalidArgument("overlap: registers differ");
  return a.amps().dot(b.amps());
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(overlap(a, b)); }

bool equal_up_to_phase(const PureState& a, const PureState& b, double tol) {
  return std::abs(overlap(a, b)) >= 1.0 - tol;
}

double max_amplitude_deviation(const PureState& a, const PureState& b) {
  if (!(a.reg() == b.reg())) throw InvalidArgument("max_amplitude_deviation: registers differ");
  return (a.amps() - b.amps()).cwiseAbs().maxCoeff();
}

double von_neumann_entropy(const DensityOperator& rho, double tol) {
  double s = 0.0;
  for (double lambda : rho.eigenvalues()) {
    if (lambda > tol) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

double entropy_across_cut(const PureState& state, const Cut& cut) {
  cut.validate(state.reg());
  // S(A) = S(B) for pure states; diagonalize the smaller side.
  const auto& side = cut.group_b.size() <= cut.group_a.size() ? cut.group_b : cut.group_a;
  return von_neumann_entropy(partial_trace(state, side));
}

Vector slice(const PureState& state, std::span<const std::string> labels, std::span<const int> values) {
  if (labels.size() != values.size()) throw InvalidArgument("slice: one value per label required");
  const Register& reg = state.reg();
  if (labels.size() >= reg.size()) throw InvalidArgument("slice must leave at least one qudit");
  std::vector<bool> fixed(reg.size(), false);
  std::vector<int> pinned(reg.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t p = reg.position(labels[i]);
    if (fixed[p]) throw InvalidArgument("label '" + labels[i] + "' listed twice");
    if (values[i] < 0 || values[i] >= reg.d()) throw InvalidArgument("slice value out of range");
    fixed[p] = true;
    pinned[p] = values[i];
  }
  std::uint64_t base = 0;
  std::vector<std::size_t> free_pos;
  for (std::size_t p = 0; p < reg.size(); ++p) {
    if (fixed[p]) {
      base += static_cast<std::uint64_t>(pinned[p]) * reg.stride(p);
    } else {
      free_pos.push_back(p);
    }
  }
  std::uint64_t rest_dim = 1;
  for (std::size_t i = 0; i < free_pos.size(); ++i) rest_dim *= static_cast<std::uint64_t>(reg.d());
  Vector out(static_cast<Eigen::Index>(rest_dim));
  std::vector<int> dits(free_pos.size(), 0);
  std::uint64_t idx = base;
  for (std::uint64_t r = 0; r < rest_dim; ++r) {
    out[static_cast<Eigen::Index>(r)] = state.amps()[static_cast<Eigen::Index>(idx)];
    for (std::size_t k = free_pos.size(); k-- > 0;) {
      const std::uint64_t st = reg.stride(free_pos[k]);
      if (++dits[k] < reg.d()) {
        idx += st;
        break;
      }
      dits[k] = 0;
      idx -= st * static_cast<std::uint64_t>(reg.d() - 1);
    }
  }
  return out;
}

}  // namespace qric
