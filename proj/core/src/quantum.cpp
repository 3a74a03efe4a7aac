#include "cfw/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cfw {

namespace {
constexpr double kNumericTol = 1e-12;
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out.at(c, r) = std::conj(at(r, c));
  return out;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  if (x.n_ != y.n_) throw DimensionError("matrix dimension mismatch");
  CMatrix out(x.n_);
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] = x.a_[i] + y.a_[i];
  return out;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  if (x.n_ != y.n_) throw DimensionError("matrix dimension mismatch");
  CMatrix out(x.n_);
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] = x.a_[i] - y.a_[i];
  return out;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.n_ != y.n_) throw DimensionError("matrix dimension mismatch");
  const std::size_t n = x.n_;
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex v = x.at(r, k);
      if (v == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out.at(r, c) += v * y.at(k, c);
    }
  return out;
}

CMatrix operator*(Complex s, const CMatrix& x) {
  CMatrix out = x;
  for (auto& v : out.a_) v *= s;
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  CMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l)
          out.at(i * nb + k, j * nb + l) = a.at(i, j) * b.at(k, l);
  return out;
}

CVector apply(const CMatrix& m, const CVector& v) {
  if (m.dim() != v.size()) throw DimensionError("matrix/vector mismatch");
  CVector out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m.at(r, c) * v[c];
  return out;
}

Complex inner(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw DimensionError("vector dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double norm(const CVector& v) { return std::sqrt(std::abs(inner(v, v))); }

CMatrix outer(const CVector& v) {
  CMatrix out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      out.at(r, c) = v[r] * std::conj(v[c]);
  return out;
}

StateVector::StateVector(CVector amps, double tol)
    : amplitudes(std::move(amps)), tolerance(tol) {
  const double n = norm(amplitudes);
  if (std::abs(n - 1.0) > tolerance)
    throw DimensionError("state vector is not normalized (norm " +
                         std::to_string(n) + ")");
}

double Projector::hermiticity_defect() const {
  return (matrix - matrix.adjoint()).max_abs();
}

double Projector::idempotency_defect() const {
  return (matrix * matrix - matrix).max_abs();
}

bool Projector::valid(double tol) const {
  return hermiticity_defect() <= tol && idempotency_defect() <= tol;
}

namespace {

CMatrix basis_projector(double angle, std::size_t outcome) {
  // outcome 0: (cos t, sin t); outcome 1: (-sin t, cos t)
  const double c = std::cos(angle), s = std::sin(angle);
  const double v0 = outcome == 0 ? c : -s;
  const double v1 = outcome == 0 ? s : c;
  CMatrix p(2);
  p.at(0, 0) = v0 * v0;
  p.at(0, 1) = v0 * v1;
  p.at(1, 0) = v1 * v0;
  p.at(1, 1) = v1 * v1;
  return p;
}

}  // namespace

MeasurementModel MeasurementModel::from_angles(
    const std::array<double, 2>& left, const std::array<double, 2>& right) {
  MeasurementModel mm;
  mm.angles_[0] = left;
  mm.angles_[1] = right;
  const CMatrix id2 = CMatrix::identity(2);
  for (std::size_t reg = 0; reg < 2; ++reg)
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t o = 0; o < 2; ++o) {
        CMatrix local = basis_projector(mm.angles_[reg][m], o);
        mm.local_[reg][m][o] = local;
        mm.embedded_[reg][m][o].matrix =
            reg == 0 ? kron(local, id2) : kron(id2, local);
      }
  return mm;
}

const Projector& MeasurementModel::projector(const LocalEvent& e) const {
  return embedded_[e.region][e.measurement][e.outcome];
}

const CMatrix& MeasurementModel::local_basis_projector(std::size_t region,
                                                       std::size_t m,
                                                       std::size_t o) const {
  return local_[region][m][o];
}

double MeasurementModel::angle(std::size_t region, std::size_t m) const {
  return angles_[region][m];
}

double MeasurementModel::completeness_defect() const {
  double worst = 0.0;
  const CMatrix id = CMatrix::identity(4);
  for (std::size_t reg = 0; reg < 2; ++reg)
    for (std::size_t m = 0; m < 2; ++m) {
      const CMatrix& plus = embedded_[reg][m][0].matrix;
      const CMatrix& minus = embedded_[reg][m][1].matrix;
      worst = std::max(worst, (plus + minus - id).max_abs());
      worst = std::max(worst, (plus * minus).max_abs());
    }
  return worst;
}

double& JointTable::at(std::size_t i, std::size_t j, std::size_t s,
                       std::size_t t) {
  return p_.at(i * 8 + j * 4 + s * 2 + t);
}

double JointTable::at(std::size_t i, std::size_t j, std::size_t s,
                      std::size_t t) const {
  return p_.at(i * 8 + j * 4 + s * 2 + t);
}

double JointTable::row_sum_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double sum = 0.0;
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 2; ++t) sum += at(i, j, s, t);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  return worst;
}

std::size_t JointTable::positive_entry_count() const {
  std::size_t n = 0;
  for (double v : p_)
    if (v > null_tol_) ++n;
  return n;
}

double born_probability(const StateVector& s, const Projector& p) {
  if (p.matrix.dim() != s.amplitudes.size())
    throw DimensionError("projector/state dimension mismatch");
  const Complex v = inner(s.amplitudes, apply(p.matrix, s.amplitudes));
  return v.real();
}

std::pair<CMatrix, CMatrix> reduce(const CMatrix& density, const Projector& p) {
  if (p.matrix.dim() != density.dim())
    throw DimensionError("projector/density dimension mismatch");
  const CMatrix comp = CMatrix::identity(density.dim()) - p.matrix;
  return {p.matrix * density * p.matrix, comp * density * comp};
}

double commutator_norm(const Projector& q1, const Projector& q2) {
  if (q1.matrix.dim() != q2.matrix.dim())
    throw DimensionError("projector dimension mismatch");
  return (q1.matrix * q2.matrix - q2.matrix * q1.matrix).max_abs();
}

NoSignalingResult verify_no_signaling(const StateVector& s, const Projector& p1,
                                      const Projector& p2) {
  const CMatrix density = s.density();
  const auto [yes, no] = reduce(density, p2);
  const Complex reduced = (p1.matrix * (yes + no)).trace();
  const Complex direct = (p1.matrix * density).trace();
  NoSignalingResult out;
  out.deviation = std::abs(reduced - direct);
  out.precondition_violated = commutator_norm(p1, p2) > kNumericTol;
  return out;
}

// ---------------------------------------------------------------------------
// Hardy-type model construction

namespace {

// Constraint rows whose common null vector is the model state: the three
// product events the table must assign probability zero.
//   L2- R2+, L2+ R1+, L1- R2-
std::array<CVector, 3> constraint_rows(double l1_angle, double r1_angle) {
  auto vec = [](double angle, std::size_t outcome) {
    const double c = std::cos(angle), s = std::sin(angle);
    return outcome == 0 ? std::array<double, 2>{c, s}
                        : std::array<double, 2>{-s, c};
  };
  const auto l2p = vec(0.0, 0), l2m = vec(0.0, 1);
  const auto r2p = vec(0.0, 0), r2m = vec(0.0, 1);
  const auto l1m = vec(l1_angle, 1);
  const auto r1p = vec(r1_angle, 0);

  auto product = [](const std::array<double, 2>& l,
                    const std::array<double, 2>& r) {
    CVector v(4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) v[i * 2 + j] = l[i] * r[j];
    return v;
  };
  return {product(l2m, r2p), product(l2p, r1p), product(l1m, r2m)};
}

// Unit vector orthogonal to the three rows, via Gram-Schmidt completion.
// Sign fixed so the largest-magnitude component is positive.
CVector null_space_state(const std::array<CVector, 3>& rows) {
  std::vector<CVector> basis;
  auto project_out = [&](CVector v) {
    for (const auto& b : basis) {
      const Complex c = inner(b, v);
      for (std::size_t i = 0; i < 4; ++i) v[i] -= c * b[i];
    }
    return v;
  };
  for (const auto& row : rows) {
    CVector v = project_out(row);
    const double n = norm(v);
    if (n < 1e-9)
      throw SolveFailure("degenerate constraint rows (bases coincide)");
    for (auto& x : v) x /= n;
    basis.push_back(std::move(v));
  }

  CVector best;
  double best_norm = -1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    CVector e(4);
    e[k] = 1.0;
    CVector v = project_out(e);
    const double n = norm(v);
    if (n > best_norm) {
      best_norm = n;
      best = std::move(v);
    }
  }
  if (best_norm < 1e-9) throw SolveFailure("constraints leave no state");
  for (auto& x : best) x /= best_norm;

  std::size_t arg = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(best[i]) > std::abs(best[arg])) arg = i;
  if (best[arg].real() < 0)
    for (auto& x : best) x = -x;
  return best;
}

QuantumModel model_for_angles(double l1_angle, double r1_angle) {
  QuantumModel model;
  model.measurements =
      MeasurementModel::from_angles({l1_angle, 0.0}, {r1_angle, 0.0});
  model.state = StateVector(null_space_state(constraint_rows(l1_angle, r1_angle)));
  return model;
}

double paradox_probability(const QuantumModel& model) {
  // L1 outcome -, R1 outcome + under the (L1, R1) choice pair.
  const CMatrix joint = model.measurements.projector({0, 0, 1}).matrix *
                        model.measurements.projector({1, 0, 0}).matrix;
  return born_probability(model.state, Projector{joint});
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, int iters) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

void require_hardy(const QuantumModel& model, double null_tolerance,
                   const char* who) {
  const JointTable t = joint_table(model, null_tolerance);
  const PredictionReport rep = verify_predictions(Setup::hardy(), t);
  if (!rep.all_pass())
    throw SolveFailure(std::string(who) +
                       " does not satisfy the Hardy constraints");
  if (t.positive_entry_count() != 13)
    throw SolveFailure(std::string(who) +
                       " does not leave exactly 13 positive joints");
}

}  // namespace

QuantumModel build_hardy_model(HardyMode mode, double null_tolerance) {
  if (mode == HardyMode::PresetOptimal) {
    // The paradox-maximizing model: both rotated bases at atan(sqrt(phi)),
    // phi the golden ratio; paradox probability (5*sqrt(5) - 11)/2.
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double angle = std::atan(std::sqrt(phi));
    QuantumModel model = model_for_angles(angle, angle);
    require_hardy(model, null_tolerance, "preset model");
    return model;
  }

  // Solve: same two-angle family, optimum located numerically. Coarse grid,
  // then coordinate-wise golden-section refinement.
  const double lo = 0.05, hi = 1.5207963267948966;  // pi/2 - 0.05
  double best_g = 0, best_d = 0, best_p = -1.0;
  const int kGrid = 48;
  for (int gi = 0; gi < kGrid; ++gi)
    for (int di = 0; di < kGrid; ++di) {
      const double g = lo + (hi - lo) * (gi + 0.5) / kGrid;
      const double d = lo + (hi - lo) * (di + 0.5) / kGrid;
      const double p = paradox_probability(model_for_angles(g, d));
      if (p > best_p) {
        best_p = p;
        best_g = g;
        best_d = d;
      }
    }
  for (int round = 0; round < 4; ++round) {
    best_g = golden_section_max(
        [&](double g) { return paradox_probability(model_for_angles(g, best_d)); },
        std::max(lo, best_g - 0.2), std::min(hi, best_g + 0.2), 40);
    best_d = golden_section_max(
        [&](double d) { return paradox_probability(model_for_angles(best_g, d)); },
        std::max(lo, best_d - 0.2), std::min(hi, best_d + 0.2), 40);
  }
  QuantumModel model = model_for_angles(best_g, best_d);
  require_hardy(model, null_tolerance, "solved model");
  return model;
}

QuantumModel build_explicit_model(const CVector& amplitudes,
                                  const std::array<double, 2>& left_angles,
                                  const std::array<double, 2>& right_angles) {
  if (amplitudes.size() != 4)
    throw DimensionError("explicit state must have 4 amplitudes");
  QuantumModel model;
  model.state = StateVector(amplitudes);
  model.measurements = MeasurementModel::from_angles(left_angles, right_angles);
  return model;
}

QuantumModel build_hardy_model_from_config(
    const CVector& amplitudes, const std::array<double, 2>& left_angles,
    const std::array<double, 2>& right_angles, double null_tolerance) {
  QuantumModel model = build_explicit_model(amplitudes, left_angles, right_angles);
  const JointTable t = joint_table(model, null_tolerance);
  const PredictionReport rep = verify_predictions(Setup::hardy(), t);
  if (!rep.all_pass())
    throw ConfigError(0, 0, "supplied model violates the Hardy constraints");
  return model;
}

JointTable joint_table(const QuantumModel& model, double null_tolerance) {
  JointTable t(null_tolerance);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t_out = 0; t_out < 2; ++t_out) {
          const CMatrix joint = model.measurements.projector({0, i, s}).matrix *
                                model.measurements.projector({1, j, t_out}).matrix;
          double p = born_probability(model.state, Projector{joint});
          if (p < 0.0 && p > -kNumericTol) p = 0.0;  // roundoff
          t.at(i, j, s, t_out) = p;
        }
  return t;
}

WorldSet physically_possible_worlds(const Setup& setup,
                                    const JointTable& table) {
  const auto worlds = enumerate_logical_worlds(setup);
  WorldSet out(worlds.size());
  for (const auto& w : worlds) {
    const double p =
        table.at(w.choice(0), w.choice(1), w.outcome(0), w.outcome(1));
    if (p > table.null_tolerance()) out.set(w.index());
  }
  return out;
}

PredictionReport verify_predictions(const Setup&, const JointTable& table) {
  const double nt = table.null_tolerance();
  PredictionReport rep;
  // Measurement index 0 is the first declared label (L1/R1), index 1 the
  // second (L2/R2); outcome 0 is "+".
  const double z1 = table.at(1, 1, 1, 0);  // L2- R2+ under (L2,R2)
  const double z2 = table.at(1, 0, 0, 0);  // L2+ R1+ under (L2,R1)
  const double z3 = table.at(0, 1, 1, 1);  // L1- R2- under (L1,R2)
  const double pp = table.at(0, 0, 1, 0);  // L1- R1+ under (L1,R1)
  rep.entries.push_back({"3.1", z1 <= nt, z1});
  rep.entries.push_back({"3.2", z2 <= nt, z2});
  rep.entries.push_back({"3.3", z3 <= nt, z3});
  rep.entries.push_back({"3.4", pp > nt, pp});
  const double rows = table.row_sum_defect();
  rep.entries.push_back({"3.5", rows <= kNumericTol, rows});
  return rep;
}

bool PredictionReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const Entry& e) { return e.pass; });
}

CommutatorSweep commutator_sweep(const MeasurementModel& m) {
  CommutatorSweep sweep{0.0, 0.0};
  for (std::size_t ml = 0; ml < 2; ++ml)
    for (std::size_t ol = 0; ol < 2; ++ol)
      for (std::size_t mr = 0; mr < 2; ++mr)
        for (std::size_t orr = 0; orr < 2; ++orr)
          sweep.max_cross_region = std::max(
              sweep.max_cross_region,
              commutator_norm(m.projector({0, ml, ol}), m.projector({1, mr, orr})));
  for (std::size_t reg = 0; reg < 2; ++reg)
    for (std::size_t o1 = 0; o1 < 2; ++o1)
      for (std::size_t o2 = 0; o2 < 2; ++o2)
        sweep.max_same_region = std::max(
            sweep.max_same_region,
            commutator_norm(m.projector({reg, 0, o1}), m.projector({reg, 1, o2})));
  return sweep;
}

double no_signaling_sweep(const QuantumModel& model) {
  double worst = 0.0;
  for (std::size_t ml = 0; ml < 2; ++ml)
    for (std::size_t ol = 0; ol < 2; ++ol)
      for (std::size_t mr = 0; mr < 2; ++mr)
        for (std::size_t orr = 0; orr < 2; ++orr) {
          const auto r = verify_no_signaling(
              model.state, model.measurements.projector({0, ml, ol}),
              model.measurements.projector({1, mr, orr}));
          worst = std::max(worst, r.deviation);
        }
  return worst;
}

}  // namespace cfw
