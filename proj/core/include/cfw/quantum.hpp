#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "cfw/errors.hpp"
#include "cfw/setup.hpp"
#include "cfw/worldset.hpp"

namespace cfw {

using Complex = std::complex<double>;

/// Dense square complex matrix, sized for the two-qubit space (dim 4) but
/// dimension-generic. Small enough that naive O(n^3) arithmetic is fine.
class CMatrix {
public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}
  static CMatrix identity(std::size_t n);

  std::size_t dim() const { return n_; }
  Complex& at(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  CMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;

  friend CMatrix operator+(const CMatrix& x, const CMatrix& y);
  friend CMatrix operator-(const CMatrix& x, const CMatrix& y);
  friend CMatrix operator*(const CMatrix& x, const CMatrix& y);
  friend CMatrix operator*(Complex s, const CMatrix& x);

private:
  std::size_t n_ = 0;
  std::vector<Complex> a_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

using CVector = std::vector<Complex>;

CVector apply(const CMatrix& m, const CVector& v);
Complex inner(const CVector& x, const CVector& y);  // conjugate-linear in x
double norm(const CVector& v);
/// Rank-one density operator |v><v|.
CMatrix outer(const CVector& v);

/// Normalized two-qubit state vector (dimension 4).
struct StateVector {
  CVector amplitudes;
  double tolerance = 1e-12;

  StateVector() = default;
  StateVector(CVector amps, double tol = 1e-12);

  CMatrix density() const { return outer(amplitudes); }
};

/// A projection operator: Hermitian and idempotent within `tol`.
struct Projector {
  CMatrix matrix;

  double hermiticity_defect() const;  // max |P - P^dagger|
  double idempotency_defect() const;  // max |P^2 - P|
  bool valid(double tol = 1e-12) const;
};

/// Index pair naming a measurement outcome event on one side.
struct LocalEvent {
  std::size_t region;       // 0 = first declared region, 1 = second
  std::size_t measurement;  // 0-based
  std::size_t outcome;      // 0-based
};

/// Per region and measurement, one projector per outcome sign, each of the
/// form (local 2x2 projector) tensored with identity on the other factor.
/// For each (region, measurement): P+ + P- = 1 and P+ P- = 0.
class MeasurementModel {
public:
  /// Real local bases: measurement basis angle t gives outcome vectors
  /// (cos t, sin t) for "+" and (-sin t, cos t) for "-".
  static MeasurementModel from_angles(const std::array<double, 2>& left,
                                      const std::array<double, 2>& right);

  const Projector& projector(const LocalEvent& e) const;
  const CMatrix& local_basis_projector(std::size_t region, std::size_t m,
                                       std::size_t o) const;
  double angle(std::size_t region, std::size_t m) const;

  /// Largest completeness / orthogonality defect over all measurements.
  double completeness_defect() const;

private:
  std::array<std::array<double, 2>, 2> angles_{};
  // [region][measurement][outcome]
  Projector embedded_[2][2][2];
  CMatrix local_[2][2][2];
};

/// Outcome distribution per choice pair: p(i, j, s, t) is conditional on the
/// choices, so every (i, j) row sums to one. Entries above null_tolerance
/// define the physically possible worlds.
class JointTable {
public:
  JointTable() = default;
  explicit JointTable(double null_tolerance) : null_tol_(null_tolerance) {}

  double& at(std::size_t i, std::size_t j, std::size_t s, std::size_t t);
  double at(std::size_t i, std::size_t j, std::size_t s, std::size_t t) const;

  double null_tolerance() const { return null_tol_; }
  void set_null_tolerance(double t) { null_tol_ = t; }

  /// Largest |row sum - 1| over the four choice pairs.
  double row_sum_defect() const;
  std::size_t positive_entry_count() const;

private:
  std::array<double, 16> p_{};
  double null_tol_ = 1e-9;
};

/// <P> = <psi|P|psi> (= Trace PS / Trace S for the rank-one S).
/// Throws DimensionError on mismatch.
double born_probability(const StateVector& s, const Projector& p);

/// The reduction of a state on answering the question P: (PSP, (1-P)S(1-P)).
/// The branch traces sum to Trace S.
std::pair<CMatrix, CMatrix> reduce(const CMatrix& density, const Projector& p);

/// Max-entry magnitude of Q1 Q2 - Q2 Q1.
double commutator_norm(const Projector& q1, const Projector& q2);

struct NoSignalingResult {
  double deviation;            // |Tr P1[P2 S P2 + (1-P2)S(1-P2)] - Tr P1 S|
  bool precondition_violated;  // P1, P2 do not commute (not cross-region)
};

/// The locality identity: reducing with a faraway P2 leaves <P1> unchanged.
/// Holds whenever P1 and P2 commute; a non-commuting pair is flagged.
NoSignalingResult verify_no_signaling(const StateVector& s, const Projector& p1,
                                      const Projector& p2);

enum class HardyMode { PresetOptimal, Solve };

struct QuantumModel {
  StateVector state;
  MeasurementModel measurements;
};

/// The four predictions a Hardy-type model must satisfy, as zero /
/// positivity constraints on the joint table. Identifiers "3.1".."3.4" are
/// the tool's fixed names for them (see README).
struct PredictionReport {
  struct Entry {
    std::string id;
    bool pass;
    double value;
  };
  std::vector<Entry> entries;  // 3.1, 3.2, 3.3, 3.4, completeness
  bool all_pass() const;
};

/// Builds a two-qubit model satisfying the Hardy constraints:
///   p(L2-, R2+ | L2,R2) = 0         (3.1)
///   p(L2+, R1+ | L2,R1) = 0         (3.2)
///   p(L1-, R2- | L1,R2) = 0         (3.3)
///   p(L1-, R1+ | L1,R1) > 0         (3.4)
/// and all thirteen remaining joints strictly positive.
///
/// PresetOptimal uses the closed-form model that maximizes the paradox
/// probability p(L1-, R1+ | L1,R1) = (5*sqrt(5) - 11)/2; Solve finds the
/// same optimum by numerical search (null-space construction plus golden
/// section refinement). Throws SolveFailure when the search cannot satisfy
/// the constraints.
QuantumModel build_hardy_model(HardyMode mode, double null_tolerance = 1e-9);

/// Builds a model from explicit amplitudes and basis angles, checking only
/// structural validity (norm, projector algebra), not the Hardy constraints.
QuantumModel build_explicit_model(const CVector& amplitudes,
                                  const std::array<double, 2>& left_angles,
                                  const std::array<double, 2>& right_angles);

/// As build_explicit_model, but additionally requires the Hardy constraints;
/// throws ConfigError when the supplied model violates them.
QuantumModel build_hardy_model_from_config(
    const CVector& amplitudes, const std::array<double, 2>& left_angles,
    const std::array<double, 2>& right_angles, double null_tolerance = 1e-9);

/// p(i,j,s,t) = <psi| P_L(i,s) P_R(j,t) |psi> for every choice pair.
JointTable joint_table(const QuantumModel& model, double null_tolerance = 1e-9);

/// Worlds whose table entry exceeds the null tolerance.
WorldSet physically_possible_worlds(const Setup& setup, const JointTable& table);

PredictionReport verify_predictions(const Setup& setup, const JointTable& table);

/// Measurement-side commutator sweep used by the CLI: max cross-region norm
/// and max same-region norm over embedded projectors.
struct CommutatorSweep {
  double max_cross_region;
  double max_same_region;
};
CommutatorSweep commutator_sweep(const MeasurementModel& m);

/// Max no-signaling deviation over all 16 cross-region projector pairs.
double no_signaling_sweep(const QuantumModel& model);

}  // namespace cfw
