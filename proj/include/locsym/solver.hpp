#pragma once

// Exact solutions of A'' + U(x) A = 0 on piecewise-constant U.
//
// Boundary values (A, A') are carried across slabs with real 2x2 transfer
// matrices; inside each homogeneous region the field is stored as two
// amplitudes of a local basis, so evaluation anywhere is closed form.

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "locsym/potential.hpp"

namespace locsym {

using cplx = std::complex<double>;

struct FieldSample {
    cplx value;  // A(x)
    cplx deriv;  // A'(x)
};

enum class Incidence { Left, Right };

enum class StateKind { LeftIncidence, RightIncidence, InitialValue, Superposition };

// One homogeneous region of the solved field.
//
// Exponential basis: A = a exp(i k (x - ref_a)) + b exp(-i k (x - ref_b)), Im k >= 0.
// Linear basis (|u| below threshold): A = a + b (x - ref_a).
// In finite slabs ref_a is the left edge and ref_b the right edge, so both
// terms stay bounded in evanescent slabs. The asymptotic regions use ref = 0,
// i.e. plain exp(+-ikx).
struct Region {
    enum class Basis { Exponential, Linear };

    double x_lo = 0.0;  // -inf for the left asymptotic region
    double x_hi = 0.0;  // +inf for the right asymptotic region
    double u = 0.0;
    cplx kappa;
    Basis basis = Basis::Exponential;
    cplx a;
    cplx b;
    double ref_a = 0.0;
    double ref_b = 0.0;
};

class ScatteringState {
public:
    // Profile with the energy shift already applied.
    [[nodiscard]] const PotentialProfile& profile() const { return profile_; }
    [[nodiscard]] double energy() const { return energy_; }
    [[nodiscard]] StateKind kind() const { return kind_; }
    // Wavenumber sqrt(u) of the incidence side (left side for non-scattering kinds).
    [[nodiscard]] double k_incident() const { return k_incident_; }
    [[nodiscard]] double k_left() const;
    [[nodiscard]] double k_right() const;
    // Defined for one-sided scattering states only.
    [[nodiscard]] const std::optional<cplx>& transmission() const { return t_; }
    [[nodiscard]] const std::optional<cplx>& reflection() const { return r_; }
    [[nodiscard]] const std::vector<Region>& regions() const { return regions_; }
    // Distinct for every solve/superposition; copies share it.
    [[nodiscard]] std::uint64_t id() const { return id_; }

    [[nodiscard]] FieldSample field_at(double x) const;
    [[nodiscard]] double current(double x) const;

private:
    friend ScatteringState solve_scattering(const PotentialProfile&, Incidence, double);
    friend ScatteringState solve_initial_value(const PotentialProfile&, double,
                                               const FieldSample&, double);
    friend ScatteringState superpose(const ScatteringState&, cplx, const ScatteringState&,
                                     cplx);

    explicit ScatteringState(PotentialProfile profile) : profile_(std::move(profile)) {}

    PotentialProfile profile_;
    double energy_ = 0.0;
    StateKind kind_ = StateKind::LeftIncidence;
    double k_incident_ = 0.0;
    std::optional<cplx> t_;
    std::optional<cplx> r_;
    std::vector<Region> regions_;
    std::uint64_t id_ = 0;
};

// Unit-amplitude incidence from one side. U_E(x) = U(x) + energy; throws
// PhysicsError when the shift makes an asymptotic value non-positive.
//   left:  A = e^{ik_L x} + r e^{-ik_L x} (x < b_0),  A = t e^{ik_R x} (x >= b_n)
//   right: A = e^{-ik_R x} + r e^{ik_R x} (x >= b_n), A = t e^{-ik_L x} (x < b_0)
ScatteringState solve_scattering(const PotentialProfile& profile, Incidence incidence,
                                 double energy = 0.0);

// The unique solution with A(x0) = start.value, A'(x0) = start.deriv.
ScatteringState solve_initial_value(const PotentialProfile& profile, double x0,
                                    const FieldSample& start, double energy = 0.0);

// c1 * s1 + c2 * s2; both states must share geometry and energy.
ScatteringState superpose(const ScatteringState& s1, cplx c1, const ScatteringState& s2,
                          cplx c2);

inline FieldSample field_at(const ScatteringState& state, double x) { return state.field_at(x); }
inline double current(const ScatteringState& state, double x) { return state.current(x); }

// Im(conj(A) A'), i.e. (1/2i)(A* A' - A A'*).
inline double current_of(const FieldSample& s) { return (std::conj(s.value) * s.deriv).imag(); }

struct CellMatrix {
    Eigen::Matrix2cd entries;  // maps (A, A') at cell start to cell end
    double cell_length = 0.0;

    [[nodiscard]] double half_trace() const { return 0.5 * entries.trace().real(); }
    [[nodiscard]] cplx determinant() const { return entries.determinant(); }
};

// Propagator of (A, A') across [cell.lo, cell.hi] for U + energy.
CellMatrix unit_cell_transfer_matrix(const PotentialProfile& profile, const Interval& cell,
                                     double energy = 0.0);

// Propagator across a homogeneous stretch of length w (w may be negative).
Eigen::Matrix2d homogeneous_propagator(double u, double w, double linear_threshold = 0.0);

struct BlochMode {
    double phase = 0.0;  // theta in (-pi, pi], eigenvalue exp(i theta)
    cplx eigenvalue;
    FieldSample start;   // eigenvector as (A, A') at the cell start, |A| or |A'| = 1
};

struct BandGap {
    double half_trace = 0.0;  // |Tr M / 2| > 1
};

// In-band: the eigenvector whose current is positive (right-moving Bloch wave),
// so theta = kL with k the crystal momentum. Otherwise a BandGap record.
std::variant<BlochMode, BandGap> bloch_state(const CellMatrix& cell);

}  // namespace locsym
