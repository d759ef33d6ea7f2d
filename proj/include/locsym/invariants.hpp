#pragma once

// Symmetry-induced non-local currents Q and Q~ of a solved field, the sum
// rule linking them to the ordinary current J, the field mapping
// A(F(x)) = (Q~ A(x) - Q A*(x)) / J, and its parity / Bloch limits.
//
// All tolerances are relative to a per-state scale, see state_scale().

#include <functional>
#include <optional>
#include <span>

#include "locsym/potential.hpp"
#include "locsym/solver.hpp"

namespace locsym {

// Q(x) = (1/2i) [sigma A(x) A'(F x) - A(F x) A'(x)]. A'(F x) is the
// derivative function evaluated at F x, not d/dx of A(F(x)).
cplx q_at(const ScatteringState& state, const SymmetryTransform& f, double x);

// Q~(x) = (1/2i) [sigma A*(x) A'(F x) - A(F x) A'*(x)].
cplx qtilde_at(const ScatteringState& state, const SymmetryTransform& f, double x);

struct PointInvariants {
    cplx q;
    cplx q_tilde;
    double j = 0.0;
};

PointInvariants invariants_at(const ScatteringState& state, const SymmetryTransform& f, double x);

// Pure-sample versions, for fields not held in a ScatteringState.
PointInvariants invariants_of(int sigma, const FieldSample& at_x, const FieldSample& at_image);

// max(|J|, k |A|^2_max) with |A|^2 sampled across the bounding box and at
// every interface; k = sqrt(max(u_left, u_right)).
double state_scale(const ScatteringState& state);

struct InvariantPair {
    cplx q;
    cplx q_tilde;
    double j = 0.0;
    SymmetryTransform transform;
    Domain domain;
    // max over samples of |Q(x) - Q_mean| + |Q~(x) - Q~_mean|, divided by scale.
    double constancy_residual = 0.0;
    // max(|q|, |q_tilde|, |j|, state_scale).
    double scale = 1.0;
    std::uint64_t state_id = 0;
    // Largest pointwise | |Q~|^2 - |Q|^2 - sigma J^2 | over the samples (absolute).
    double max_point_sum_rule = 0.0;

    [[nodiscard]] bool constant(double tol = 1e-9) const { return constancy_residual <= tol; }
};

inline constexpr int kDefaultSamples = 17;

// Samples each interval at n_samples uniformly spaced points (endpoints included).
// Never fails on non-constancy; inspect constancy_residual.
InvariantPair invariant_pair(const ScatteringState& state, const SymmetryTransform& f,
                             const Domain& domain, int n_samples = kDefaultSamples);

// | |q~|^2 - |q|^2 - sigma j^2 |
double sum_rule_residual(const InvariantPair& pair);
double sum_rule_residual(const PointInvariants& p, int sigma);

// Predicted A(F(x)) from the sample at x. Throws ZeroCurrentError when
// |j| <= zero_current_rel * scale.
cplx map_field(const InvariantPair& pair, const FieldSample& sample,
               double zero_current_rel = 1e-10);

// lambda_F = q~ / j when |q| <= tol * scale, |j| is non-negligible and
// | |lambda| - 1 | <= tol. Empty otherwise.
std::optional<cplx> eigenvalue_check(const InvariantPair& pair, double tol = 1e-8,
                                     double zero_current_rel = 1e-10);

// arg(q~ / j) in (-pi, pi] for a translation pair with negligible q.
// The phase of q~ alone is the Bloch phase only up to pi (the sign of J);
// dividing by j removes that ambiguity. Throws InvalidArgument otherwise.
double bloch_phase(const InvariantPair& pair, double tol = 1e-8);

enum class Parity { Even, Odd, None };

using FieldFn = std::function<FieldSample(double)>;

// Even when A(2 alpha - x) = A(x) on the grid and A'(alpha) = 0; odd when
// A(2 alpha - x) = -A(x) and A(alpha) = 0. Tolerances relative to max |A|
// (and max |A'| for the derivative marker) over the grid and its mirror image.
Parity parity_character(const FieldFn& field, double alpha, std::span<const double> grid,
                        double tol = 1e-9);
Parity parity_character(const ScatteringState& state, double alpha,
                        std::span<const double> grid, double tol = 1e-9);

const char* to_string(Parity p);

}  // namespace locsym
