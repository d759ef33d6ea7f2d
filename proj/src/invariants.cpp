#include "locsym/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "locsym/errors.hpp"

namespace locsym {

namespace {
constexpr cplx kTwoI{0.0, 2.0};
}

PointInvariants invariants_of(int sigma, const FieldSample& at_x, const FieldSample& at_image) {
    const double s = sigma;
    PointInvariants p;
    p.q = (s * at_x.value * at_image.deriv - at_image.value * at_x.deriv) / kTwoI;
    p.q_tilde =
        (s * std::conj(at_x.value) * at_image.deriv - at_image.value * std::conj(at_x.deriv)) /
        kTwoI;
    p.j = current_of(at_x);
    return p;
}

PointInvariants invariants_at(const ScatteringState& state, const SymmetryTransform& f, double x) {
    return invariants_of(f.sigma, state.field_at(x), state.field_at(f.apply(x)));
}

cplx q_at(const ScatteringState& state, const SymmetryTransform& f, double x) {
    return invariants_at(state, f, x).q;
}

cplx qtilde_at(const ScatteringState& state, const SymmetryTransform& f, double x) {
    return invariants_at(state, f, x).q_tilde;
}

double state_scale(const ScatteringState& state) {
    const PotentialProfile& p = state.profile();
    const Interval box = p.bounding_box();
    double amp2 = 0.0;
    constexpr int kSamples = 64;
    for (int i = 0; i <= kSamples; ++i) {
        const double x = box.lo + (box.hi - box.lo) * i / kSamples;
        amp2 = std::max(amp2, std::norm(state.field_at(x).value));
    }
    for (double b : p.breakpoints()) amp2 = std::max(amp2, std::norm(state.field_at(b).value));
    const double k = std::sqrt(std::max(p.u_left(), p.u_right()));
    const double j = std::abs(state.current(box.lo));
    return std::max(j, k * amp2);
}

InvariantPair invariant_pair(const ScatteringState& state, const SymmetryTransform& f,
                             const Domain& domain, int n_samples) {
    if (domain.empty()) throw InvalidArgument("invariant_pair: empty domain");
    if (n_samples < 2) throw InvalidArgument("invariant_pair: need at least 2 samples");

    std::vector<PointInvariants> pts;
    for (const Interval& iv : domain.intervals()) {
        for (int i = 0; i < n_samples; ++i) {
            const double x = i == n_samples - 1 ? iv.hi : iv.lo + iv.width() * i / (n_samples - 1);
            pts.push_back(invariants_at(state, f, x));
        }
    }
    InvariantPair pair;
    pair.transform = f;
    pair.domain = domain;
    pair.state_id = state.id();
    for (const auto& p : pts) {
        pair.q += p.q;
        pair.q_tilde += p.q_tilde;
        pair.j += p.j;
    }
    const double n = static_cast<double>(pts.size());
    pair.q /= n;
    pair.q_tilde /= n;
    pair.j /= n;
    pair.scale = std::max({std::abs(pair.q), std::abs(pair.q_tilde), std::abs(pair.j),
                           state_scale(state)});
    double spread = 0.0;
    for (const auto& p : pts) {
        spread = std::max(spread, std::abs(p.q - pair.q) + std::abs(p.q_tilde - pair.q_tilde));
        pair.max_point_sum_rule = std::max(pair.max_point_sum_rule, sum_rule_residual(p, f.sigma));
    }
    pair.constancy_residual = spread / pair.scale;
    return pair;
}

double sum_rule_residual(const PointInvariants& p, int sigma) {
    return std::abs(std::norm(p.q_tilde) - std::norm(p.q) - sigma * p.j * p.j);
}

double sum_rule_residual(const InvariantPair& pair) {
    return sum_rule_residual(PointInvariants{pair.q, pair.q_tilde, pair.j}, pair.transform.sigma);
}

cplx map_field(const InvariantPair& pair, const FieldSample& sample, double zero_current_rel) {
    if (std::abs(pair.j) <= zero_current_rel * pair.scale) {
        throw ZeroCurrentError(
            "map_field: current J vanishes; the mapping is undefined, use the field parity "
            "instead");
    }
    return (pair.q_tilde * sample.value - pair.q * std::conj(sample.value)) / pair.j;
}

std::optional<cplx> eigenvalue_check(const InvariantPair& pair, double tol,
                                     double zero_current_rel) {
    if (std::abs(pair.q) > tol * pair.scale) return std::nullopt;
    if (std::abs(pair.j) <= zero_current_rel * pair.scale) return std::nullopt;
    const cplx lambda = pair.q_tilde / pair.j;
    if (std::abs(std::abs(lambda) - 1.0) > tol) return std::nullopt;
    return lambda;
}

double bloch_phase(const InvariantPair& pair, double tol) {
    if (pair.transform.sigma != 1) throw InvalidArgument("bloch_phase: transform is not a translation");
    if (std::abs(pair.q) > tol * pair.scale) {
        throw InvalidArgument("bloch_phase: Q is not negligible, the state is not a Bloch state");
    }
    if (pair.j == 0.0) throw ZeroCurrentError("bloch_phase: zero current");
    return std::arg(pair.q_tilde / pair.j);
}

Parity parity_character(const FieldFn& field, double alpha, std::span<const double> grid,
                        double tol) {
    if (grid.empty()) return Parity::None;
    double amp = 0.0;
    double slope = 0.0;
    double even_dev = 0.0;
    double odd_dev = 0.0;
    for (double x : grid) {
        const FieldSample a = field(x);
        const FieldSample b = field(2.0 * alpha - x);
        amp = std::max({amp, std::abs(a.value), std::abs(b.value)});
        slope = std::max({slope, std::abs(a.deriv), std::abs(b.deriv)});
        even_dev = std::max(even_dev, std::abs(b.value - a.value));
        odd_dev = std::max(odd_dev, std::abs(b.value + a.value));
    }
    if (amp == 0.0) return Parity::None;
    const FieldSample center = field(alpha);
    const double dscale = std::max(slope, amp);
    if (even_dev <= tol * amp && std::abs(center.deriv) <= tol * dscale) return Parity::Even;
    if (odd_dev <= tol * amp && std::abs(center.value) <= tol * amp) return Parity::Odd;
    return Parity::None;
}

Parity parity_character(const ScatteringState& state, double alpha, std::span<const double> grid,
                        double tol) {
    return parity_character([&state](double x) { return state.field_at(x); }, alpha, grid, tol);
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        case Parity::None: return "none";
    }
    return "none";
}

}  // namespace locsym
