#include "locsym/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "locsym/errors.hpp"

namespace locsym {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();
// Rescale boundary values once they leave [1e-100, 1e100].
constexpr double kRescaleHigh = 1e100;
constexpr double kRescaleLow = 1e-100;

std::uint64_t next_state_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

double linear_threshold_for(const PotentialProfile& p) { return 1e-14 * p.max_abs_u(); }

// Interface positions: the breakpoints, or a single virtual interface at 0 for free space.
std::vector<double> interfaces_of(const PotentialProfile& p) {
    if (p.empty()) return {0.0};
    return p.breakpoints();
}

// Value of U on region r: 0 = left asymptote, 1..n = slabs, n+1 = right asymptote.
double region_u(const PotentialProfile& p, std::size_t r) {
    if (r == 0) return p.u_left();
    if (r > p.slabs().size()) return p.u_right();
    return p.slabs()[r - 1].u;
}

// Boundary values at each interface stored as v * exp(log_scale).
struct ScaledValues {
    std::vector<Eigen::Vector2cd> v;
    std::vector<double> log_scale;
};

void renormalize(Eigen::Vector2cd& v, double& log_scale) {
    const double m = std::max(std::abs(v(0)), std::abs(v(1)));
    if (m > kRescaleHigh || (m > 0.0 && m < kRescaleLow)) {
        v /= m;
        log_scale += std::log(m);
    }
}

// Thick evanescent slabs are crossed in pieces so cosh/sinh stay finite.
void propagate(Eigen::Vector2cd& v, double& log_scale, double u, double w, double lin) {
    const double growth = u < -lin ? std::sqrt(-u) * std::abs(w) : 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(growth / 100.0)));
    const Eigen::Matrix2cd m = homogeneous_propagator(u, w / pieces, lin).cast<cplx>();
    for (int k = 0; k < pieces; ++k) {
        v = m * v;
        renormalize(v, log_scale);
    }
}

// Fills boundary values at all interfaces from a known value at interface `seed`.
ScaledValues sweep_from(const PotentialProfile& p, const std::vector<double>& iface,
                        std::size_t seed, const Eigen::Vector2cd& seed_value,
                        double seed_log) {
    const double lin = linear_threshold_for(p);
    ScaledValues out;
    out.v.assign(iface.size(), Eigen::Vector2cd::Zero());
    out.log_scale.assign(iface.size(), 0.0);
    out.v[seed] = seed_value;
    out.log_scale[seed] = seed_log;
    for (std::size_t i = seed + 1; i < iface.size(); ++i) {
        out.v[i] = out.v[i - 1];
        out.log_scale[i] = out.log_scale[i - 1];
        propagate(out.v[i], out.log_scale[i], region_u(p, i), iface[i] - iface[i - 1], lin);
    }
    for (std::size_t i = seed; i-- > 0;) {
        out.v[i] = out.v[i + 1];
        out.log_scale[i] = out.log_scale[i + 1];
        propagate(out.v[i], out.log_scale[i], region_u(p, i + 1), iface[i] - iface[i + 1], lin);
    }
    return out;
}

// Amplitudes (a, b) of a exp(ikx) + b exp(-ikx) matching (A, A') at x.
std::pair<cplx, cplx> plane_wave_split(const Eigen::Vector2cd& v, double k, double x) {
    const cplx d = v(1) / (kI * k);
    return {0.5 * (v(0) + d) * std::exp(-kI * k * x), 0.5 * (v(0) - d) * std::exp(kI * k * x)};
}

// Builds the region list from true (unscaled) boundary values.
std::vector<Region> build_regions(const PotentialProfile& p, const std::vector<double>& iface,
                                  const std::vector<Eigen::Vector2cd>& values) {
    const double lin = linear_threshold_for(p);
    const std::size_t n = iface.size();
    std::vector<Region> regions(n + 1);

    auto asymptote = [&](Region& r, double u, double x_lo, double x_hi, const Eigen::Vector2cd& v,
                         double at) {
        r.x_lo = x_lo;
        r.x_hi = x_hi;
        r.u = u;
        r.kappa = std::sqrt(u);
        std::tie(r.a, r.b) = plane_wave_split(v, std::sqrt(u), at);
    };
    asymptote(regions.front(), p.u_left(), -kInf, iface.front(), values.front(), iface.front());
    asymptote(regions.back(), p.u_right(), iface.back(), kInf, values.back(), iface.back());

    for (std::size_t r = 1; r < n; ++r) {
        Region& reg = regions[r];
        reg.x_lo = iface[r - 1];
        reg.x_hi = iface[r];
        reg.u = region_u(p, r);
        reg.ref_a = reg.x_lo;
        reg.ref_b = reg.x_hi;
        const Eigen::Vector2cd& left = values[r - 1];
        const Eigen::Vector2cd& right = values[r];
        if (std::abs(reg.u) <= lin) {
            reg.basis = Region::Basis::Linear;
            reg.kappa = 0.0;
            reg.a = left(0);
            reg.b = left(1);
        } else {
            reg.kappa = std::sqrt(cplx(reg.u, 0.0));
            const cplx ik = kI * reg.kappa;
            reg.a = 0.5 * (left(0) + left(1) / ik);
            reg.b = 0.5 * (right(0) - right(1) / ik);
        }
    }
    return regions;
}

std::vector<Eigen::Vector2cd> unscale(const ScaledValues& s, double log_ref, cplx factor) {
    std::vector<Eigen::Vector2cd> out(s.v.size());
    for (std::size_t i = 0; i < s.v.size(); ++i) {
        const double e = std::exp(s.log_scale[i] - log_ref);
        if (!std::isfinite(e)) throw PhysicsError("field amplitude overflows double precision");
        out[i] = s.v[i] * (factor * e);
    }
    return out;
}

}  // namespace

Eigen::Matrix2d homogeneous_propagator(double u, double w, double linear_threshold) {
    Eigen::Matrix2d m;
    if (std::abs(u) <= linear_threshold) {
        m << 1.0, w, 0.0, 1.0;
    } else if (u > 0.0) {
        const double k = std::sqrt(u);
        const double c = std::cos(k * w);
        const double s = std::sin(k * w);
        m << c, s / k, -k * s, c;
    } else {
        const double q = std::sqrt(-u);
        const double c = std::cosh(q * w);
        const double s = std::sinh(q * w);
        m << c, s / q, q * s, c;
    }
    return m;
}

double ScatteringState::k_left() const { return std::sqrt(profile_.u_left()); }
double ScatteringState::k_right() const { return std::sqrt(profile_.u_right()); }

FieldSample ScatteringState::field_at(double x) const {
    // Region r covers [x_lo, x_hi); regions are sorted.
    const auto it = std::upper_bound(regions_.begin() + 1, regions_.end(), x,
                                     [](double v, const Region& r) { return v < r.x_lo; });
    const Region& r = *(it - 1);
    if (r.basis == Region::Basis::Linear) {
        return {r.a + r.b * (x - r.ref_a), r.b};
    }
    const cplx ik = kI * r.kappa;
    const cplx ea = std::exp(ik * (x - r.ref_a));
    const cplx eb = std::exp(-ik * (x - r.ref_b));
    return {r.a * ea + r.b * eb, ik * (r.a * ea - r.b * eb)};
}

double ScatteringState::current(double x) const { return current_of(field_at(x)); }

ScatteringState solve_scattering(const PotentialProfile& profile, Incidence incidence,
                                 double energy) {
    ScatteringState s(energy == 0.0 ? profile : profile.shifted(energy));
    const PotentialProfile& p = s.profile_;
    s.energy_ = energy;
    s.id_ = next_state_id();
    const std::vector<double> iface = interfaces_of(p);
    const double kl = std::sqrt(p.u_left());
    const double kr = std::sqrt(p.u_right());

    if (incidence == Incidence::Left) {
        s.kind_ = StateKind::LeftIncidence;
        s.k_incident_ = kl;
        const double xb = iface.back();
        const cplx e = std::exp(kI * kr * xb);
        const ScaledValues sv =
            sweep_from(p, iface, iface.size() - 1, Eigen::Vector2cd(e, kI * kr * e), 0.0);
        const auto [in_amp, out_amp] = plane_wave_split(sv.v.front(), kl, iface.front());
        s.t_ = std::exp(-sv.log_scale.front()) / in_amp;
        s.r_ = out_amp / in_amp;
        s.regions_ = build_regions(p, iface, unscale(sv, sv.log_scale.front(), 1.0 / in_amp));
    } else {
        s.kind_ = StateKind::RightIncidence;
        s.k_incident_ = kr;
        const double xa = iface.front();
        const cplx e = std::exp(-kI * kl * xa);
        const ScaledValues sv = sweep_from(p, iface, 0, Eigen::Vector2cd(e, -kI * kl * e), 0.0);
        const auto [out_amp, in_amp] = plane_wave_split(sv.v.back(), kr, iface.back());
        s.t_ = std::exp(-sv.log_scale.back()) / in_amp;
        s.r_ = out_amp / in_amp;
        s.regions_ = build_regions(p, iface, unscale(sv, sv.log_scale.back(), 1.0 / in_amp));
    }
    return s;
}

ScatteringState solve_initial_value(const PotentialProfile& profile, double x0,
                                    const FieldSample& start, double energy) {
    ScatteringState s(energy == 0.0 ? profile : profile.shifted(energy));
    const PotentialProfile& p = s.profile_;
    s.energy_ = energy;
    s.id_ = next_state_id();
    s.kind_ = StateKind::InitialValue;
    s.k_incident_ = std::sqrt(p.u_left());
    const std::vector<double> iface = interfaces_of(p);
    const double lin = linear_threshold_for(p);
    const Eigen::Vector2cd v0(start.value, start.deriv);

    // Seed at the interface just right of x0 (or the last one), then sweep both ways.
    const auto it = std::upper_bound(iface.begin(), iface.end(), x0);
    std::size_t seed = static_cast<std::size_t>(it - iface.begin());
    if (seed == iface.size()) seed = iface.size() - 1;
    const std::size_t region = iface[seed] > x0 ? seed : seed + 1;
    const Eigen::Matrix2d m = homogeneous_propagator(region_u(p, region), iface[seed] - x0, lin);
    const ScaledValues sv = sweep_from(p, iface, seed, m.cast<cplx>() * v0, 0.0);
    s.regions_ = build_regions(p, iface, unscale(sv, 0.0, 1.0));
    return s;
}

ScatteringState superpose(const ScatteringState& s1, cplx c1, const ScatteringState& s2,
                          cplx c2) {
    const auto& r1 = s1.regions();
    const auto& r2 = s2.regions();
    bool same = s1.energy() == s2.energy() && r1.size() == r2.size();
    for (std::size_t i = 0; same && i < r1.size(); ++i) {
        same = r1[i].x_lo == r2[i].x_lo && r1[i].u == r2[i].u;
    }
    if (!same) throw InvalidArgument("superpose: states differ in geometry or energy");

    ScatteringState s(s1.profile());
    s.energy_ = s1.energy();
    s.id_ = next_state_id();
    s.kind_ = StateKind::Superposition;
    s.k_incident_ = s1.k_incident();
    s.regions_ = r1;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        s.regions_[i].a = c1 * r1[i].a + c2 * r2[i].a;
        s.regions_[i].b = c1 * r1[i].b + c2 * r2[i].b;
    }
    return s;
}

CellMatrix unit_cell_transfer_matrix(const PotentialProfile& profile, const Interval& cell,
                                     double energy) {
    if (!(cell.hi > cell.lo)) throw InvalidArgument("cell must have positive length");
    const PotentialProfile p = energy == 0.0 ? profile : profile.shifted(energy);
    const double lin = linear_threshold_for(p);

    std::vector<double> cuts{cell.lo};
    for (double b : p.breakpoints()) {
        if (b > cell.lo && b < cell.hi) cuts.push_back(b);
    }
    cuts.push_back(cell.hi);

    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u = p.eval(0.5 * (cuts[i] + cuts[i + 1]));
        m = homogeneous_propagator(u, cuts[i + 1] - cuts[i], lin) * m;
    }
    return {m.cast<cplx>(), cell.hi - cell.lo};
}

std::variant<BlochMode, BandGap> bloch_state(const CellMatrix& cell) {
    const double c = cell.half_trace();
    if (std::abs(c) > 1.0) return BandGap{c};

    const Eigen::Matrix2cd& m = cell.entries;
    const double theta0 = std::acos(std::clamp(c, -1.0, 1.0));

    auto eigenvector = [&](cplx lambda) -> Eigen::Vector2cd {
        const Eigen::Vector2cd v1(m(0, 1), lambda - m(0, 0));
        const Eigen::Vector2cd v2(lambda - m(1, 1), m(1, 0));
        const Eigen::Vector2cd& v = v1.norm() >= v2.norm() ? v1 : v2;
        if (v.norm() == 0.0) return {1.0, kI};  // M = +-I: every vector is an eigenvector
        return v;
    };

    BlochMode mode;
    mode.phase = theta0;
    Eigen::Vector2cd v = eigenvector(std::polar(1.0, theta0));
    if ((std::conj(v(0)) * v(1)).imag() < 0.0 && theta0 > 0.0 && theta0 < std::numbers::pi) {
        mode.phase = -theta0;
        v = eigenvector(std::polar(1.0, -theta0));
    }
    mode.eigenvalue = std::polar(1.0, mode.phase);
    const cplx norm = std::abs(v(0)) > 0.0 ? v(0) : v(1);
    mode.start = {v(0) / norm, v(1) / norm};
    return mode;
}

}  // namespace locsym
