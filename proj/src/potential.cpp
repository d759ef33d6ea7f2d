#include "locsym/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "locsym/errors.hpp"

namespace locsym {

Domain::Domain(std::vector<Interval> intervals) {
    std::erase_if(intervals, [](const Interval& iv) { return !(iv.hi >= iv.lo); });
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : intervals) {
        if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
            intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
        } else {
            intervals_.push_back(iv);
        }
    }
}

double Domain::measure() const {
    return std::accumulate(intervals_.begin(), intervals_.end(), 0.0,
                           [](double acc, const Interval& iv) { return acc + iv.width(); });
}

bool Domain::contains(double x) const { return component_of(x).has_value(); }

std::optional<std::size_t> Domain::component_of(double x) const {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (intervals_[i].contains(x)) return i;
    }
    return std::nullopt;
}

PotentialProfile::PotentialProfile(std::vector<Slab> slabs, double u_left, double u_right)
    : slabs_(std::move(slabs)), u_left_(u_left), u_right_(u_right) {
    if (!std::isfinite(u_left_) || !std::isfinite(u_right_)) {
        throw InvalidArgument("asymptotic U values must be finite");
    }
    if (u_left_ <= 0.0 || u_right_ <= 0.0) {
        throw PhysicsError(
            "U(x) must be asymptotically positive (u_left > 0 and u_right > 0) for a "
            "propagating scattering state");
    }
    if (slabs_.empty() && u_left_ != u_right_) {
        throw InvalidArgument("a profile without slabs needs u_left == u_right");
    }
    for (std::size_t i = 0; i < slabs_.size(); ++i) {
        const Slab& s = slabs_[i];
        if (!std::isfinite(s.x_left) || !std::isfinite(s.width) || !std::isfinite(s.u)) {
            throw InvalidArgument("slab " + std::to_string(i) + " has a non-finite field");
        }
        if (!(s.width > 0.0)) {
            throw InvalidArgument("slab " + std::to_string(i) + " has non-positive width");
        }
        if (i > 0) {
            const double expected = slabs_[i - 1].x_right();
            const double tol = 1e-12 * std::max({1.0, std::abs(expected), std::abs(s.x_left)});
            if (std::abs(s.x_left - expected) > tol) {
                throw InvalidArgument("slab " + std::to_string(i) + " starts at " +
                                      std::to_string(s.x_left) + " but slab " +
                                      std::to_string(i - 1) + " ends at " +
                                      std::to_string(expected) + " (slabs must be contiguous)");
            }
        }
    }
    if (!slabs_.empty()) {
        breakpoints_.reserve(slabs_.size() + 1);
        for (const auto& s : slabs_) breakpoints_.push_back(s.x_left);
        breakpoints_.push_back(slabs_.back().x_right());
    }
}

double PotentialProfile::eval(double x) const {
    if (slabs_.empty() || x < breakpoints_.front()) return u_left_;
    if (x >= breakpoints_.back()) return u_right_;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return slabs_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1].u;
}

double PotentialProfile::max_abs_u() const {
    double m = std::max(std::abs(u_left_), std::abs(u_right_));
    for (const auto& s : slabs_) m = std::max(m, std::abs(s.u));
    return m;
}

Interval PotentialProfile::extent() const {
    if (slabs_.empty()) return {0.0, 0.0};
    return {breakpoints_.front(), breakpoints_.back()};
}

Interval PotentialProfile::bounding_box(double pad) const {
    const Interval ext = extent();
    if (pad < 0.0) {
        pad = slabs_.empty() ? 1.0 : 2.0 * ext.width() / static_cast<double>(slabs_.size());
    }
    return {ext.lo - pad, ext.hi + pad};
}

PotentialProfile PotentialProfile::shifted(double du) const {
    std::vector<Slab> out = slabs_;
    for (auto& s : out) s.u += du;
    return PotentialProfile(std::move(out), u_left_ + du, u_right_ + du);
}

PotentialProfile build_profile(std::vector<Slab> slabs, double u_left, double u_right) {
    return PotentialProfile(std::move(slabs), u_left, u_right);
}

PotentialProfile profile_from_breakpoints(std::span<const double> breakpoints,
                                          std::span<const double> values, double u_left,
                                          double u_right) {
    if (breakpoints.empty() ? !values.empty() : values.size() + 1 != breakpoints.size()) {
        throw InvalidArgument("need one value per slab (breakpoints.size() - 1)");
    }
    std::vector<Slab> slabs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        slabs.push_back({breakpoints[i], breakpoints[i + 1] - breakpoints[i], values[i]});
    }
    return PotentialProfile(std::move(slabs), u_left, u_right);
}

Interval SymmetryTransform::apply(const Interval& iv) const {
    const double a = apply(iv.lo);
    const double b = apply(iv.hi);
    return {std::min(a, b), std::max(a, b)};
}

std::string SymmetryTransform::describe() const {
    char buf[96];
    if (is_inversion()) {
        std::snprintf(buf, sizeof buf, "inversion(alpha=%.17g)", center());
    } else {
        std::snprintf(buf, sizeof buf, "translation(L=%.17g)", rho);
    }
    return buf;
}

namespace {

// Sorted, deduplicated elementary points. Points closer than `snap` to an
// earlier accepted point collapse onto it; breakpoints are inserted first so
// they win over their near-identical preimages.
std::vector<double> elementary_points(const std::vector<double>& primary,
                                      const std::vector<double>& secondary, double snap) {
    std::vector<double> pts = primary;
    std::sort(pts.begin(), pts.end());
    for (double s : secondary) {
        const auto it = std::lower_bound(pts.begin(), pts.end(), s);
        const bool near_next = it != pts.end() && std::abs(*it - s) <= snap;
        const bool near_prev = it != pts.begin() && std::abs(*(it - 1) - s) <= snap;
        if (!near_next && !near_prev) pts.insert(it, s);
    }
    return pts;
}

}  // namespace

Domain symmetry_set(const PotentialProfile& profile, const SymmetryTransform& f,
                    const SymmetrySetOptions& options) {
    const Interval box = profile.bounding_box(options.pad);
    const double tol_u = options.tol_u >= 0.0 ? options.tol_u : 1e-12 * profile.max_abs_u();
    const double snap =
        1e-12 * std::max({1.0, std::abs(box.lo), std::abs(box.hi), std::abs(f.rho)});

    std::vector<double> primary{box.lo, box.hi};
    for (double b : profile.breakpoints()) {
        if (b > box.lo && b < box.hi) primary.push_back(b);
    }
    std::vector<double> preimages;
    for (double b : profile.breakpoints()) {
        const double p = f.preimage(b);
        if (p > box.lo && p < box.hi) preimages.push_back(p);
    }
    const std::vector<double> pts = elementary_points(primary, preimages, snap);

    std::vector<Interval> members;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = pts[i + 1];
        const double mid = 0.5 * (lo + hi);
        if (std::abs(profile.eval(mid) - profile.eval(f.apply(mid))) <= tol_u) {
            if (!members.empty() && members.back().hi == lo) {
                members.back().hi = hi;
            } else {
                members.push_back({lo, hi});
            }
        }
    }
    return Domain(std::move(members));
}

bool covers(const Domain& domain, const Interval& box) {
    return domain.size() == 1 && domain.intervals().front() == box;
}

}  // namespace locsym
