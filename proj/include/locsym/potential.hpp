#pragma once

// Piecewise-constant potentials U(x), the two discrete 1D transforms
// (inversion and translation), and the exact set on which U(x) = U(F(x)).
//
// Units are dimensionless: U = E - V for matter waves (2m/hbar^2 = 1) and
// U = omega^2 n^2 for optical waves (c = 1).

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace locsym {

struct Slab {
    double x_left = 0.0;
    double width = 0.0;
    double u = 0.0;

    [[nodiscard]] double x_right() const { return x_left + width; }
    friend bool operator==(const Slab&, const Slab&) = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted list of disjoint closed intervals.
class Domain {
public:
    Domain() = default;
    // Sorts and merges touching or overlapping intervals; drops empty ones.
    explicit Domain(std::vector<Interval> intervals);

    [[nodiscard]] const std::vector<Interval>& intervals() const& { return intervals_; }
    [[nodiscard]] std::vector<Interval> intervals() && { return std::move(intervals_); }
    [[nodiscard]] bool empty() const { return intervals_.empty(); }
    [[nodiscard]] std::size_t size() const { return intervals_.size(); }
    [[nodiscard]] double measure() const;
    [[nodiscard]] bool contains(double x) const;
    // Index of the component containing x, if any.
    [[nodiscard]] std::optional<std::size_t> component_of(double x) const;

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    std::vector<Interval> intervals_;
};

// Real U(x): u_left below the first slab, the slab values inside, u_right beyond.
// Right-continuous at every breakpoint.
class PotentialProfile {
public:
    // Throws InvalidArgument on gaps/overlaps, non-positive widths or non-finite values,
    // PhysicsError on a non-positive asymptotic value.
    PotentialProfile(std::vector<Slab> slabs, double u_left, double u_right);

    [[nodiscard]] const std::vector<Slab>& slabs() const { return slabs_; }
    [[nodiscard]] double u_left() const { return u_left_; }
    [[nodiscard]] double u_right() const { return u_right_; }
    [[nodiscard]] bool empty() const { return slabs_.empty(); }

    // b_0 < b_1 < ... < b_n; slab i spans [b_i, b_{i+1}). Empty for free space.
    [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }

    [[nodiscard]] double eval(double x) const;
    [[nodiscard]] double max_abs_u() const;

    // Scatterer extent [b_0, b_n]; [0, 0] for an empty profile.
    [[nodiscard]] Interval extent() const;
    // [b_0 - pad, b_n + pad]. A negative pad selects the default of two average
    // slab widths (1 for an empty profile).
    [[nodiscard]] Interval bounding_box(double pad = -1.0) const;

    // Same geometry with every value (asymptotics included) raised by du.
    [[nodiscard]] PotentialProfile shifted(double du) const;

private:
    std::vector<Slab> slabs_;
    std::vector<double> breakpoints_;
    double u_left_;
    double u_right_;
};

PotentialProfile build_profile(std::vector<Slab> slabs, double u_left, double u_right);

// Convenience: slabs given by consecutive breakpoints and per-slab values.
PotentialProfile profile_from_breakpoints(std::span<const double> breakpoints,
                                          std::span<const double> values, double u_left,
                                          double u_right);

inline double eval_u(const PotentialProfile& profile, double x) { return profile.eval(x); }

// F(x) = sigma * x + rho. sigma = -1 is inversion through rho/2, sigma = +1 translation by rho.
struct SymmetryTransform {
    int sigma = 1;
    double rho = 0.0;

    static SymmetryTransform inversion(double alpha) { return {-1, 2.0 * alpha}; }
    static SymmetryTransform translation(double length) { return {+1, length}; }

    [[nodiscard]] bool is_inversion() const { return sigma < 0; }
    [[nodiscard]] double center() const { return 0.5 * rho; }
    [[nodiscard]] double apply(double x) const { return sigma * x + rho; }
    [[nodiscard]] double preimage(double y) const { return sigma * (y - rho); }
    // Image of a closed interval.
    [[nodiscard]] Interval apply(const Interval& iv) const;

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const SymmetryTransform&, const SymmetryTransform&) = default;
};

inline double transform_point(const SymmetryTransform& f, double x) { return f.apply(x); }

struct SymmetrySetOptions {
    // Negative: 1e-12 * max|U|.
    double tol_u = -1.0;
    // Negative: PotentialProfile::bounding_box default.
    double pad = -1.0;
};

// Exact maximal set {x in box : |U(x) - U(F(x))| <= tol_u}, computed from the
// breakpoints of U and their F-preimages. Never samples.
Domain symmetry_set(const PotentialProfile& profile, const SymmetryTransform& f,
                    const SymmetrySetOptions& options = {});

// True when the domain is a single interval equal to the bounding box.
bool covers(const Domain& domain, const Interval& box);

}  // namespace locsym
