// Seeded profile generators with planted symmetries.
// Widths are multiples of 1/16 so every breakpoint sum is exact in binary.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "locsym/detector.hpp"
#include "locsym/potential.hpp"
#include "oracles.hpp"

namespace fixture {

using locsym::Interval;
using locsym::PotentialProfile;
using locsym::Slab;
using locsym::SymmetryKind;
using locsym::SymmetryTransform;

struct Piece {
    double width;
    double u;
};

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double width() { return integer(4, 24) / 16.0; }
    double value() { return uniform(-1.0, 4.0); }
    double asymptote() { return uniform(0.5, 3.0); }

    std::vector<Piece> pieces(int n) {
        std::vector<Piece> out;
        for (int i = 0; i < n; ++i) out.push_back({width(), value()});
        return out;
    }

    std::vector<Piece> palindrome(int half, bool odd_center) {
        auto left = pieces(half);
        std::vector<Piece> out = left;
        if (odd_center) out.push_back({width(), value()});
        out.insert(out.end(), left.rbegin(), left.rend());
        return out;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline std::vector<Slab> lay_out(const std::vector<Piece>& pieces, double x0 = 0.0) {
    std::vector<Slab> out;
    double x = x0;
    for (const auto& p : pieces) {
        out.push_back({x, p.width, p.u});
        x += p.width;
    }
    return out;
}

inline double total_width(const std::vector<Piece>& pieces) {
    double w = 0.0;
    for (const auto& p : pieces) w += p.width;
    return w;
}

inline void append(std::vector<Piece>& a, const std::vector<Piece>& b) {
    a.insert(a.end(), b.begin(), b.end());
}

inline oracle::Landscape landscape(const PotentialProfile& p) {
    oracle::Landscape l{{}, p.u_left(), p.u_right()};
    for (const auto& s : p.slabs()) l.slabs.push_back({s.x_left, s.x_right(), s.u});
    return l;
}

struct Planted {
    PotentialProfile profile;
    SymmetryTransform transform;
    Interval source;
    Interval image;
    SymmetryKind kind;
};

enum class Plant { NonGappedInversion, GappedInversion, NonGappedTranslation, GappedTranslation };

inline const char* to_string(Plant p) {
    switch (p) {
        case Plant::NonGappedInversion: return "non-gapped inversion";
        case Plant::GappedInversion: return "gapped inversion";
        case Plant::NonGappedTranslation: return "non-gapped translation";
        case Plant::GappedTranslation: return "gapped translation";
    }
    return "?";
}

// Flank | planted structure | flank, with random asymptotes.
inline Planted planted(Plant kind, std::uint64_t seed) {
    Gen g(seed);
    std::vector<Piece> all = g.pieces(g.integer(1, 3));
    const double a = total_width(all);
    SymmetryTransform f;
    Interval source, image;
    SymmetryKind expect = SymmetryKind::NonGapped;

    switch (kind) {
        case Plant::NonGappedInversion: {
            auto unit = g.palindrome(g.integer(1, 3), g.integer(0, 1) == 1);
            const double w = total_width(unit);
            append(all, unit);
            f = SymmetryTransform::inversion(a + 0.5 * w);
            source = image = {a, a + w};
            break;
        }
        case Plant::GappedInversion: {
            auto unit = g.pieces(g.integer(1, 3));
            auto gap = g.pieces(g.integer(2, 3));
            const double w = total_width(unit);
            const double gw = total_width(gap);
            append(all, unit);
            append(all, gap);
            append(all, std::vector<Piece>(unit.rbegin(), unit.rend()));
            f = SymmetryTransform::inversion(a + w + 0.5 * gw);
            source = {a, a + w};
            image = {a + w + gw, a + 2 * w + gw};
            expect = SymmetryKind::Gapped;
            break;
        }
        case Plant::NonGappedTranslation: {
            auto cell = g.pieces(g.integer(2, 3));
            const double w = total_width(cell);
            const int reps = g.integer(3, 4);
            for (int i = 0; i < reps; ++i) append(all, cell);
            f = SymmetryTransform::translation(w);
            source = {a, a + (reps - 1) * w};
            image = {a + w, a + reps * w};
            break;
        }
        case Plant::GappedTranslation: {
            auto unit = g.pieces(g.integer(1, 3));
            auto gap = g.pieces(g.integer(2, 3));
            const double w = total_width(unit);
            const double gw = total_width(gap);
            append(all, unit);
            append(all, gap);
            append(all, unit);
            f = SymmetryTransform::translation(w + gw);
            source = {a, a + w};
            image = {a + w + gw, a + 2 * w + gw};
            expect = SymmetryKind::Gapped;
            break;
        }
    }
    append(all, g.pieces(g.integer(1, 3)));
    const double ul = g.asymptote();
    const double ur = g.asymptote();
    return {PotentialProfile(lay_out(all), ul, ur), f, source, image, expect};
}

inline Plant plant_kind(int i) { return static_cast<Plant>(i % 4); }

// Random profile without planted structure.
inline PotentialProfile random_profile(std::uint64_t seed, int min_slabs = 2, int max_slabs = 8) {
    Gen g(seed);
    auto p = g.pieces(g.integer(min_slabs, max_slabs));
    const double ul = g.asymptote();
    const double ur = g.asymptote();
    return {lay_out(p, g.integer(-16, 16) / 8.0), ul, ur};
}

// Mirror-symmetric profile; returns the mirror center in alpha.
inline PotentialProfile symmetric_profile(std::uint64_t seed, double& alpha) {
    Gen g(seed);
    auto p = g.palindrome(g.integer(1, 4), g.integer(0, 1) == 1);
    const double u = g.asymptote();
    alpha = 0.5 * total_width(p);
    return {lay_out(p), u, u};
}

// Back-to-back mirror-symmetric units. Returns the unit boundaries.
inline PotentialProfile cls_profile(std::uint64_t seed, std::vector<double>& bounds) {
    Gen g(seed);
    std::vector<Piece> all;
    bounds = {0.0};
    const int units = g.integer(2, 4);
    for (int i = 0; i < units; ++i) {
        append(all, g.palindrome(g.integer(1, 2), g.integer(0, 1) == 1));
        bounds.push_back(total_width(all));
    }
    return {lay_out(all), g.asymptote(), g.asymptote()};
}

// Two-slab periodic cell repeated `cells` times.
struct Lattice {
    PotentialProfile profile;
    Piece first;
    Piece second;
    double period;
    int cells;
};

inline Lattice lattice(std::uint64_t seed, int cells = 8) {
    Gen g(seed);
    const Piece p1{g.width(), g.uniform(0.5, 4.0)};
    const Piece p2{g.width(), g.uniform(-1.0, 2.0)};
    std::vector<Piece> all;
    for (int i = 0; i < cells; ++i) all.insert(all.end(), {p1, p2});
    const double u = g.asymptote();
    return {PotentialProfile(lay_out(all), u, u), p1, p2, p1.width + p2.width, cells};
}

}  // namespace fixture
