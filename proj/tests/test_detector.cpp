#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "locsym/detector.hpp"
#include "locsym/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace locsym;

namespace {

bool has_candidate(const std::vector<SymmetryTransform>& c, SymmetryTransform f) {
    return std::any_of(c.begin(), c.end(), [&](const SymmetryTransform& g) {
        return g.sigma == f.sigma && std::abs(g.rho - f.rho) < 1e-12;
    });
}

const SymmetryFinding* find(const std::vector<SymmetryFinding>& fs, SymmetryTransform f) {
    for (const auto& x : fs) {
        if (x.transform.sigma == f.sigma && std::abs(x.transform.rho - f.rho) < 1e-12) return &x;
    }
    return nullptr;
}

const SymmetryComponent* component_with_source(const SymmetryFinding& f, const Interval& src) {
    for (const auto& c : f.components) {
        if (c.source == src) return &c;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("candidates: single slab and twin barriers") {
    const auto slab = build_profile({{0.0, 1.0, 1.0}}, 2.0, 2.0);
    CHECK(has_candidate(candidate_transforms(slab), SymmetryTransform::inversion(0.5)));

    const auto twin = build_profile({{0.0, 1.0, 1.0}, {1.0, 2.0, 2.5}, {3.0, 1.0, 1.0}}, 2.0, 2.0);
    CHECK(has_candidate(candidate_transforms(twin), SymmetryTransform::translation(3.0)));

    CHECK_THROWS_AS(candidate_transforms(build_profile({}, 1.0, 1.0)), InvalidArgument);
}

TEST_CASE("detect: mirror-symmetric barrier gives one global inversion") {
    const auto p = build_profile({{0.0, 1.0, 1.0}}, 2.0, 2.0);
    const auto findings = detect(p);
    REQUIRE_FALSE(findings.empty());
    const auto& top = findings.front();
    CHECK(top.transform == SymmetryTransform::inversion(0.5));
    REQUIRE(top.components.size() == 1);
    CHECK(top.components[0].kind == SymmetryKind::Global);
    int global = 0;
    for (const auto& f : findings) {
        for (const auto& c : f.components) global += c.kind == SymmetryKind::Global;
    }
    CHECK(global == 1);
}

TEST_CASE("detect: symmetric unit embedded in an asymmetric background") {
    const auto p = build_profile(
        {{0.0, 0.5, 3.0}, {0.5, 0.5, -1.0}, {1.0, 1.0, 0.25}, {2.0, 0.5, -1.0}, {2.5, 0.75, 1.5}},
        2.0, 1.0);
    const auto fs = detect(p);
    const auto* f = find(fs, SymmetryTransform::inversion(1.5));
    REQUIRE(f);
    const auto* c = component_with_source(*f, {0.5, 2.5});
    REQUIRE(c);
    CHECK(c->kind == SymmetryKind::NonGapped);
}

TEST_CASE("detect: two identical symmetric barriers far apart") {
    const auto p = build_profile({{0.0, 1.0, 0.5}, {1.0, 1.0, 3.0}, {2.0, 2.0, 1.5}, {4.0, 1.0, 0.5}}, 2.0, 2.0);
    const auto fs = detect(p);
    const auto* t = find(fs, SymmetryTransform::translation(4.0));
    REQUIRE(t);
    const auto* ct = component_with_source(*t, {0.0, 1.0});
    REQUIRE(ct);
    CHECK(ct->kind == SymmetryKind::Gapped);
    CHECK(ct->image == Interval{4.0, 5.0});
    // In a uniform background the mirror pair extends outward to the bounding box.
    const auto* pi = find(fs, SymmetryTransform::inversion(2.5));
    REQUIRE(pi);
    const auto box = p.bounding_box();
    const auto* cp = component_with_source(*pi, {box.lo, 1.0});
    REQUIRE(cp);
    CHECK(cp->kind == SymmetryKind::Gapped);
    CHECK(cp->image == Interval{4.0, box.hi});
}

TEST_CASE("classify") {
    const Interval box{-10.0, 10.0};
    CHECK(classify({0.0, 1.0}, SymmetryTransform::translation(3.0), box) == SymmetryKind::Gapped);
    CHECK(classify({0.0, 4.0}, SymmetryTransform::translation(3.0), box) == SymmetryKind::NonGapped);
    CHECK(classify({0.0, 1.0}, SymmetryTransform::inversion(0.5), box) == SymmetryKind::NonGapped);
    CHECK(classify(box, SymmetryTransform::inversion(0.0), box) == SymmetryKind::Global);
    CHECK(std::string(to_string(SymmetryKind::Gapped)) == "gapped");
}

TEST_CASE("detect recovers planted symmetries exactly and soundly") {
    for (int i = 0; i < 40; ++i) {
        const auto fx = fixture::planted(fixture::plant_kind(i), 2000 + i);
        CAPTURE(i);
        CAPTURE(fixture::to_string(fixture::plant_kind(i)));
        const auto fs = detect(fx.profile);
        const auto* f = find(fs, fx.transform);
        REQUIRE(f);
        const auto* c = component_with_source(*f, fx.source);
        REQUIRE(c);
        CHECK(c->kind == fx.kind);
        CHECK(std::abs(c->image.lo - fx.image.lo) < 1e-12);
        CHECK(std::abs(c->image.hi - fx.image.hi) < 1e-12);

        // Soundness: interior samples of every component are symmetric. Samples are
        // offset from the 1/16 grid so they never land on a breakpoint.
        const auto land = fixture::landscape(fx.profile);
        int bad = 0;
        for (const auto& g : fs) {
            for (const auto& comp : g.components) {
                for (int j = 1; j < 16; ++j) {
                    const double x = comp.source.lo + comp.source.width() * (j + 0.3719) / 17;
                    if (!oracle::symmetric_at(land, g.transform.sigma, g.transform.rho, x, 1e-12)) ++bad;
                }
            }
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("candidate completeness against a brute-force rho scan") {
    // W(rho) = widest sampled run inside the scatterer where U(x) = U(F(x)).
    // Every local peak of W wider than min_width must sit on a candidate.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = fixture::random_profile(500 + seed, 3, 5);
        const auto cands = candidate_transforms(p);
        const auto land = fixture::landscape(p);
        const auto ext = p.extent();
        const double dx = 0.005, drho = 1e-3, min_width = 0.1;
        const int nx = static_cast<int>(ext.width() / dx);
        for (int sigma : {-1, 1}) {
            const double lo = sigma < 0 ? 2 * ext.lo : drho;
            const double hi = sigma < 0 ? 2 * ext.hi : ext.width();
            std::vector<double> rhos, width;
            for (double rho = lo; rho <= hi; rho += drho) {
                int run = 0, best = 0;
                for (int i = 0; i < nx; ++i) {
                    const double x = ext.lo + (i + 0.5) * dx;
                    const double y = sigma * x + rho;
                    const bool sym = y > ext.lo && y < ext.hi &&
                                     oracle::symmetric_at(land, sigma, rho, x, 1e-12);
                    run = sym ? run + 1 : 0;
                    best = std::max(best, run);
                }
                rhos.push_back(rho);
                width.push_back(best * dx);
            }
            const int win = static_cast<int>(4 * dx / drho);
            int peaks = 0;
            for (int i = win; i + win < static_cast<int>(rhos.size()); ++i) {
                if (width[i] < min_width) continue;
                bool peak = width[i] > width[i - win] && width[i] > width[i + win];
                for (int j = i - win; j <= i + win; ++j) peak &= width[j] <= width[i];
                if (!peak) continue;
                ++peaks;
                bool matched = false;
                for (const auto& c : cands) {
                    matched |= c.sigma == sigma && std::abs(c.rho - rhos[i]) <= 4 * dx + drho;
                }
                CAPTURE(rhos[i]);
                CHECK(matched);
            }
            if (sigma < 0) CHECK(peaks > 0);  // every slab is mirror-symmetric about its own center
        }
    }
}

TEST_CASE("field-based detection agrees with the structural detector") {
    const FieldDetectOptions opts;
    for (int i = 0; i < 50; ++i) {
        const auto fx = fixture::planted(fixture::plant_kind(i), 3000 + i);
        CAPTURE(i);
        const auto s = solve_scattering(fx.profile, Incidence::Left);
        const std::vector<SymmetryTransform> cands{fx.transform};
        const auto runs = field_based_detect(s, cands, opts);
        REQUIRE(runs.size() == 1);
        bool matched = false;
        for (const auto& c : runs[0].components) {
            matched |= std::abs(c.source.lo - fx.source.lo) <= opts.grid_step &&
                       std::abs(c.source.hi - fx.source.hi) <= opts.grid_step;
        }
        CHECK(matched);
    }
}

TEST_CASE("field-based detection: global barrier, defect, free space") {
    const FieldDetectOptions opts;
    {
        const auto p = build_profile({{0.0, 1.0, 1.0}}, 2.0, 2.0);
        const auto s = solve_scattering(p, Incidence::Left);
        const std::vector<SymmetryTransform> c{SymmetryTransform::inversion(0.5)};
        const auto r = field_based_detect(s, c, opts);
        REQUIRE(r.size() == 1);
        REQUIRE(r[0].components.size() == 1);
        const auto box = p.bounding_box();
        CHECK(std::abs(r[0].components[0].source.lo - box.lo) <= opts.grid_step);
        CHECK(std::abs(r[0].components[0].source.hi - box.hi) <= opts.grid_step);
    }
    {
        // Double barrier with the right barrier perturbed by 1e-2: no run covers the left barrier.
        const auto p = build_profile({{0.0, 1.0, 0.5}, {1.0, 1.37, 2.0}, {2.37, 1.0, 0.5 * 1.01}}, 2.0, 2.0);
        const auto s = solve_scattering(p, Incidence::Left);
        const std::vector<SymmetryTransform> c{SymmetryTransform::translation(2.37)};
        const auto r = field_based_detect(s, c, opts);
        REQUIRE(r.size() == 1);
        for (const auto& comp : r[0].components) {
            CHECK((comp.source.hi <= 0.1 || comp.source.lo >= 0.9));
        }
    }
    {
        const auto p = build_profile({}, 1.0, 1.0);
        const auto s = solve_scattering(p, Incidence::Left);
        const std::vector<SymmetryTransform> c{SymmetryTransform::translation(0.4),
                                               SymmetryTransform::translation(1.3)};
        const auto r = field_based_detect(s, c, opts);
        REQUIRE(r.size() == 2);
        for (const auto& f : r) {
            REQUIRE(f.components.size() == 1);
            CHECK(f.components[0].kind == SymmetryKind::Global);
        }
    }
}

TEST_CASE("CLS: back-to-back mirror units") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::vector<double> bounds;
        const auto p = fixture::cls_profile(seed, bounds);
        const auto cls = cls_decompose(p);
        CAPTURE(seed);
        REQUIRE(cls.covered);
        REQUIRE(cls.pieces.size() == bounds.size() - 1);
        for (std::size_t i = 0; i < cls.pieces.size(); ++i) {
            const auto& piece = cls.pieces[i];
            CHECK(piece.transform.sigma == -1);
            CHECK(piece.transform.center() == 0.5 * (bounds[i] + bounds[i + 1]));
            CHECK(piece.region == Interval{bounds[i], bounds[i + 1]});
            CHECK(piece.invariants.constancy_residual <= 1e-9);
        }
        // Tiling: no gap, no overlap.
        for (std::size_t i = 1; i < cls.pieces.size(); ++i) {
            CHECK(cls.pieces[i].region.lo == cls.pieces[i - 1].region.hi);
        }
        for (double r : cls_constraint_check(cls.pairs())) CHECK(r <= 1e-9);
        // Q_c is piecewise constant with the piece values.
        const double mid = 0.5 * (bounds[0] + bounds[1]);
        REQUIRE(cls.q_c(mid));
        CHECK(*cls.q_c(mid) == cls.pieces[0].invariants.q);
        CHECK_FALSE(cls.q_c(bounds.back() + 1.0));
    }
}

TEST_CASE("CLS: periodic lattice is one translation piece") {
    const auto lat = fixture::lattice(3, 5);
    const auto cls = cls_decompose(lat.profile);
    REQUIRE(cls.covered);
    REQUIRE(cls.pieces.size() == 1);
    CHECK(cls.pieces[0].transform.sigma == 1);
    CHECK(cls.pieces[0].transform.rho == lat.period);
    CHECK(cls.pieces[0].region == Interval{0.0, lat.cells * lat.period});
}

TEST_CASE("CLS: an irrational-width slab leaves the cover incomplete") {
    // The narrow middle slab's own mirror component reaches back into the first
    // slab, and no breakpoint difference is short enough to start inside it.
    const double s = std::numbers::sqrt2 / 8;
    const auto p = build_profile(
        {{0.0, 0.75, 4.0}, {0.75, 1.0, 1.0}, {1.75, s, 3.0}, {1.75 + s, 1.0, 1.0}, {2.75 + s, 0.5, 4.0}},
        2.0, 1.5);
    const auto cls = cls_decompose(p);
    CHECK_FALSE(cls.covered);
    REQUIRE(cls.pieces.size() == 2);
    CHECK(cls.pieces.back().region.hi == 1.75);
}

TEST_CASE("cls_constraint_check contracts") {
    const auto p = build_profile({{0.0, 1.0, 1.0}}, 2.0, 2.0);
    const auto s = solve_scattering(p, Incidence::Left);
    const auto other = solve_scattering(p, Incidence::Left, 0.1);
    const auto a = invariant_pair(s, SymmetryTransform::inversion(0.5), Domain({{0.0, 1.0}}));
    const auto b = invariant_pair(s, SymmetryTransform::translation(0.0), Domain({{0.0, 1.0}}));
    const auto c = invariant_pair(other, SymmetryTransform::inversion(0.5), Domain({{0.0, 1.0}}));
    CHECK(cls_constraint_check(std::vector<InvariantPair>{a}).empty());
    const auto mixed = cls_constraint_check(std::vector<InvariantPair>{a, b});
    REQUIRE(mixed.size() == 1);
    CHECK(mixed[0] <= 1e-10);
    CHECK_THROWS_AS(cls_constraint_check(std::vector<InvariantPair>{a, c}), InvalidArgument);
}
