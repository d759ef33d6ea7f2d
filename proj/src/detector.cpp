#include "locsym/detector.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "locsym/errors.hpp"

namespace locsym {

namespace {

double default_min_width(const PotentialProfile& p, double requested) {
    if (requested >= 0.0) return requested;
    return 1e-6 * std::max(p.extent().width(), 1e-300);
}

double snap_tolerance(const PotentialProfile& p) {
    const Interval box = p.bounding_box();
    return 1e-12 * std::max({1.0, std::abs(box.lo), std::abs(box.hi)});
}

// Replaces x by the nearest breakpoint when closer than tol.
double snap_to_breakpoint(const PotentialProfile& p, double x, double tol) {
    const auto& b = p.breakpoints();
    const auto it = std::lower_bound(b.begin(), b.end(), x);
    if (it != b.end() && std::abs(*it - x) <= tol) return *it;
    if (it != b.begin() && std::abs(*(it - 1) - x) <= tol) return *(it - 1);
    return x;
}

void dedupe_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v) {
        if (out.empty() || std::abs(x - out.back()) > 1e-12 * std::max(1.0, std::abs(x))) {
            out.push_back(x);
        }
    }
    v = std::move(out);
}

std::vector<SymmetryComponent> components_for(const PotentialProfile& profile,
                                              const SymmetryTransform& f,
                                              const DetectOptions& options, double min_width) {
    const Interval box = profile.bounding_box(options.pad);
    const Domain set = symmetry_set(profile, f, {options.tol_u, options.pad});
    std::vector<SymmetryComponent> out;
    for (const Interval& iv : set.intervals()) {
        if (iv.width() < min_width || is_trivial(profile, iv, f)) continue;
        out.push_back({iv, f.apply(iv), classify(iv, f, box)});
    }
    return out;
}

void sort_findings(std::vector<SymmetryFinding>& findings) {
    std::stable_sort(findings.begin(), findings.end(),
                     [](const SymmetryFinding& a, const SymmetryFinding& b) {
                         const double wa = a.widest();
                         const double wb = b.widest();
                         if (wa != wb) return wa > wb;
                         return std::tie(a.transform.sigma, a.transform.rho) <
                                std::tie(b.transform.sigma, b.transform.rho);
                     });
}

}  // namespace

const char* to_string(SymmetryKind kind) {
    switch (kind) {
        case SymmetryKind::NonGapped: return "non-gapped";
        case SymmetryKind::Gapped: return "gapped";
        case SymmetryKind::Global: return "global";
    }
    return "non-gapped";
}

double SymmetryFinding::widest() const {
    double w = 0.0;
    for (const auto& c : components) w = std::max(w, c.source.width());
    return w;
}

SymmetryKind classify(const Interval& source, const SymmetryTransform& f, const Interval& box) {
    if (source == box) return SymmetryKind::Global;
    const Interval image = f.apply(source);
    if (image.hi < source.lo || source.hi < image.lo) return SymmetryKind::Gapped;
    return SymmetryKind::NonGapped;
}

bool is_trivial(const PotentialProfile& profile, const Interval& source,
                const SymmetryTransform& f) {
    if (profile.empty()) return false;
    const Interval ext = profile.extent();
    auto reaches = [&](const Interval& iv) { return iv.hi > ext.lo && iv.lo < ext.hi; };
    return !reaches(source) && !reaches(f.apply(source));
}

std::vector<SymmetryTransform> candidate_transforms(const PotentialProfile& profile,
                                                    const DetectOptions& options) {
    if (profile.empty()) throw InvalidArgument("candidate_transforms: profile has no slabs");
    const auto& b = profile.breakpoints();
    std::vector<double> rhos_inv;
    std::vector<double> rhos_tr;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i; j < b.size(); ++j) {
            rhos_inv.push_back(b[i] + b[j]);
            if (j > i) rhos_tr.push_back(b[j] - b[i]);
        }
    }
    dedupe_sorted(rhos_inv);
    dedupe_sorted(rhos_tr);

    const double min_width = default_min_width(profile, options.min_width);
    std::vector<SymmetryTransform> out;
    auto keep = [&](SymmetryTransform f) {
        if (!components_for(profile, f, options, min_width).empty()) out.push_back(f);
    };
    for (double rho : rhos_inv) keep({-1, rho});
    for (double rho : rhos_tr) keep({+1, rho});
    return out;
}

std::vector<SymmetryFinding> detect(const PotentialProfile& profile, const DetectOptions& options) {
    if (profile.empty()) return {};
    const double min_width = default_min_width(profile, options.min_width);
    std::vector<SymmetryFinding> findings;
    for (const SymmetryTransform& f : candidate_transforms(profile, options)) {
        auto comps = components_for(profile, f, options, min_width);
        if (!comps.empty()) findings.push_back({f, std::move(comps)});
    }
    sort_findings(findings);
    return findings;
}

std::vector<SymmetryFinding> field_based_detect(const ScatteringState& state,
                                                std::span<const SymmetryTransform> candidates,
                                                const FieldDetectOptions& options) {
    if (!(options.grid_step > 0.0)) throw InvalidArgument("field_based_detect: grid_step must be > 0");
    if (options.window < 2) throw InvalidArgument("field_based_detect: window must be >= 2");
    const PotentialProfile& profile = state.profile();
    const Interval box = profile.bounding_box(options.pad);
    const auto n = static_cast<std::size_t>(std::ceil(box.width() / options.grid_step));
    const auto w = static_cast<std::size_t>(options.window);
    if (n + 1 < w) throw InvalidArgument("field_based_detect: grid coarser than one window");

    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = box.lo + box.width() * static_cast<double>(i) / n;
    grid.back() = box.hi;
    const double limit = options.tol * state_scale(state);

    std::vector<SymmetryFinding> findings;
    std::vector<cplx> q(grid.size());
    std::vector<cplx> qt(grid.size());
    for (const SymmetryTransform& f : candidates) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const PointInvariants p = invariants_at(state, f, grid[i]);
            q[i] = p.q;
            qt[i] = p.q_tilde;
        }
        auto flat = [&](std::size_t k) {
            for (std::size_t i = k; i < k + w; ++i) {
                for (std::size_t j = i + 1; j < k + w; ++j) {
                    if (std::abs(q[i] - q[j]) + std::abs(qt[i] - qt[j]) > limit) return false;
                }
            }
            return true;
        };
        SymmetryFinding finding{f, {}};
        std::size_t k = 0;
        while (k + w <= grid.size()) {
            if (!flat(k)) {
                ++k;
                continue;
            }
            std::size_t end = k;
            while (end + 1 + w <= grid.size() && flat(end + 1)) ++end;
            const Interval run{grid[k], grid[end + w - 1]};
            if (!is_trivial(profile, run, f)) {
                finding.components.push_back({run, f.apply(run), classify(run, f, box)});
            }
            k = end + 1;
        }
        if (!finding.components.empty()) findings.push_back(std::move(finding));
    }
    sort_findings(findings);
    return findings;
}

const ClsPiece* ClsDecomposition::piece_at(double x) const {
    for (const auto& p : pieces) {
        if (p.region.lo <= x && x < p.region.hi) return &p;
    }
    if (!pieces.empty() && x == pieces.back().region.hi) return &pieces.back();
    return nullptr;
}

std::optional<cplx> ClsDecomposition::q_c(double x) const {
    const ClsPiece* p = piece_at(x);
    if (p == nullptr) return std::nullopt;
    return p->invariants.q;
}

std::optional<cplx> ClsDecomposition::q_tilde_c(double x) const {
    const ClsPiece* p = piece_at(x);
    if (p == nullptr) return std::nullopt;
    return p->invariants.q_tilde;
}

std::vector<InvariantPair> ClsDecomposition::pairs() const {
    std::vector<InvariantPair> out;
    out.reserve(pieces.size());
    for (const auto& p : pieces) out.push_back(p.invariants);
    return out;
}

ClsDecomposition cls_decompose(const PotentialProfile& profile, const ClsOptions& options) {
    ClsDecomposition result;
    if (profile.empty()) return result;

    const double min_width = default_min_width(profile, options.detect.min_width);
    const double snap = snap_tolerance(profile);
    const Interval scatterer = profile.extent();
    const std::vector<SymmetryFinding> findings = detect(profile, options.detect);

    struct Choice {
        double end;
        Interval domain;
        SymmetryTransform transform;
    };

    double frontier = scatterer.lo;
    while (frontier < scatterer.hi) {
        std::optional<Choice> best;
        auto better = [&](const Choice& c) {
            if (!best) return true;
            if (c.end != best->end) return c.end > best->end;
            if (c.transform.sigma != best->transform.sigma) return c.transform.sigma < 0;
            return std::abs(c.transform.rho) < std::abs(best->transform.rho);
        };
        for (const SymmetryFinding& finding : findings) {
            const SymmetryTransform& f = finding.transform;
            for (const SymmetryComponent& comp : finding.components) {
                const Interval& c = comp.source;
                const double start = std::max(c.lo, scatterer.lo);
                if (std::abs(start - frontier) > snap || c.hi <= frontier) continue;
                Choice choice{0.0, {}, f};
                if (f.is_inversion()) {
                    const double mirror = f.apply(frontier);
                    if (mirror <= frontier || c.hi < mirror - snap) continue;
                    choice.end = snap_to_breakpoint(profile, std::min(mirror, scatterer.hi), snap);
                    choice.domain = {frontier, mirror};
                } else {
                    const double reach = std::min(c.hi + f.rho, scatterer.hi);
                    if (reach - f.rho < frontier - snap || c.hi - frontier < f.rho - snap) continue;
                    choice.end = snap_to_breakpoint(profile, reach, snap);
                    choice.domain = {frontier, std::max(frontier, choice.end - f.rho)};
                }
                if (choice.end - frontier < min_width) continue;
                if (better(choice)) best = choice;
            }
        }
        if (!best) break;
        ClsPiece piece;
        piece.region = {frontier, best->end};
        piece.domain = Domain({best->domain});
        piece.transform = best->transform;
        result.pieces.push_back(std::move(piece));
        frontier = best->end;
    }
    result.covered = frontier >= scatterer.hi;

    if (!result.pieces.empty()) {
        const ScatteringState state = solve_scattering(profile, options.incidence, options.energy);
        for (ClsPiece& piece : result.pieces) {
            piece.invariants =
                invariant_pair(state, piece.transform, piece.domain, options.n_samples);
        }
    }
    return result;
}

std::vector<double> cls_constraint_check(std::span<const InvariantPair> pieces) {
    std::vector<double> out;
    if (pieces.size() < 2) return out;
    for (const auto& p : pieces) {
        if (p.state_id != pieces.front().state_id) {
            throw InvalidArgument("cls_constraint_check: pieces come from different states");
        }
    }
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const InvariantPair& a = pieces[i];
        const InvariantPair& b = pieces[i + 1];
        if (a.transform.sigma == b.transform.sigma) {
            const double num = std::norm(b.q) - std::norm(b.q_tilde);
            const double den = std::norm(a.q) - std::norm(a.q_tilde);
            out.push_back(std::abs(num / den - 1.0));
        } else {
            const double j2 = a.j * a.j;
            out.push_back(std::max(sum_rule_residual(a), sum_rule_residual(b)) / j2);
        }
    }
    return out;
}

}  // namespace locsym
