#pragma once

// Local-symmetry detection for piecewise-constant profiles: structural
// detection from the potential alone, field-based detection from the
// constancy of Q and Q~, and greedy complete-local-symmetry (CLS) covers.

#include <optional>
#include <span>
#include <vector>

#include "locsym/invariants.hpp"
#include "locsym/potential.hpp"
#include "locsym/solver.hpp"

namespace locsym {

enum class SymmetryKind { NonGapped, Gapped, Global };

const char* to_string(SymmetryKind kind);

struct SymmetryComponent {
    Interval source;
    Interval image;
    SymmetryKind kind = SymmetryKind::NonGapped;
};

struct SymmetryFinding {
    SymmetryTransform transform;
    std::vector<SymmetryComponent> components;  // sorted by position

    [[nodiscard]] double widest() const;
};

struct DetectOptions {
    double tol_u = -1.0;      // negative: 1e-12 * max|U|
    double min_width = -1.0;  // negative: 1e-6 * scatterer width
    double pad = -1.0;        // bounding-box padding, negative: profile default
};

// Kind of a source interval under f inside the bounding box.
SymmetryKind classify(const Interval& source, const SymmetryTransform& f, const Interval& box);

// True when neither the source nor its image reaches into the scatterer
// (b_0, b_n): such components only pair up homogeneous asymptotic regions.
// Always false for an empty profile.
bool is_trivial(const PotentialProfile& profile, const Interval& source,
                const SymmetryTransform& f);

// Inversions through every breakpoint midpoint (b_i + b_j) / 2 and translations
// by every breakpoint difference b_j - b_i > 0, deduplicated, keeping those with a
// non-trivial symmetry component of width >= min_width. Throws on an empty profile.
std::vector<SymmetryTransform> candidate_transforms(const PotentialProfile& profile,
                                                    const DetectOptions& options = {});

// One finding per candidate with at least one non-trivial component; findings
// sorted by widest component, descending.
std::vector<SymmetryFinding> detect(const PotentialProfile& profile,
                                    const DetectOptions& options = {});

struct FieldDetectOptions {
    double grid_step = 0.01;
    double tol = 1e-8;  // relative to state_scale
    int window = 5;
    double pad = -1.0;
};

// Runs of grid points over which Q(x) and Q~(x) stay flat: a window of
// `window` consecutive points is flat when the largest pairwise difference
// |dQ| + |dQ~| inside it is <= tol * scale; runs are unions of consecutive
// flat windows. Trivial runs are dropped as in detect().
std::vector<SymmetryFinding> field_based_detect(const ScatteringState& state,
                                                std::span<const SymmetryTransform> candidates,
                                                const FieldDetectOptions& options = {});

struct ClsPiece {
    Interval region;              // part of the scatterer this piece tiles
    Domain domain;                // source domain on which Q, Q~ are evaluated
    SymmetryTransform transform;
    InvariantPair invariants;
};

struct ClsDecomposition {
    std::vector<ClsPiece> pieces;
    bool covered = false;

    // Piecewise-constant Q_c(x), Q~_c(x); empty outside every piece region.
    [[nodiscard]] std::optional<cplx> q_c(double x) const;
    [[nodiscard]] std::optional<cplx> q_tilde_c(double x) const;
    [[nodiscard]] std::vector<InvariantPair> pairs() const;

private:
    [[nodiscard]] const ClsPiece* piece_at(double x) const;
};

struct ClsOptions {
    DetectOptions detect;
    double energy = 0.0;
    Incidence incidence = Incidence::Left;
    int n_samples = kDefaultSamples;
};

// Greedy left-to-right cover of [b_0, b_n] by non-gapped symmetric pieces: at
// each frontier take the piece reaching farthest (ties: inversion first, then
// smaller |rho|). covered = false when no piece starts at the frontier.
ClsDecomposition cls_decompose(const PotentialProfile& profile, const ClsOptions& options = {});

// Per adjacent pair: |(|Q_{i+1}|^2 - |Q~_{i+1}|^2) / (|Q_i|^2 - |Q~_i|^2) - 1| when
// both transforms share sigma; for mixed sigma the larger of the two per-piece
// sum-rule residuals divided by J^2. Throws InvalidArgument when pieces come from
// different states.
std::vector<double> cls_constraint_check(std::span<const InvariantPair> pieces);

}  // namespace locsym
