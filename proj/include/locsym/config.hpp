#pragma once

// Run configuration: a versioned JSON document describing the profile,
// energies, transforms, tolerances and output location.
//
// Energies are additive shifts: the analysed potential is U(x) + E.

#include <optional>
#include <string>
#include <vector>

#include "locsym/errors.hpp"
#include "locsym/potential.hpp"

namespace locsym {

// Schema violation in a configuration file or command line.
class ConfigError : public Error {
public:
    using Error::Error;
};

inline constexpr int kConfigVersion = 1;

// Smooth potential sampled at slab midpoints on [x_min, x_max].
//   gaussian: background + amplitude * exp(-((x - center) / width)^2)
//   sech2:    background + amplitude / cosh^2((x - center) / width)
//   cosine:   background + amplitude * cos(2 pi (x - center) / width)
struct SmoothSpec {
    std::string shape = "gaussian";
    double x_min = 0.0;
    double x_max = 1.0;
    double step = 0.01;
    double background = 1.0;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;

    friend bool operator==(const SmoothSpec&, const SmoothSpec&) = default;
};

struct ProfileSpec {
    double u_left = 1.0;
    double u_right = 1.0;
    std::vector<Slab> slabs;
    std::optional<SmoothSpec> smooth;  // replaces slabs and asymptotics when set

    friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct Tolerances {
    double tol_u = -1.0;        // symmetry of U; negative: 1e-12 max|U|
    double constancy = 1e-9;    // relative spread of Q, Q~ on a component
    double sum_rule = 1e-10;    // relative sum-rule residual
    double mapping = 1e-9;      // relative mapping error
    double zero_current = 1e-10;
    double eigen = 1e-8;        // |Q| threshold for the eigenvalue limit
    double min_width = -1.0;    // negative: 1e-6 scatterer width
    double grid_step = 0.01;    // field-based detection grid
    double field_tol = 1e-8;    // field-based detection flatness
    double pad = -1.0;          // bounding-box padding, negative: default

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct IncidenceSpec {
    // left | right | even | odd. even/odd superpose left and right incidence
    // mirrored about alpha (zero-current states for mirror-symmetric U).
    std::string mode = "left";
    double alpha = 0.0;

    friend bool operator==(const IncidenceSpec&, const IncidenceSpec&) = default;
};

struct RunConfig {
    int version = kConfigVersion;
    ProfileSpec profile;
    std::vector<double> energies;
    std::optional<SweepSpec> sweep;
    std::vector<SymmetryTransform> transforms;
    Tolerances tolerances;
    IncidenceSpec incidence;
    int n_samples = 17;
    double field_step = 0.05;       // spacing of x-resolved CSV output
    std::optional<Interval> cell;   // unit cell for the band command
    std::string output_dir = "out";

    // Sweep (inclusive endpoints) if present, else energies, else {0}.
    [[nodiscard]] std::vector<double> energy_list() const;
    // Unshifted profile. Throws ConfigError on geometry errors and PhysicsError
    // on non-positive asymptotics.
    [[nodiscard]] PotentialProfile build_profile() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Midpoint discretization of a smooth potential.
PotentialProfile discretize(const SmoothSpec& spec);

// Throws ConfigError (with line or field path) or PhysicsError.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::string& path);
std::string emit_config(const RunConfig& config);

}  // namespace locsym
