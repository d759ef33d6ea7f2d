#include "locsym/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace locsym {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field '" + path + "': " + what);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items()) {
        if (!keys.contains(k)) fail(path.empty() ? k : path + "." + k, "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(join(path, key), "missing required number");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(join(path, key), "must be finite");
    return d;
}

double number_or(const json& obj, const std::string& path, const std::string& key, double dflt) {
    return obj.contains(key) ? number(obj, path, key) : dflt;
}

int integer(const json& obj, const std::string& path, const std::string& key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    return v.get<int>();
}

std::string string_or(const json& obj, const std::string& path, const std::string& key,
                      const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
}

SmoothSpec parse_smooth(const json& j, const std::string& path) {
    check_keys(j, path, {"shape", "x_min", "x_max", "step", "background", "amplitude", "center", "width"});
    SmoothSpec s;
    s.shape = string_or(j, path, "shape", s.shape);
    if (s.shape != "gaussian" && s.shape != "sech2" && s.shape != "cosine") {
        fail(join(path, "shape"), "must be one of gaussian, sech2, cosine");
    }
    s.x_min = number(j, path, "x_min");
    s.x_max = number(j, path, "x_max");
    s.step = number(j, path, "step");
    s.background = number(j, path, "background");
    s.amplitude = number_or(j, path, "amplitude", s.amplitude);
    s.center = number_or(j, path, "center", 0.5 * (s.x_min + s.x_max));
    s.width = number_or(j, path, "width", s.width);
    if (!(s.x_max > s.x_min)) fail(join(path, "x_max"), "must exceed x_min");
    if (!(s.step > 0.0)) fail(join(path, "step"), "discretization step must be > 0");
    if (!(s.width > 0.0)) fail(join(path, "width"), "must be > 0");
    return s;
}

ProfileSpec parse_profile(const json& j) {
    const std::string path = "profile";
    check_keys(j, path, {"u_left", "u_right", "slabs", "smooth"});
    ProfileSpec p;
    if (j.contains("smooth")) {
        if (j.contains("slabs")) fail(path, "give either 'slabs' or 'smooth', not both");
        p.smooth = parse_smooth(j.at("smooth"), join(path, "smooth"));
        p.u_left = p.u_right = p.smooth->background;
        return p;
    }
    p.u_left = number(j, path, "u_left");
    p.u_right = number(j, path, "u_right");
    if (j.contains("slabs")) {
        const json& arr = j.at("slabs");
        if (!arr.is_array()) fail(join(path, "slabs"), "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string sp = path + ".slabs[" + std::to_string(i) + "]";
            check_keys(arr[i], sp, {"x_left", "width", "u"});
            Slab s{number(arr[i], sp, "x_left"), number(arr[i], sp, "width"), number(arr[i], sp, "u")};
            if (!(s.width > 0.0)) fail(sp + ".width", "must be > 0");
            p.slabs.push_back(s);
        }
    }
    return p;
}

SymmetryTransform parse_transform(const json& j, const std::string& path) {
    check_keys(j, path, {"sigma", "rho", "inversion", "translation"});
    const int given = static_cast<int>(j.contains("sigma")) + static_cast<int>(j.contains("inversion")) +
                      static_cast<int>(j.contains("translation"));
    if (given != 1) fail(path, "give exactly one of {sigma, rho}, {inversion: alpha}, {translation: L}");
    if (j.contains("inversion")) return SymmetryTransform::inversion(number(j, path, "inversion"));
    if (j.contains("translation")) return SymmetryTransform::translation(number(j, path, "translation"));
    const int sigma = integer(j, path, "sigma", 0);
    if (sigma != 1 && sigma != -1) fail(join(path, "sigma"), "must be -1 or +1");
    return {sigma, number(j, path, "rho")};
}

Tolerances parse_tolerances(const json& j) {
    const std::string path = "tolerances";
    check_keys(j, path, {"tol_u", "constancy", "sum_rule", "mapping", "zero_current", "eigen",
                         "min_width", "grid_step", "field_tol", "pad"});
    Tolerances t;
    t.tol_u = number_or(j, path, "tol_u", t.tol_u);
    t.constancy = number_or(j, path, "constancy", t.constancy);
    t.sum_rule = number_or(j, path, "sum_rule", t.sum_rule);
    t.mapping = number_or(j, path, "mapping", t.mapping);
    t.zero_current = number_or(j, path, "zero_current", t.zero_current);
    t.eigen = number_or(j, path, "eigen", t.eigen);
    t.min_width = number_or(j, path, "min_width", t.min_width);
    t.grid_step = number_or(j, path, "grid_step", t.grid_step);
    t.field_tol = number_or(j, path, "field_tol", t.field_tol);
    t.pad = number_or(j, path, "pad", t.pad);
    if (!(t.grid_step > 0.0)) fail(join(path, "grid_step"), "must be > 0");
    return t;
}

int line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void validate_physics(const RunConfig& c) {
    const PotentialProfile base = c.build_profile();
    for (double e : c.energy_list()) {
        if (base.u_left() + e <= 0.0 || base.u_right() + e <= 0.0) {
            throw PhysicsError("energy " + std::to_string(e) +
                               " makes U(x) non-positive at infinity; U must be asymptotically "
                               "positive for propagating scattering states");
        }
    }
}

}  // namespace

std::vector<double> RunConfig::energy_list() const {
    if (sweep) {
        std::vector<double> out(static_cast<std::size_t>(sweep->count));
        for (int i = 0; i < sweep->count; ++i) {
            out[static_cast<std::size_t>(i)] =
                sweep->count == 1 ? sweep->start
                                  : sweep->start + (sweep->stop - sweep->start) * i / (sweep->count - 1);
        }
        if (sweep->count > 1) out.back() = sweep->stop;
        return out;
    }
    if (!energies.empty()) return energies;
    return {0.0};
}

PotentialProfile RunConfig::build_profile() const {
    try {
        if (profile.smooth) return discretize(*profile.smooth);
        return PotentialProfile(profile.slabs, profile.u_left, profile.u_right);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config field 'profile': ") + e.what());
    }
}

PotentialProfile discretize(const SmoothSpec& s) {
    if (!(s.step > 0.0) || !(s.x_max > s.x_min)) throw InvalidArgument("bad discretization range");
    const auto n = static_cast<std::size_t>(std::ceil((s.x_max - s.x_min) / s.step - 1e-9));
    const double h = (s.x_max - s.x_min) / static_cast<double>(n);
    auto shape = [&](double x) {
        const double z = (x - s.center) / s.width;
        if (s.shape == "gaussian") return std::exp(-z * z);
        if (s.shape == "sech2") return 1.0 / (std::cosh(z) * std::cosh(z));
        return std::cos(2.0 * std::numbers::pi * z);
    };
    std::vector<Slab> slabs;
    slabs.reserve(n);
    double left = s.x_min;
    for (std::size_t i = 0; i < n; ++i) {
        const double right = i + 1 == n ? s.x_max : s.x_min + h * static_cast<double>(i + 1);
        const double mid = 0.5 * (left + right);
        slabs.push_back({left, right - left, s.background + s.amplitude * shape(mid)});
        left = right;
    }
    return PotentialProfile(std::move(slabs), s.background, s.background);
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ":" + std::to_string(line_of(text, e.byte)) +
                          ": malformed JSON (" + e.what() + ")");
    }
    check_keys(root, "", {"version", "profile", "energies", "sweep", "transforms", "tolerances",
                          "incidence", "n_samples", "field_step", "cell", "output"});
    RunConfig c;
    c.version = integer(root, "", "version", -1);
    if (c.version == -1) fail("version", "missing schema version");
    if (c.version != kConfigVersion) {
        fail("version", "unsupported schema version " + std::to_string(c.version));
    }
    if (!root.contains("profile")) fail("profile", "missing");
    c.profile = parse_profile(root.at("profile"));

    if (root.contains("energies") && root.contains("sweep")) {
        fail("energies", "give either 'energies' or 'sweep', not both");
    }
    if (root.contains("energies")) {
        const json& arr = root.at("energies");
        if (!arr.is_array() || arr.empty()) fail("energies", "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number()) fail("energies[" + std::to_string(i) + "]", "expected a number");
            c.energies.push_back(arr[i].get<double>());
        }
    }
    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        check_keys(sw, "sweep", {"start", "stop", "count"});
        SweepSpec s{number(sw, "sweep", "start"), number(sw, "sweep", "stop"),
                    integer(sw, "sweep", "count", 0)};
        if (s.count < 1) fail("sweep.count", "energy sweep count must be >= 1");
        c.sweep = s;
    }
    if (root.contains("transforms")) {
        const json& arr = root.at("transforms");
        if (!arr.is_array()) fail("transforms", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            c.transforms.push_back(parse_transform(arr[i], "transforms[" + std::to_string(i) + "]"));
        }
    }
    if (root.contains("tolerances")) c.tolerances = parse_tolerances(root.at("tolerances"));
    if (root.contains("incidence")) {
        const json& inc = root.at("incidence");
        check_keys(inc, "incidence", {"mode", "alpha"});
        c.incidence.mode = string_or(inc, "incidence", "mode", c.incidence.mode);
        const auto& m = c.incidence.mode;
        if (m != "left" && m != "right" && m != "even" && m != "odd") {
            fail("incidence.mode", "must be one of left, right, even, odd");
        }
        if ((m == "even" || m == "odd") && !inc.contains("alpha")) {
            fail("incidence.alpha", "required for even/odd two-sided incidence");
        }
        c.incidence.alpha = number_or(inc, "incidence", "alpha", 0.0);
    }
    c.n_samples = integer(root, "", "n_samples", c.n_samples);
    if (c.n_samples < 2) fail("n_samples", "must be >= 2");
    c.field_step = number_or(root, "", "field_step", c.field_step);
    if (!(c.field_step > 0.0)) fail("field_step", "must be > 0");
    if (root.contains("cell")) {
        const json& cell = root.at("cell");
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
            fail("cell", "expected [x_start, x_end]");
        }
        c.cell = Interval{cell[0].get<double>(), cell[1].get<double>()};
        if (!(c.cell->hi > c.cell->lo)) fail("cell", "cell must have positive length");
    }
    if (root.contains("output")) {
        check_keys(root.at("output"), "output", {"dir"});
        c.output_dir = string_or(root.at("output"), "output", "dir", c.output_dir);
    }
    validate_physics(c);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string emit_config(const RunConfig& c) {
    ordered root;
    root["version"] = c.version;
    ordered profile;
    if (c.profile.smooth) {
        const SmoothSpec& s = *c.profile.smooth;
        profile["smooth"] = {{"shape", s.shape},          {"x_min", s.x_min},
                             {"x_max", s.x_max},          {"step", s.step},
                             {"background", s.background}, {"amplitude", s.amplitude},
                             {"center", s.center},        {"width", s.width}};
    } else {
        profile["u_left"] = c.profile.u_left;
        profile["u_right"] = c.profile.u_right;
        ordered slabs = ordered::array();
        for (const Slab& s : c.profile.slabs) {
            slabs.push_back({{"x_left", s.x_left}, {"width", s.width}, {"u", s.u}});
        }
        profile["slabs"] = slabs;
    }
    root["profile"] = profile;
    if (c.sweep) {
        root["sweep"] = {{"start", c.sweep->start}, {"stop", c.sweep->stop}, {"count", c.sweep->count}};
    } else if (!c.energies.empty()) {
        root["energies"] = c.energies;
    }
    ordered transforms = ordered::array();
    for (const auto& f : c.transforms) transforms.push_back({{"sigma", f.sigma}, {"rho", f.rho}});
    root["transforms"] = transforms;
    const Tolerances& t = c.tolerances;
    root["tolerances"] = {{"tol_u", t.tol_u},         {"constancy", t.constancy},
                          {"sum_rule", t.sum_rule},   {"mapping", t.mapping},
                          {"zero_current", t.zero_current}, {"eigen", t.eigen},
                          {"min_width", t.min_width}, {"grid_step", t.grid_step},
                          {"field_tol", t.field_tol}, {"pad", t.pad}};
    root["incidence"] = {{"mode", c.incidence.mode}, {"alpha", c.incidence.alpha}};
    root["n_samples"] = c.n_samples;
    root["field_step"] = c.field_step;
    if (c.cell) root["cell"] = {c.cell->lo, c.cell->hi};
    root["output"] = {{"dir", c.output_dir}};
    return root.dump(2) + "\n";
}

}  // namespace locsym
