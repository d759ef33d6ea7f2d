#include "locsym/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <optional>
#include <thread>

#include "locsym/output.hpp"

namespace locsym {

namespace {

using io::CsvWriter;
using io::JsonWriter;

std::string indexed(const std::string& stem, std::initializer_list<std::pair<char, std::size_t>> parts,
                    const std::string& ext) {
    std::string name = stem;
    for (const auto& [tag, idx] : parts) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "_%c%03zu", tag, idx);
        name += buf;
    }
    return name + ext;
}

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

DetectOptions detect_options(const RunConfig& c) {
    return {c.tolerances.tol_u, c.tolerances.min_width, c.tolerances.pad};
}

void write_interval(JsonWriter& w, std::string_view key, const Interval& iv) {
    w.key(key).begin_array().value(iv.lo).value(iv.hi).end_array();
}

void write_transform(JsonWriter& w, const SymmetryTransform& f) {
    w.key("transform").begin_object();
    w.field("type", f.is_inversion() ? "inversion" : "translation");
    w.field("sigma", f.sigma).field("rho", f.rho);
    if (f.is_inversion()) {
        w.field("alpha", f.center());
    } else {
        w.field("length", f.rho);
    }
    w.end_object();
}

void write_header(JsonWriter& w, const char* command, const RunConfig& c,
                  const PotentialProfile& profile) {
    w.field("command", command).field("version", c.version);
    w.key("profile").begin_object();
    w.field("u_left", profile.u_left()).field("u_right", profile.u_right());
    w.field("slab_count", profile.slabs().size());
    write_interval(w, "extent", profile.extent());
    write_interval(w, "bounding_box", profile.bounding_box(c.tolerances.pad));
    w.end_object();
    w.field("incidence", c.incidence.mode);
}

std::vector<double> sample_points(const Interval& iv, double step) {
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(iv.width() / step - 1e-9)));
    std::vector<double> xs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) xs[i] = iv.lo + iv.width() * static_cast<double>(i) / n;
    xs.back() = iv.hi;
    return xs;
}

std::string field_csv(const ScatteringState& state, const SymmetryTransform* f, const RunConfig& c) {
    CsvWriter csv({"x", "re_A", "im_A", "abs_A2", "U", "re_Q", "im_Q", "re_Qt", "im_Qt"});
    const double nan = std::nan("");
    for (double x : sample_points(state.profile().bounding_box(c.tolerances.pad), c.field_step)) {
        const FieldSample s = state.field_at(x);
        PointInvariants p{{nan, nan}, {nan, nan}, nan};
        if (f != nullptr) p = invariants_at(state, *f, x);
        csv.row({x, s.value.real(), s.value.imag(), std::norm(s.value), state.profile().eval(x),
                 p.q.real(), p.q.imag(), p.q_tilde.real(), p.q_tilde.imag()});
    }
    return csv.str();
}

void emit(std::vector<std::string>& written, const std::string& dir, const std::string& name,
          const std::string& contents) {
    const std::string p = path_in(dir, name);
    io::write_file(p, contents);
    written.push_back(p);
}

}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

ScatteringState make_state(const RunConfig& c, const PotentialProfile& profile, double energy) {
    const std::string& mode = c.incidence.mode;
    if (mode == "left") return solve_scattering(profile, Incidence::Left, energy);
    if (mode == "right") return solve_scattering(profile, Incidence::Right, energy);
    if (profile.u_left() != profile.u_right()) {
        throw ConfigError("config field 'incidence.mode': even/odd incidence needs u_left == u_right");
    }
    const ScatteringState left = solve_scattering(profile, Incidence::Left, energy);
    const ScatteringState right = solve_scattering(profile, Incidence::Right, energy);
    const double k = left.k_left();
    const cplx phase = std::polar(1.0, 2.0 * k * c.incidence.alpha);
    return superpose(left, 1.0, right, mode == "even" ? phase : -phase);
}

std::vector<SymmetryTransform> analysis_transforms(const RunConfig& c, const PotentialProfile& profile) {
    if (!c.transforms.empty()) return c.transforms;
    std::vector<SymmetryTransform> out;
    for (const auto& finding : detect(profile, detect_options(c))) out.push_back(finding.transform);
    return out;
}

std::vector<Interval> analysis_components(const RunConfig& c, const PotentialProfile& profile,
                                          const SymmetryTransform& f) {
    const Domain set = symmetry_set(profile, f, {c.tolerances.tol_u, c.tolerances.pad});
    const double min_width = c.tolerances.min_width >= 0.0
                                 ? c.tolerances.min_width
                                 : 1e-6 * std::max(profile.extent().width(), 1e-300);
    std::vector<Interval> out;
    for (const Interval& iv : set.intervals()) {
        if (iv.width() >= min_width && !is_trivial(profile, iv, f)) out.push_back(iv);
    }
    return out;
}

std::vector<std::string> run_solve(const RunConfig& c, const std::string& out_dir) {
    const PotentialProfile profile = c.build_profile();
    const std::vector<double> energies = c.energy_list();
    std::vector<std::optional<ScatteringState>> states(energies.size());
    parallel_for(energies.size(), [&](std::size_t i) { states[i] = make_state(c, profile, energies[i]); });

    const SymmetryTransform* f = c.transforms.empty() ? nullptr : &c.transforms.front();
    std::vector<std::string> written;
    JsonWriter w;
    w.begin_object();
    write_header(w, "solve", c, profile);
    w.key("results").begin_array();
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const ScatteringState& s = *states[i];
        const std::string csv_name = indexed("solve_field", {{'e', i}}, ".csv");
        w.begin_object();
        w.field("energy", energies[i]).field("k_left", s.k_left()).field("k_right", s.k_right());
        const Interval box = profile.bounding_box(c.tolerances.pad);
        w.field("current", s.current(box.lo));
        if (s.transmission()) {
            const double kin = s.k_incident();
            const double kout = s.kind() == StateKind::LeftIncidence ? s.k_right() : s.k_left();
            const double flux = kout * std::norm(*s.transmission()) + kin * std::norm(*s.reflection());
            w.field("transmission", *s.transmission()).field("reflection", *s.reflection());
            w.field("flux_residual", std::abs(flux - kin) / kin);
        } else {
            w.key("transmission").null().key("reflection").null().key("flux_residual").null();
        }
        w.field("field_csv", csv_name);
        w.end_object();
        emit(written, out_dir, csv_name, field_csv(s, f, c));
    }
    w.end_array().end_object();
    emit(written, out_dir, "solve.json", w.str());
    return written;
}

std::vector<std::string> run_invariants(const RunConfig& c, const std::string& out_dir) {
    const PotentialProfile profile = c.build_profile();
    const std::vector<double> energies = c.energy_list();
    const std::vector<SymmetryTransform> transforms = analysis_transforms(c, profile);
    std::vector<std::vector<Interval>> comps;
    for (const auto& f : transforms) comps.push_back(analysis_components(c, profile, f));

    struct Result {
        std::optional<ScatteringState> state;
        std::vector<std::vector<InvariantPair>> pairs;
    };
    std::vector<Result> results(energies.size());
    parallel_for(energies.size(), [&](std::size_t i) {
        Result& r = results[i];
        r.state = make_state(c, profile, energies[i]);
        for (std::size_t t = 0; t < transforms.size(); ++t) {
            std::vector<InvariantPair> row;
            for (const Interval& iv : comps[t]) {
                row.push_back(invariant_pair(*r.state, transforms[t], Domain({iv}), c.n_samples));
            }
            r.pairs.push_back(std::move(row));
        }
    });

    const Interval box = profile.bounding_box(c.tolerances.pad);
    std::vector<std::string> written;
    JsonWriter w;
    w.begin_object();
    write_header(w, "invariants", c, profile);
    w.key("results").begin_array();
    for (std::size_t i = 0; i < energies.size(); ++i) {
        w.begin_object();
        w.field("energy", energies[i]);
        w.key("transforms").begin_array();
        for (std::size_t t = 0; t < transforms.size(); ++t) {
            const std::string csv_name = indexed("invariants_field", {{'e', i}, {'t', t}}, ".csv");
            w.begin_object();
            write_transform(w, transforms[t]);
            w.key("components").begin_array();
            for (const InvariantPair& p : results[i].pairs[t]) {
                const Interval& src = p.domain.intervals().front();
                w.begin_object();
                write_interval(w, "source", src);
                write_interval(w, "image", transforms[t].apply(src));
                w.field("kind", to_string(classify(src, transforms[t], box)));
                w.field("q", p.q).field("q_tilde", p.q_tilde).field("j", p.j);
                w.field("scale", p.scale);
                w.field("constancy_residual", p.constancy_residual);
                w.field("constant", p.constant(c.tolerances.constancy));
                w.field("sum_rule_residual", sum_rule_residual(p) / (p.scale * p.scale));
                const auto lambda = eigenvalue_check(p, c.tolerances.eigen, c.tolerances.zero_current);
                w.key("eigenvalue");
                if (lambda) {
                    w.value(*lambda);
                } else {
                    w.null();
                }
                w.end_object();
            }
            w.end_array();
            w.field("field_csv", csv_name);
            w.end_object();
            emit(written, out_dir, csv_name, field_csv(*results[i].state, &transforms[t], c));
        }
        w.end_array();
        w.end_object();
    }
    w.end_array().end_object();
    emit(written, out_dir, "invariants.json", w.str());
    return written;
}

namespace {

void write_findings(JsonWriter& w, std::string_view key, const std::vector<SymmetryFinding>& findings) {
    w.key(key).begin_array();
    for (const auto& finding : findings) {
        w.begin_object();
        write_transform(w, finding.transform);
        w.key("components").begin_array();
        for (const auto& comp : finding.components) {
            w.begin_object();
            write_interval(w, "source", comp.source);
            write_interval(w, "image", comp.image);
            w.field("kind", to_string(comp.kind));
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
}

}  // namespace

std::vector<std::string> run_detect(const RunConfig& c, const std::string& out_dir) {
    const PotentialProfile profile = c.build_profile();
    const std::vector<SymmetryFinding> structural = detect(profile, detect_options(c));
    std::vector<SymmetryTransform> candidates = c.transforms;
    if (candidates.empty()) {
        for (const auto& f : structural) candidates.push_back(f.transform);
    }
    const double energy = c.energy_list().front();
    const ScatteringState state = make_state(c, profile, energy);
    FieldDetectOptions fopt;
    fopt.grid_step = c.tolerances.grid_step;
    fopt.tol = c.tolerances.field_tol;
    fopt.pad = c.tolerances.pad;
    const std::vector<SymmetryFinding> field = field_based_detect(state, candidates, fopt);

    JsonWriter w;
    w.begin_object();
    write_header(w, "detect", c, profile);
    w.field("energy", energy);
    w.field("grid_step", c.tolerances.grid_step);
    write_findings(w, "structural", structural);
    write_findings(w, "field_based", field);

    // Each structural component against the field run of the same transform overlapping it most.
    w.key("agreement").begin_array();
    for (const auto& finding : structural) {
        for (const auto& comp : finding.components) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& ff : field) {
                if (!(ff.transform == finding.transform)) continue;
                for (const auto& run : ff.components) {
                    if (run.source.hi < comp.source.lo || run.source.lo > comp.source.hi) continue;
                    best = std::min(best, std::max(std::abs(run.source.lo - comp.source.lo),
                                                   std::abs(run.source.hi - comp.source.hi)));
                }
            }
            w.begin_object();
            write_transform(w, finding.transform);
            write_interval(w, "source", comp.source);
            w.key("endpoint_offset");
            if (std::isfinite(best)) {
                w.value(best);
            } else {
                w.null();
            }
            w.field("within_grid_step", best <= c.tolerances.grid_step * (1.0 + 1e-9));
            w.end_object();
        }
    }
    w.end_array();
    w.end_object();

    std::vector<std::string> written;
    emit(written, out_dir, "detect.json", w.str());
    return written;
}

std::vector<std::string> run_decompose(const RunConfig& c, const std::string& out_dir) {
    const PotentialProfile profile = c.build_profile();
    ClsOptions opt;
    opt.detect = detect_options(c);
    opt.energy = c.energy_list().front();
    opt.incidence = c.incidence.mode == "right" ? Incidence::Right : Incidence::Left;
    opt.n_samples = c.n_samples;
    const ClsDecomposition cls = cls_decompose(profile, opt);
    const std::vector<InvariantPair> pairs = cls.pairs();
    const std::vector<double> residuals = cls_constraint_check(pairs);

    std::vector<std::string> written;
    JsonWriter w;
    w.begin_object();
    write_header(w, "decompose", c, profile);
    w.field("energy", opt.energy);
    w.field("covered", cls.covered);
    w.key("pieces").begin_array();
    for (const auto& piece : cls.pieces) {
        w.begin_object();
        write_interval(w, "region", piece.region);
        write_interval(w, "domain", piece.domain.intervals().front());
        write_transform(w, piece.transform);
        w.field("q", piece.invariants.q).field("q_tilde", piece.invariants.q_tilde);
        w.field("j", piece.invariants.j);
        w.field("constancy_residual", piece.invariants.constancy_residual);
        w.end_object();
    }
    w.end_array();
    w.key("constraint_residuals").begin_array();
    for (double r : residuals) w.value(r);
    w.end_array();
    w.end_object();
    emit(written, out_dir, "decompose.json", w.str());

    CsvWriter csv({"x", "re_Qc", "im_Qc", "re_Qtc", "im_Qtc"});
    const double nan = std::nan("");
    if (!profile.empty()) {
        for (double x : sample_points(profile.extent(), c.field_step)) {
            const auto q = cls.q_c(x);
            const auto qt = cls.q_tilde_c(x);
            csv.row({x, q ? q->real() : nan, q ? q->imag() : nan, qt ? qt->real() : nan,
                     qt ? qt->imag() : nan});
        }
    }
    emit(written, out_dir, "decompose_qc.csv", csv.str());
    return written;
}

std::vector<std::string> run_mapcheck(const RunConfig& c, const std::string& out_dir) {
    const PotentialProfile profile = c.build_profile();
    const std::vector<double> energies = c.energy_list();
    const std::vector<SymmetryTransform> transforms = analysis_transforms(c, profile);
    std::vector<std::vector<Interval>> comps;
    for (const auto& f : transforms) comps.push_back(analysis_components(c, profile, f));

    struct Entry {
        std::size_t transform;
        Interval source;
        double residual;
    };
    std::vector<std::vector<Entry>> results(energies.size());
    parallel_for(energies.size(), [&](std::size_t i) {
        const ScatteringState state = make_state(c, profile, energies[i]);
        for (std::size_t t = 0; t < transforms.size(); ++t) {
            const SymmetryTransform& f = transforms[t];
            for (const Interval& iv : comps[t]) {
                const InvariantPair pair = invariant_pair(state, f, Domain({iv}), c.n_samples);
                double worst = 0.0;
                double amp = 0.0;
                for (int k = 0; k < c.n_samples; ++k) {
                    const double x = iv.lo + iv.width() * k / (c.n_samples - 1);
                    const FieldSample s = state.field_at(x);
                    const cplx actual = state.field_at(f.apply(x)).value;
                    const cplx predicted =
                        map_field(pair, s, c.tolerances.zero_current);
                    worst = std::max(worst, std::abs(predicted - actual));
                    amp = std::max({amp, std::abs(s.value), std::abs(actual)});
                }
                results[i].push_back({t, iv, amp > 0.0 ? worst / amp : worst});
            }
        }
    });

    double overall = 0.0;
    JsonWriter w;
    w.begin_object();
    write_header(w, "mapcheck", c, profile);
    w.field("tolerance", c.tolerances.mapping);
    w.key("results").begin_array();
    for (std::size_t i = 0; i < energies.size(); ++i) {
        for (const Entry& e : results[i]) {
            overall = std::max(overall, e.residual);
            w.begin_object();
            w.field("energy", energies[i]);
            write_transform(w, transforms[e.transform]);
            write_interval(w, "source", e.source);
            write_interval(w, "image", transforms[e.transform].apply(e.source));
            w.field("max_residual", e.residual);
            w.end_object();
        }
    }
    w.end_array();
    w.field("max_residual", overall);
    w.field("pass", overall <= c.tolerances.mapping);
    w.end_object();
    std::vector<std::string> written;
    emit(written, out_dir, "mapcheck.json", w.str());
    return written;
}

std::vector<std::string> run_band(const RunConfig& c, const std::string& out_dir) {
    if (!c.cell) throw ConfigError("config field 'cell': required by the band command");
    const PotentialProfile profile = c.build_profile();
    const std::vector<double> energies = c.energy_list();
    std::vector<std::optional<CellMatrix>> mats(energies.size());
    parallel_for(energies.size(), [&](std::size_t i) {
        mats[i] = unit_cell_transfer_matrix(profile, *c.cell, energies[i]);
    });

    JsonWriter w;
    CsvWriter csv({"energy", "half_trace", "in_band", "phase"});
    w.begin_object();
    write_header(w, "band", c, profile);
    write_interval(w, "cell", *c.cell);
    w.key("results").begin_array();
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const CellMatrix& m = *mats[i];
        const auto bloch = bloch_state(m);
        w.begin_object();
        w.field("energy", energies[i]);
        w.field("half_trace", m.half_trace());
        w.field("determinant_residual", std::abs(m.determinant() - 1.0));
        if (const auto* mode = std::get_if<BlochMode>(&bloch)) {
            w.field("in_band", true).field("phase", mode->phase).field("eigenvalue", mode->eigenvalue);
            csv.row({energies[i], m.half_trace(), 1.0, mode->phase});
        } else {
            w.field("in_band", false).key("phase").null().key("eigenvalue").null();
            csv.row({energies[i], m.half_trace(), 0.0, std::nan("")});
        }
        w.end_object();
    }
    w.end_array().end_object();
    std::vector<std::string> written;
    emit(written, out_dir, "band.json", w.str());
    emit(written, out_dir, "band.csv", csv.str());
    return written;
}

std::vector<std::string> run_scan(const RunConfig& c, const std::string& out_dir) {
    const PotentialProfile profile = c.build_profile();
    const std::vector<double> energies = c.energy_list();
    const std::vector<SymmetryTransform> transforms = analysis_transforms(c, profile);
    struct ScanDomain {
        std::size_t transform;
        Interval source;
    };
    std::vector<ScanDomain> domains;
    for (std::size_t t = 0; t < transforms.size(); ++t) {
        for (const Interval& iv : analysis_components(c, profile, transforms[t])) domains.push_back({t, iv});
    }

    std::vector<std::vector<InvariantPair>> rows(energies.size());
    parallel_for(energies.size(), [&](std::size_t i) {
        const ScatteringState state = make_state(c, profile, energies[i]);
        for (const auto& d : domains) {
            rows[i].push_back(invariant_pair(state, transforms[d.transform], Domain({d.source}), c.n_samples));
        }
    });

    std::vector<std::string> written;
    JsonWriter w;
    w.begin_object();
    write_header(w, "scan", c, profile);
    w.field("energy_count", energies.size());
    w.key("domains").begin_array();
    for (std::size_t d = 0; d < domains.size(); ++d) {
        const std::string csv_name = indexed("scan_domain", {{'d', d}}, ".csv");
        CsvWriter csv({"E", "re_Q", "im_Q", "re_Qt", "im_Qt", "J", "sum_rule_residual"});
        for (std::size_t i = 0; i < energies.size(); ++i) {
            const InvariantPair& p = rows[i][d];
            csv.row({energies[i], p.q.real(), p.q.imag(), p.q_tilde.real(), p.q_tilde.imag(), p.j,
                     sum_rule_residual(p)});
        }
        emit(written, out_dir, csv_name, csv.str());
        w.begin_object();
        write_transform(w, transforms[domains[d].transform]);
        write_interval(w, "source", domains[d].source);
        w.field("csv", csv_name);
        w.end_object();
    }
    w.end_array().end_object();
    emit(written, out_dir, "scan.json", w.str());
    return written;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"solve",    "invariants", "detect", "decompose",
                                                "mapcheck", "band",       "scan"};
    return names;
}

CommandFn find_command(const std::string& name) {
    if (name == "solve") return &run_solve;
    if (name == "invariants") return &run_invariants;
    if (name == "detect") return &run_detect;
    if (name == "decompose") return &run_decompose;
    if (name == "mapcheck") return &run_mapcheck;
    if (name == "band") return &run_band;
    if (name == "scan") return &run_scan;
    return nullptr;
}

}  // namespace locsym
