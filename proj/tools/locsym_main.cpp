// locsym: command-line front end.
//
//   locsym <command> --config PATH [--out DIR] [tolerance overrides]
//
// Exit codes: 0 success, 2 config error, 3 physics precondition,
// 4 mapping requested on a zero-current state, 1 anything else.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "locsym/commands.hpp"
#include "locsym/config.hpp"
#include "locsym/output.hpp"

int main(int argc, char** argv) {
    using namespace locsym;

    CLI::App app{"Invariant non-local currents and local symmetry analysis of 1D scatterers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<double> tol_u, constancy, mapping, zero_current, min_width, grid_step, field_tol;
    bool emit_normalized = false;

    for (const std::string& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " analysis");
        sub->add_option("--config", config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--tol-u", tol_u, "tolerance on |U(x) - U(F(x))|");
        sub->add_option("--constancy-tol", constancy, "relative spread allowed for Q, Q~");
        sub->add_option("--map-tol", mapping, "relative mapping tolerance");
        sub->add_option("--zero-current-tol", zero_current, "relative |J| below which J counts as zero");
        sub->add_option("--min-width", min_width, "smallest reported symmetry component");
        sub->add_option("--grid-step", grid_step, "grid step of field-based detection");
        sub->add_option("--field-tol", field_tol, "flatness tolerance of field-based detection");
        sub->add_flag("--emit-config", emit_normalized, "also write the normalized config to the output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        RunConfig config = parse_config(config_path);
        if (tol_u) config.tolerances.tol_u = *tol_u;
        if (constancy) config.tolerances.constancy = *constancy;
        if (mapping) config.tolerances.mapping = *mapping;
        if (zero_current) config.tolerances.zero_current = *zero_current;
        if (min_width) config.tolerances.min_width = *min_width;
        if (grid_step) {
            if (!(*grid_step > 0.0)) throw ConfigError("--grid-step must be > 0");
            config.tolerances.grid_step = *grid_step;
        }
        if (field_tol) config.tolerances.field_tol = *field_tol;
        const std::string target = out_dir.empty() ? config.output_dir : out_dir;

        auto files = find_command(command)(config, target);
        if (emit_normalized) {
            const std::string path = target + "/config.normalized.json";
            io::write_file(path, emit_config(config));
            files.push_back(path);
        }
        for (const auto& f : files) std::cout << f << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ZeroCurrentError& e) {
        std::cerr << "zero current: " << e.what() << "\n";
        return kExitZeroCurrent;
    } catch (const PhysicsError& e) {
        std::cerr << "physics precondition: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
