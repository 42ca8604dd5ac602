// Copyright 2026 The bellrot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "bellrot/bell_model.hpp"
#include "bellrot/config.hpp"
#include "bellrot/experiments.hpp"
#include "bellrot/io.hpp"
#include "bellrot/version.hpp"

namespace bellrot::cli {

namespace {

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string config;
    unsigned workers = 0;
};

std::string axis_name(Axis a) {
    switch (a) {
        case Axis::X:
            return "x";
        case Axis::Y:
            return "y";
        case Axis::Z:
            return "z";
    }
    return "?";
}

std::string format_complex(cplx c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g%+.9gi", c.real(), c.imag());
    return buf;
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Writes to `path`, or to `out` when no path was given.
void emit(const std::string &path, const std::string &content, std::ostream &out) {
    if (path.empty()) {
        out << content;
    } else {
        write_file_atomically(path, content);
    }
}

ExperimentConfig load_experiment(const CommonOptions &common) {
    ParsedConfig parsed;
    if (!common.config.empty()) {
        parsed = load_config(common.config);
    }
    if (common.seed) {
        parsed.config.master_seed = *common.seed;
    } else if (!parsed.seed_given) {
        std::random_device device;
        parsed.config.master_seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    }
    return parsed.config;
}

void require_out(const CommonOptions &common, const char *command) {
    if (common.out.empty()) {
        throw CLI::ValidationError(std::string(command) + " needs --out <prefix>");
    }
}

std::string csv_sphere_rows(const SphereMap &map) {
    std::ostringstream body;
    write_sphere_csv(body, map);
    return body.str();
}

std::string csv_slice_rows(const std::vector<OutcomeDistribution> &slice, double theta) {
    std::string body = "theta_rad,lambda_rad,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus\n";
    char line[256];
    const auto n = static_cast<double>(slice.size());
    for (std::size_t j = 0; j < slice.size(); ++j) {
        const auto &d = slice[j];
        const double lambda = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
        std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", theta, lambda, d.phi_plus(),
                      d.phi_minus(), d.psi_plus(), d.psi_minus());
        body += line;
    }
    return body;
}

struct SpheresOptions {
    std::string initial = "phi+";
    std::vector<double> rot{0.0, 0.0, 0.0};
    double alpha = 0.0;
    std::vector<int> grid{91, 180};
    std::optional<double> slice_theta;
};

void cmd_spheres(const SpheresOptions &opt, const CommonOptions &common, std::ostream &out) {
    const BellKind initial = parse_bell_kind(opt.initial);
    const RotationVector rot{opt.rot[0], opt.rot[1], opt.rot[2]};
    if (opt.grid[0] < 2 || opt.grid[1] < 1) {
        throw std::invalid_argument("--grid needs at least 2 theta and 1 lambda samples");
    }
    Metadata meta{{"tool", std::string("bellrot ") + kVersion},
                  {"command", "spheres"},
                  {"initial", to_string(initial)},
                  {"rot_rad", format_sig9(rot.x) + " " + format_sig9(rot.y) + " " + format_sig9(rot.z)},
                  {"alpha", format_sig9(opt.alpha)}};
    std::string body;
    if (opt.slice_theta) {
        meta.emplace_back("slice_theta_rad", format_sig9(*opt.slice_theta));
        meta.emplace_back("n_lambda", std::to_string(opt.grid[1]));
        body = csv_slice_rows(lambda_slice(initial, rot, opt.alpha, *opt.slice_theta, opt.grid[1]),
                              *opt.slice_theta);
    } else {
        meta.emplace_back("grid", std::to_string(opt.grid[0]) + "x" + std::to_string(opt.grid[1]));
        body = csv_sphere_rows(sphere_map(initial, rot, opt.alpha, opt.grid[0], opt.grid[1]));
    }
    emit(common.out, metadata_comment_block(meta) + body, out);
}

void cmd_equal_points(const std::string &initial_text, const CommonOptions &common, std::ostream &out) {
    const BellKind initial = parse_bell_kind(initial_text);
    if (initial != BellKind::PhiPlus && initial != BellKind::PhiMinus) {
        throw std::invalid_argument("equal-points takes phi+ or phi-");
    }
    const auto points = equal_probability_axes(initial);
    const Metadata meta{{"tool", std::string("bellrot ") + kVersion},
                        {"command", "equal-points"},
                        {"initial", to_string(initial)}};
    std::string body = "theta_rad,lambda_rad,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus,spread\n";
    char line[256];
    for (const auto &pt : points) {
        const auto d = outcome_distribution(initial, RotationVector{}, pt.axis, 0.0);
        std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", pt.axis.theta,
                      pt.axis.lambda, d.phi_plus(), d.phi_minus(), d.psi_plus(), d.psi_minus(), pt.spread);
        body += line;
    }
    emit(common.out, metadata_comment_block(meta) + body, out);
}

void cmd_rotation_table(double theta, const CommonOptions &common, std::ostream &out) {
    const auto cells = rotation_table(theta);
    std::string body = "# tool: bellrot " + std::string(kVersion) + "\n# command: rotation-table\n";
    body += "# theta_rad: " + format_sig9(theta) + "\n";
    body += "# amplitudes are ordered phi+ phi- psi+ psi-\n";
    double worst = 0.0;
    for (const auto &cell : cells) {
        body += "axis=" + axis_name(cell.axis) + " initial=" + to_string(cell.initial) + "\n  table:  ";
        for (const auto &c : cell.tabulated) body += " " + format_complex(c);
        body += "\n  matrix: ";
        for (const auto &c : cell.overlap) body += " " + format_complex(c);
        body += "\n  deviation: " + format_sig9(cell.deviation) + "\n";
        worst = std::max(worst, cell.deviation);
    }
    body += "max_deviation: " + format_sig9(worst) + "\n";
    emit(common.out, body, out);
}

void cmd_estimate(const CommonOptions &common, bool per_run) {
    require_out(common, "estimate");
    const ExperimentConfig cfg = load_experiment(common);
    const auto records = run_campaign(cfg, resolve_workers(common.workers));
    const auto agg = aggregate(records);
    const auto meta = run_metadata("estimate", cfg);
    const std::string csv = results_csv(meta, cfg, agg);
    const std::string json = results_json(meta, cfg, agg, records, per_run);
    write_file_atomically(common.out + ".csv", csv);
    write_file_atomically(common.out + ".json", json);
}

void cmd_alpha_sweep(const CommonOptions &common, const std::vector<double> &alphas) {
    require_out(common, "alpha-sweep");
    const ExperimentConfig cfg = load_experiment(common);
    const auto rows = alpha_sweep(cfg, alphas, resolve_workers(common.workers));
    auto meta = run_metadata("alpha-sweep", cfg);
    std::string list;
    for (double a : alphas) list += (list.empty() ? "" : " ") + format_sig9(a);
    meta.emplace_back("alphas", list);
    const std::string csv = sweep_csv(meta, rows);
    const std::string json = sweep_json(meta, rows);
    write_file_atomically(common.out + ".csv", csv);
    write_file_atomically(common.out + ".json", json);
}

}  // namespace

std::vector<RotationTableCell> rotation_table(double theta) {
    std::vector<RotationTableCell> cells;
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        AxisAngle aa;
        aa.k = {axis == Axis::X ? 1.0 : 0.0, axis == Axis::Y ? 1.0 : 0.0, axis == Axis::Z ? 1.0 : 0.0};
        aa.theta = theta;
        const ComplexMatrix r = joint_rotation(aa);
        for (BellKind initial : kAllBellKinds) {
            RotationTableCell cell{axis, initial, axial_rotation_table(axis, initial, theta), {}, 0.0};
            const StateVector rotated = r * bell_state(initial);
            for (BellKind target : kAllBellKinds) {
                const auto j = static_cast<std::size_t>(target);
                cell.overlap[j] = overlap(bell_state(target), rotated);
                cell.deviation = std::max(cell.deviation, std::abs(cell.overlap[j] - cell.tabulated[j]));
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Rotation estimation with Bell-state measurements"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    std::uint64_t seed_value = 0;
    auto *seed_opt = app.add_option("--seed", seed_value, "Master seed (overrides the config file)");
    app.add_option("--out", common.out, "Output path (estimate and alpha-sweep: prefix for .csv and .json)");
    app.add_option("--config", common.config, "Experiment config file");
    app.add_option("--workers", common.workers, "Worker threads (default: hardware concurrency)");

    SpheresOptions spheres;
    auto *sp = app.add_subcommand("spheres", "Outcome probabilities over the measurement-axis sphere");
    sp->add_option("--initial", spheres.initial, "Prepared Bell state: phi+, phi-, psi+ or psi-");
    sp->add_option("--rot", spheres.rot, "Rotation vector x y z (rad)")->expected(3);
    sp->add_option("--alpha", spheres.alpha, "Mixed-state fraction")->check(CLI::Range(0.0, 1.0));
    sp->add_option("--grid", spheres.grid, "Samples in theta and lambda")->expected(2);
    auto *slice_opt = sp->add_option("--slice-theta", "Emit only the lambda slice at this theta (rad)");

    std::string eq_initial = "phi+";
    auto *eq = app.add_subcommand("equal-points", "Axes giving equal phi+, phi-, psi+ probabilities");
    eq->add_option("--initial", eq_initial, "phi+ or phi-");

    double table_theta_deg = 20.0;
    auto *rt = app.add_subcommand("rotation-table", "Axial rotations of the Bell states");
    rt->add_option("--theta-deg", table_theta_deg, "Rotation angle in degrees");

    bool per_run = false;
    auto *est = app.add_subcommand("estimate", "Run an error-vs-resource campaign");
    est->add_flag("--per-run", per_run, "Include per-run records in the JSON output");

    std::vector<double> alphas{0.0, 0.001, 0.002, 0.005, 0.01, 0.02};
    auto *sw = app.add_subcommand("alpha-sweep", "Final errors as a function of the mixed-state fraction");
    sw->add_option("--alphas", alphas, "Mixed-state fractions")->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
        if (*seed_opt) common.seed = seed_value;
        if (*slice_opt) spheres.slice_theta = slice_opt->as<double>();

        if (*sp) {
            cmd_spheres(spheres, common, out);
        } else if (*eq) {
            cmd_equal_points(eq_initial, common, out);
        } else if (*rt) {
            cmd_rotation_table(table_theta_deg * std::numbers::pi / 180.0, common, out);
        } else if (*est) {
            cmd_estimate(common, per_run);
        } else if (*sw) {
            cmd_alpha_sweep(common, alphas);
        }
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const SolverError &e) {
        err << "solver error: " << e.what() << "\n";
        return kSolver;
    } catch (const std::invalid_argument &e) {
        err << "invalid argument: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception &e) {
        err << "run failed: " << e.what() << "\n";
        return kRunFailure;
    }
    return kOk;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv{"bellrot"};
    for (const auto &a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace bellrot::cli
