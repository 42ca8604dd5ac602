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

// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance --only N   run criterion N

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bellrot/bell_model.hpp"
#include "bellrot/estimators.hpp"
#include "bellrot/experiments.hpp"
#include "commands.hpp"
#include "oracles.hpp"

namespace {

using namespace bellrot;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c, d);
    return buf;
}

std::array<cplx, 4> kron_coefficients(BellKind initial, const AxisAngle &aa) {
    const ComplexMatrix r = rotation_axis_angle(aa);
    const StateVector rotated = kron(r, r) * bell_state(initial);
    std::array<cplx, 4> out{};
    for (BellKind t : kAllBellKinds) out[static_cast<int>(t)] = overlap(bell_state(t), rotated);
    return out;
}

Verdict rotation_algebra() {
    std::mt19937_64 rng(1);
    std::vector<AxisAngle> cases;
    for (int i = 0; i < 1000; ++i) cases.push_back(testing::random_axis_angle(rng, 2.0 * kPi));
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto &aa : cases) {
        for (BellKind k : kAllBellKinds) {
            const auto cf = closed_form_coefficients(k, aa);
            const auto mx = kron_coefficients(k, aa);
            for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(cf[j] - mx[j]));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < 1e-10 && seconds < 1.0, fmt("max deviation %.3g (tol 1e-10), %.3g s (limit 1 s)", worst, seconds)};
}

Verdict table_reproduction() {
    double worst = 0.0;
    int cells = 0;
    for (double t : {0.1, 0.35, 1.0}) {
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            const AxisAngle aa{{a == Axis::X ? 1.0 : 0.0, a == Axis::Y ? 1.0 : 0.0, a == Axis::Z ? 1.0 : 0.0}, t};
            for (BellKind k : kAllBellKinds) {
                const auto tab = axial_rotation_table(a, k, t);
                const auto mx = kron_coefficients(k, aa);
                for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(tab[j] - mx[j]));
                ++cells;
            }
        }
    }
    return {worst < 1e-12 && cells == 36, fmt("%.0f cell evaluations, max deviation %.3g (tol 1e-12)", cells, worst)};
}

Verdict equal_probability() {
    bool ok = true;
    std::string detail;
    for (auto [kind, quoted] : {std::pair{BellKind::PhiPlus, kPhiPlusAxis}, std::pair{BellKind::PhiMinus, kPhiMinusAxis}}) {
        double best = 1e9;
        MeasurementAxis found{};
        for (const auto &pt : equal_probability_axes(kind)) {
            const double d = std::max(std::abs(pt.axis.theta - quoted.theta), std::abs(pt.axis.lambda - quoted.lambda));
            if (d < best) {
                best = d;
                found = pt.axis;
            }
        }
        const auto fed = outcome_distribution(kind, {}, quoted, 0.0);
        const double closure = std::max({std::abs(fed.phi_plus() - 1.0 / 3), std::abs(fed.phi_minus() - 1.0 / 3),
                                         std::abs(fed.psi_plus() - 1.0 / 3), std::abs(fed.psi_minus())});
        ok = ok && best < 1e-6 && closure < 1e-8;
        detail += to_string(kind) + fmt(" at (%.8f, %.8f) off by %.2g, closure %.2g; ", found.theta, found.lambda, best, closure);
    }
    return {ok, detail + "tol 1e-6 / 1e-8"};
}

Verdict singlet_invariance() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_p = 0.0, worst_s = 0.0;
    const BellKind kinds[3] = {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus};
    for (int i = 0; i < 10000; ++i) {
        const BellKind kind = kinds[i % 3];
        const RotationVector rot = testing::random_rotation(rng, kPi);
        const MeasurementAxis axis{kPi * u01(rng), 2.0 * kPi * u01(rng) * (1.0 - 1e-12)};
        const double alpha = u01(rng);
        worst_p = std::max(worst_p, std::abs(outcome_distribution(kind, rot, axis, alpha).psi_minus() - alpha / 4));
        const StateVector rotated = joint_rotation(to_axis_angle(rot)) * bell_state(kAllBellKinds[i % 4]);
        worst_s = std::max(worst_s, std::abs(entanglement_entropy(rotated) - 1.0));
    }
    return {worst_p < 1e-12 && worst_s < 1e-10,
            fmt("max |P(psi-) - alpha/4| %.3g (tol 1e-12), max |S - 1| %.3g (tol 1e-10)", worst_p, worst_s)};
}

Verdict exact_bayes() {
    std::vector<RotationVector> grid;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k) grid.push_back({-0.27 + 0.06 * i, -0.27 + 0.06 * j, -0.27 + 0.06 * k});
    double worst = 0.0;
    for (int sequence = 0; sequence < 4; ++sequence) {
        std::mt19937_64 rng(50 + sequence);
        const double alpha = sequence % 2 ? 0.01 : 0.0;
        const RotationVector truth = testing::random_rotation(rng, 0.2);
        std::vector<Particle> ps;
        for (const auto &g : grid) ps.push_back({g, 1.0});
        Ensemble ens(ps, 0);
        std::vector<double> log_post(grid.size(), 0.0);
        for (int m = 1; m <= 50; ++m) {
            const BellKind prepared = m % 2 ? BellKind::PhiPlus : BellKind::PhiMinus;
            const MeasurementAxis axis = m % 2 ? kPhiPlusAxis : kPhiMinusAxis;
            const auto dist = outcome_distribution(prepared, truth, axis, alpha);
            std::discrete_distribution<int> pick(dist.p.begin(), dist.p.end());
            const BellKind observed = kAllBellKinds[pick(rng)];
            update_weights(ens, prepared, axis, observed, alpha);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                log_post[i] += std::log(outcome_distribution(prepared, grid[i], axis, alpha)[observed]);
            }
            const double top = *std::max_element(log_post.begin(), log_post.end());
            double z = 0.0;
            for (double lp : log_post) z += std::exp(lp - top);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst = std::max(worst, std::abs(ens.particles()[i].weight - std::exp(log_post[i] - top) / z));
            }
        }
    }
    return {worst < 1e-10, fmt("1000-point grid, 4 sequences of 50 measurements, max |w - w_exact| %.3g (tol 1e-10)", worst)};
}

ExperimentConfig desk_config(EstimatorKind kind, double alpha) {
    ExperimentConfig cfg;
    cfg.estimator = kind;
    cfg.n_runs = 100;
    cfg.max_resources = 4000;
    cfg.alpha = alpha;
    cfg.truth_sigma = 0.0873;
    cfg.prior.n_theta = 1000;
    cfg.master_seed = 1;
    return cfg;
}

double final_mean_error(const ExperimentConfig &cfg) {
    const auto records = run_campaign(cfg, 0);
    return aggregate(records).points.back().mean_error;
}

Verdict scaling() {
    const double bell = final_mean_error(desk_config(EstimatorKind::BellPf, 0.0));
    const double single = final_mean_error(desk_config(EstimatorKind::SingleQubitAnalytic, 0.0));
    const double bell_ref = 1.0 / std::sqrt(8000.0);
    const double single_ref = 1.0 / std::sqrt(4000.0);
    const bool bell_ok = bell > bell_ref / 2 && bell < bell_ref * 2;
    const bool single_ok = single > single_ref / 2 && single < single_ref * 2;
    return {bell_ok && single_ok && bell < single,
            fmt("bell %.4f in [%.4f, %.4f]? ", bell, bell_ref / 2, bell_ref * 2) + (bell_ok ? "yes" : "no") +
                fmt("; single %.4f in [%.4f, %.4f]? ", single, single_ref / 2, single_ref * 2) +
                (single_ok ? "yes" : "no") + (bell < single ? "; bell < single" : "; bell >= single")};
}

Verdict variance_law() {
    const std::uint64_t n = 10000;
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (double theta : {0.0, 0.05, 0.1}) {
        std::bernoulli_distribution flip(single_qubit_success_prob(theta));
        const int reps = 2000;
        double s = 0.0, ss = 0.0;
        for (int r = 0; r < reps; ++r) {
            SingleQubitTally t;
            for (std::uint64_t i = 0; i < n; ++i) t.record(Axis::Y, flip(rng));
            t.record(Axis::X, true);
            t.record(Axis::Z, true);
            const double est = single_qubit_estimate(t).theta.y;
            s += est;
            ss += est * est;
        }
        const double var = (ss - s * s / reps) / (reps - 1);
        worst = std::max(worst, std::abs(var * static_cast<double>(n) - 1.0));
    }
    return {worst < 0.15, fmt("N = 1e4, theta in {0, 0.05, 0.1}, max |N Var - 1| %.4f (tol 0.15)", worst)};
}

Verdict crossover() {
    const std::vector<double> alphas{0.0, 0.001, 0.002, 0.005, 0.01, 0.02};
    std::vector<double> single;
    for (double a : alphas) single.push_back(final_mean_error(desk_config(EstimatorKind::SingleQubitAnalytic, a)));
    const double bell_low = final_mean_error(desk_config(EstimatorKind::BellPf, 0.001));
    const double bell_high = final_mean_error(desk_config(EstimatorKind::BellPf, 0.02));
    const double lo = *std::min_element(single.begin(), single.end());
    const double hi = *std::max_element(single.begin(), single.end());
    const double variation = (hi - lo) / lo;
    const bool ok = bell_low < single[1] && bell_high > single.back() && variation < 0.25;
    return {ok, fmt("alpha=0.001: bell %.4f vs single %.4f; ", bell_low, single[1]) +
                    fmt("alpha=0.02: bell %.4f vs single %.4f (need bell > single); ", bell_high, single.back()) +
                    fmt("single-qubit spread %.1f%% (limit 25%%)", 100.0 * variation)};
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    const fs::path dir = fs::temp_directory_path() / "bellrot_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "bell.cfg") << "estimator = bell_pf\nn_runs = 4\nmax_resources = 800\nalpha = 0.001\n";
    std::ofstream(dir / "single.cfg") << "estimator = single_qubit_pf\nn_runs = 4\nmax_resources = 600\n";
    const std::string bell = (dir / "bell.cfg").string();
    const std::string single = (dir / "single.cfg").string();
    struct Case {
        std::string name;
        std::vector<std::string> args;
        std::string suffix;
    };
    const std::vector<Case> cases{
        {"spheres", {"spheres", "--initial", "phi-", "--rot", "0.1", "-0.2", "0.05", "--alpha", "0.01"}, ""},
        {"equal-points", {"equal-points", "--initial", "phi+"}, ""},
        {"rotation-table", {"rotation-table", "--theta-deg", "12"}, ""},
        {"estimate(bell)", {"estimate", "--config", bell, "--seed", "9"}, ".csv"},
        {"estimate(single)", {"estimate", "--config", single, "--seed", "9"}, ".csv"},
        {"alpha-sweep", {"alpha-sweep", "--config", bell, "--seed", "9", "--alphas", "0", "0.01"}, ".csv"},
    };
    std::string detail;
    bool ok = true;
    int index = 0;
    for (const auto &c : cases) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path base = dir / ("out" + std::to_string(index++));
            auto args = c.args;
            args.insert(args.end(), {"--out", base.string() + (c.suffix.empty() ? ".csv" : "")});
            args.insert(args.end(), {"--workers", rep == 0 ? "1" : "3"});
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) {
                ok = false;
                detail += c.name + " failed: " + err.str();
            }
            outputs[rep] = read_file(base.string() + ".csv");
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        ok = ok && same;
        detail += c.name + (same ? " identical; " : " DIFFERS; ");
    }
    return {ok, detail + "(reruns use 1 and 3 workers)"};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"rotation algebra oracle", rotation_algebra},
        {"table reproduction", table_reproduction},
        {"equal-probability axes", equal_probability},
        {"singlet invariance and superselection", singlet_invariance},
        {"exact-Bayes oracle", exact_bayes},
        {"scaling at desk scale", scaling},
        {"single-qubit variance law", variance_law},
        {"mixed-state crossover", crossover},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        Verdict v{false, ""};
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                    v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
