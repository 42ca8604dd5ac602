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

#include "bellrot/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <system_error>

#include "bellrot/config.hpp"
#include "bellrot/version.hpp"

namespace bellrot {

using nlohmann::json;

void write_file_atomically(const std::filesystem::path &path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

std::string format_sig9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Metadata run_metadata(const std::string &command, const ExperimentConfig &cfg) {
    Metadata meta{{"tool", std::string("bellrot ") + kVersion},
                  {"command", command},
                  {"seed", std::to_string(cfg.master_seed)}};
    for (auto &[key, value] : config_entries(cfg)) {
        meta.emplace_back("config." + key, value);
    }
    return meta;
}

std::string metadata_comment_block(const Metadata &meta) {
    std::string out;
    for (const auto &[key, value] : meta) {
        out += "# " + key + ": " + value + "\n";
    }
    return out;
}

namespace {

const char *kCsvHeader = "resources,mean_error_rad,std_error_rad,estimator,alpha,n_runs\n";

std::string csv_row(std::size_t resources, double mean, double sd, EstimatorKind kind, double alpha,
                    std::size_t n_runs) {
    return std::to_string(resources) + "," + format_sig9(mean) + "," + format_sig9(sd) + "," +
           to_string(kind) + "," + format_sig9(alpha) + "," + std::to_string(n_runs) + "\n";
}

json metadata_json(const Metadata &meta) {
    json out = json::object();
    for (const auto &[key, value] : meta) {
        out[key] = value;
    }
    return out;
}

json config_json(const ExperimentConfig &cfg) {
    json out = json::object();
    for (const auto &[key, value] : config_entries(cfg)) {
        out[key] = value;
    }
    return out;
}

json vec_json(const RotationVector &v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

std::string results_csv(const Metadata &meta, const ExperimentConfig &cfg, const AggregateResult &agg) {
    std::string out = metadata_comment_block(meta) + kCsvHeader;
    for (const auto &pt : agg.points) {
        out += csv_row(pt.resources, pt.mean_error, pt.std_error, cfg.estimator, cfg.alpha, agg.n_runs);
    }
    return out;
}

std::string sweep_csv(const Metadata &meta, std::span<const SweepRow> rows) {
    std::string out = metadata_comment_block(meta) + kCsvHeader;
    for (const auto &row : rows) {
        out += csv_row(row.resources, row.mean_error, row.std_error, row.estimator, row.alpha, row.n_runs);
    }
    return out;
}

std::string results_json(const Metadata &meta, const ExperimentConfig &cfg, const AggregateResult &agg,
                         std::span<const RunRecord> records, bool include_runs) {
    json doc;
    doc["metadata"] = metadata_json(meta);
    doc["config"] = config_json(cfg);
    json points = json::array();
    for (const auto &pt : agg.points) {
        points.push_back({{"resources", pt.resources},
                          {"mean_error_rad", pt.mean_error},
                          {"std_error_rad", pt.std_error},
                          {"mean_abs_component_error_rad",
                           json::array({pt.mean_abs_component_error[0], pt.mean_abs_component_error[1],
                                        pt.mean_abs_component_error[2]})}});
    }
    doc["aggregate"] = {{"n_runs", agg.n_runs}, {"checkpoints", points}};
    std::size_t restarts = 0;
    for (const auto &rec : records) restarts += rec.restarts;
    doc["total_restarts"] = restarts;
    if (include_runs) {
        json runs = json::array();
        for (const auto &rec : records) {
            json cps = json::array();
            for (const auto &c : rec.checkpoints) {
                cps.push_back({{"resources", c.resources},
                               {"estimate", vec_json(c.estimate)},
                               {"total_error_rad", c.total_error}});
            }
            runs.push_back({{"run_index", rec.run_index},
                            {"truth", vec_json(rec.truth)},
                            {"restarts", rec.restarts},
                            {"measurements", rec.measurements},
                            {"outcome_counts", rec.outcome_counts},
                            {"checkpoints", cps}});
        }
        doc["runs"] = runs;
    }
    return doc.dump(2) + "\n";
}

std::string sweep_json(const Metadata &meta, std::span<const SweepRow> rows) {
    json doc;
    doc["metadata"] = metadata_json(meta);
    json out = json::array();
    for (const auto &row : rows) {
        out.push_back({{"alpha", row.alpha},
                       {"estimator", to_string(row.estimator)},
                       {"resources", row.resources},
                       {"mean_error_rad", row.mean_error},
                       {"std_error_rad", row.std_error},
                       {"n_runs", row.n_runs}});
    }
    doc["rows"] = out;
    return doc.dump(2) + "\n";
}

}  // namespace bellrot
