// fdsec - secure full-duplex multiuser transmission design
// Copyright (C) 2026 The fdsec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Batch runner: seed x transmit-power x mode sweeps, CSV rows and a JSON
// summary of per-point means.

#ifndef FDSEC_HARNESS_HPP
#define FDSEC_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdsec/config.hpp"
#include "fdsec/instance.hpp"
#include "fdsec/path_following.hpp"

namespace fdsec
{
    struct ExperimentSpec
    {
        SystemConfig base = default_config();
        std::vector<double> pbs_dbm{10, 14, 18, 22, 26, 30};
        std::vector<std::uint64_t> seeds;
        std::vector<Mode> modes{Mode::proposed_fd, Mode::conventional_fd, Mode::hd};
        /// UL secrecy targets in bps/Hz; an empty entry runs plain max-min.
        std::vector<std::optional<double>> qos_bps{std::nullopt};
        SolverOptions options;
        int workers = 1;
        std::string csv_path;
        std::string summary_path;

        ExperimentSpec();
        void validate() const;
    };

    /// Reads a sweep description; unknown keys are rejected.
    ExperimentSpec spec_from_json(const nlohmann::json &j);

    struct ResultRow
    {
        std::uint64_t seed = 0;
        Mode mode = Mode::proposed_fd;
        double pbs_dbm = 0.0;
        std::optional<double> qos_bps;
        double maxmin_sr_bps = 0.0;
        /// Indexed [zone group][user], so columns line up across modes.
        std::vector<std::vector<double>> sr_dl_bps, sr_ul_bps;
        double tau1 = 0.0, tau2 = 0.0;
        int iters = 0;
        double ms = 0.0;
        /// 1 pass, 0 fail, -1 not checked.
        int outage_ok = -1;
        /// "ok", or why the row is not a valid result.
        std::string status = "ok";
        /// Exact-constraint audit passed.
        bool feasible = false;
        bool qos_feasible = true;
    };

    /// One (config, mode) solve turned into a row.
    ResultRow solve_row(const SystemConfig &cfg, Mode mode, const SolverOptions &opts, SolveReport *report = nullptr);

    std::vector<ResultRow> run_experiment(const ExperimentSpec &spec);
    /// Same as run_experiment; every qos_bps entry must hold a value.
    std::vector<ResultRow> run_qos_experiment(const ExperimentSpec &spec);

    std::string csv_header(int K, int L);
    std::string to_csv(const std::vector<ResultRow> &rows, int K, int L);
    std::vector<ResultRow> rows_from_csv(const std::string &text);

    struct SummaryPoint
    {
        Mode mode = Mode::proposed_fd;
        double pbs_dbm = 0.0;
        std::optional<double> qos_bps;
        int n = 0;         ///< rows entering the mean
        int n_failed = 0;  ///< rows whose status is not "ok"
        double mean = 0.0;
        double ci95 = 0.0; ///< 1.96 * sample std / sqrt(n)
    };

    /// Aggregates max-min SR per (mode, power, target) in first-seen order.
    std::vector<SummaryPoint> summarize(const std::vector<ResultRow> &rows);
    nlohmann::json summary_to_json(const std::vector<SummaryPoint> &pts);

    /// Writes the CSV, then the summary computed from the CSV text.
    void write_outputs(const std::vector<ResultRow> &rows, int K, int L, const std::string &csv_path,
                       const std::string &summary_path);

    nlohmann::json design_to_json(const DesignPoint &pt);
    DesignPoint design_from_json(const nlohmann::json &j);
    nlohmann::json trace_to_json(const IterationTrace &t);
    nlohmann::json report_to_json(const SolveReport &r);

} // namespace fdsec

#endif
