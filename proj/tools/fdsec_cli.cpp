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
// fdsec_cli run | single | validate. Exit status is nonzero iff an exact
// constraint or outage check fails (or the input is bad).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "fdsec/harness.hpp"

using namespace fdsec;
using nlohmann::json;

namespace
{
    json read_json(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw domain_error("cannot open " + path);
        return json::parse(f, nullptr, true, true);
    }

    struct Overrides
    {
        int max_iters = -1;
        double rel_tol = -1;
        long outage_samples = -1;
        bool no_timing = false;

        void add(CLI::App *app)
        {
            app->add_option("--max-iters", max_iters, "SCA iteration cap");
            app->add_option("--rel-tol", rel_tol, "relative stopping tolerance on eta");
            app->add_option("--outage-samples", outage_samples, "Monte Carlo Eve draws (0 skips)");
            app->add_flag("--no-timing", no_timing, "write ms = 0 so outputs are byte-stable");
        }

        void apply(SolverOptions &o) const
        {
            if (max_iters > 0)
                o.max_iters = max_iters;
            if (rel_tol > 0)
                o.rel_tol = rel_tol;
            if (outage_samples >= 0)
                o.outage_samples = outage_samples;
            if (no_timing)
                o.record_timing = false;
        }
    };

    void print_trace(const SolveReport &rep)
    {
        std::printf("%5s %14s %18s %10s %10s %10s\n", "iter", "eta", "status", "viol", "selfviol", "ms");
        for (const auto &r : rep.trace)
            std::printf("%5d %14.8f %18s %10.2e %10.2e %10.1f\n", r.iter, r.eta, conic::to_string(r.status),
                        r.violation, r.self_violation, r.ms);
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Secure full-duplex beamforming / time-split optimizer"};
    app.require_subcommand(1);

    // run
    auto *run_cmd = app.add_subcommand("run", "run a sweep file (JSON)");
    std::string spec_path, out_dir = ".";
    int workers = 0;
    Overrides run_ovr;
    run_cmd->add_option("sweep", spec_path, "sweep file")->required();
    run_cmd->add_option("-o,--out", out_dir, "output directory for results.csv / summary.json");
    run_cmd->add_option("-j,--workers", workers, "worker threads");
    run_ovr.add(run_cmd);

    // single
    auto *single_cmd = app.add_subcommand("single", "solve one instance and dump the full trace");
    std::string config_path, mode_name = "proposed-fd", report_path;
    std::uint64_t seed = 1;
    double pbs_dbm = std::numeric_limits<double>::quiet_NaN();
    double qos = -1.0;
    Overrides single_ovr;
    single_cmd->add_option("-c,--config", config_path, "system config JSON (defaults otherwise)");
    single_cmd->add_option("-s,--seed", seed, "topology / channel seed");
    single_cmd->add_option("-m,--mode", mode_name, "proposed-fd | conventional-fd | hd");
    single_cmd->add_option("--pbs-dbm", pbs_dbm, "BS power budget override (dBm)");
    single_cmd->add_option("--qos", qos, "UL secrecy target (bps/Hz); enables the DL max-min variant");
    single_cmd->add_option("-o,--out", report_path, "write the JSON report here");
    single_ovr.add(single_cmd);

    // validate
    auto *validate_cmd = app.add_subcommand("validate", "re-verify a saved design");
    std::string design_path;
    long samples = 10000;
    std::uint64_t mc_seed = 1;
    validate_cmd->add_option("design", design_path, "report or design JSON written by `single`")->required();
    validate_cmd->add_option("-c,--config", config_path, "system config JSON used for the solve");
    validate_cmd->add_option("-s,--seed", seed, "topology / channel seed used for the solve");
    validate_cmd->add_option("-m,--mode", mode_name, "mode used for the solve");
    validate_cmd->add_option("--pbs-dbm", pbs_dbm, "BS power budget override (dBm)");
    validate_cmd->add_option("--samples", samples, "Monte Carlo Eve draws");
    validate_cmd->add_option("--mc-seed", mc_seed, "Monte Carlo seed");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run_cmd)
        {
            ExperimentSpec spec = spec_from_json(read_json(spec_path));
            run_ovr.apply(spec.options);
            if (workers > 0)
                spec.workers = workers;
            const std::string csv = spec.csv_path.empty() ? out_dir + "/results.csv" : spec.csv_path;
            const std::string sum = spec.summary_path.empty() ? out_dir + "/summary.json" : spec.summary_path;
            const auto rows = run_experiment(spec);
            write_outputs(rows, spec.base.K, spec.base.L, csv, sum);

            int bad = 0;
            for (const auto &r : rows)
            {
                const bool solved = r.status == "ok" || r.status == "qos-infeasible";
                const bool failed = r.status.rfind("error", 0) == 0 || (solved && !r.feasible) || r.outage_ok == 0;
                bad += failed;
            }
            std::printf("%zu rows -> %s, %s; %d with failed checks\n", rows.size(), csv.c_str(), sum.c_str(), bad);
            return bad == 0 ? 0 : 1;
        }

        SystemConfig cfg = config_path.empty() ? default_config() : config_from_json(read_json(config_path));
        cfg.rng_seed = seed;
        if (!std::isnan(pbs_dbm))
            cfg.P_bs_max = dbm_to_watts(pbs_dbm);
        cfg.validate();
        const Mode mode = mode_from_string(mode_name);

        if (*single_cmd)
        {
            SolverOptions opts;
            single_ovr.apply(opts);
            if (qos >= 0.0)
                opts.qos_ul_bps = qos;
            SolveReport rep;
            const ResultRow row = solve_row(cfg, mode, opts, &rep);
            print_trace(rep);
            std::printf("status: %s (%s)\n", row.status.c_str(), rep.message.c_str());
            std::printf("max-min SR: %.6f bps/Hz, tau = (%.4f, %.4f)\n", row.maxmin_sr_bps, row.tau1, row.tau2);
            std::printf("exact constraints: %s; outage: %s\n", rep.feasibility.ok ? "pass" : "FAIL",
                        row.outage_ok < 0 ? "not checked" : (row.outage_ok ? "pass" : "FAIL"));
            if (!report_path.empty())
            {
                json j = report_to_json(rep);
                j["config"] = config_to_json(cfg);
                j["mode"] = to_string(mode);
                std::ofstream(report_path) << j.dump(2) << "\n";
            }
            if (row.status.rfind("error", 0) == 0)
                return 1;
            return rep.feasibility.ok && row.outage_ok != 0 ? 0 : 1;
        }

        // validate
        const json j = read_json(design_path);
        const DesignPoint pt = design_from_json(j.contains("design") ? j.at("design") : j);
        const Instance inst = make_instance(cfg, realize(cfg), mode);
        if (static_cast<int>(pt.groups.size()) != inst.num_groups())
            throw domain_error("design does not match the instance (group count)");
        const FeasibilityCheck f = check_feasibility(inst, pt);
        Rng rng(mc_seed);
        const OutageReport o = empirical_outage(inst, pt, samples, rng);
        std::printf("bs power excess %.3e, ul power excess %.3e, tau sum %.12f, lemma slack %.3e -> %s\n",
                    f.bs_power_rel_excess, f.ul_power_rel_excess, f.tau_sum, f.min_lemma_rel_slack,
                    f.ok ? "pass" : "FAIL");
        for (const auto &c : o.checks)
            std::printf("  group %d %s user %d: Prob(C_Eve <= Gamma) = %.4f [%.4f, %.4f] vs %.3f -> %s\n", c.group,
                        c.uplink ? "UL" : "DL", c.user, c.probability.estimate, c.probability.low,
                        c.probability.high, c.epsilon, c.pass ? "pass" : "FAIL");
        return f.ok && o.all_pass ? 0 : 1;
    }
    catch (const std::exception &ex)
    {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
}
