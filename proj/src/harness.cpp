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

#include "fdsec/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace fdsec
{
    using nlohmann::json;

    ExperimentSpec::ExperimentSpec()
    {
        for (std::uint64_t s = 1; s <= 20; ++s)
            seeds.push_back(s);
    }

    void ExperimentSpec::validate() const
    {
        base.validate();
        options.validate();
        if (pbs_dbm.empty())
            throw invariant_violation("ExperimentSpec: empty power sweep");
        if (seeds.empty())
            throw invariant_violation("ExperimentSpec: empty seed list");
        if (modes.empty())
            throw invariant_violation("ExperimentSpec: empty mode list");
        if (qos_bps.empty())
            throw invariant_violation("ExperimentSpec: empty UL target list (use [null] for max-min)");
        for (const auto &q : qos_bps)
            if (q && *q < 0.0)
                throw invariant_violation("ExperimentSpec: UL target must be >= 0");
        if (workers < 1)
            throw invariant_violation("ExperimentSpec: workers must be >= 1");
    }

    namespace
    {
        void apply_solver_json(SolverOptions &o, const json &j)
        {
            for (auto it = j.begin(); it != j.end(); ++it)
            {
                const std::string &k = it.key();
                if (k == "max_iters")
                    o.max_iters = it->get<int>();
                else if (k == "rel_tol")
                    o.rel_tol = it->get<double>();
                else if (k == "eta_min")
                    o.eta_min = it->get<double>();
                else if (k == "init_max_rounds")
                    o.init_max_rounds = it->get<int>();
                else if (k == "trust_margin")
                    o.surrogate.trust_margin = it->get<double>();
                else if (k == "conic_tol")
                    o.conic.tol = it->get<double>();
                else if (k == "conic_max_iters")
                    o.conic.max_iters = it->get<int>();
                else if (k == "outage_samples")
                    o.outage_samples = it->get<long>();
                else if (k == "outage_seed")
                    o.outage_seed = it->get<std::uint64_t>();
                else if (k == "accept_violation")
                    o.accept_violation = it->get<double>();
                else if (k == "record_timing")
                    o.record_timing = it->get<bool>();
                else
                    throw invariant_violation("unknown solver key: " + k);
            }
        }
    } // namespace

    ExperimentSpec spec_from_json(const json &j)
    {
        ExperimentSpec s;
        for (auto it = j.begin(); it != j.end(); ++it)
        {
            const std::string &k = it.key();
            if (k == "config")
                s.base = config_from_json(*it);
            else if (k == "pbs_dbm")
                s.pbs_dbm = it->get<std::vector<double>>();
            else if (k == "seeds")
                s.seeds = it->get<std::vector<std::uint64_t>>();
            else if (k == "num_seeds")
            {
                s.seeds.clear();
                const auto n = it->get<std::uint64_t>();
                for (std::uint64_t i = 1; i <= n; ++i)
                    s.seeds.push_back(i);
            }
            else if (k == "modes")
            {
                s.modes.clear();
                for (const auto &m : *it)
                    s.modes.push_back(mode_from_string(m.get<std::string>()));
            }
            else if (k == "qos_bps")
            {
                s.qos_bps.clear();
                const json list = it->is_array() ? *it : json::array({*it});
                for (const auto &q : list)
                    s.qos_bps.push_back(q.is_null() ? std::nullopt : std::optional<double>(q.get<double>()));
            }
            else if (k == "workers")
                s.workers = it->get<int>();
            else if (k == "csv")
                s.csv_path = it->get<std::string>();
            else if (k == "summary")
                s.summary_path = it->get<std::string>();
            else if (k == "solver")
                apply_solver_json(s.options, *it);
            else
                throw invariant_violation("unknown experiment key: " + k);
        }
        s.validate();
        return s;
    }

    ResultRow solve_row(const SystemConfig &cfg, Mode mode, const SolverOptions &opts, SolveReport *report)
    {
        ResultRow row;
        row.seed = cfg.rng_seed;
        row.mode = mode;
        row.pbs_dbm = watts_to_dbm(cfg.P_bs_max);
        row.qos_bps = opts.qos_ul_bps;
        row.sr_dl_bps.assign(2, std::vector<double>(cfg.K, 0.0));
        row.sr_ul_bps.assign(2, std::vector<double>(cfg.L, 0.0));
        try
        {
            const Realization r = realize(cfg);
            const Instance inst = make_instance(cfg, r, mode);
            SolveReport rep = run(inst, opts);

            row.maxmin_sr_bps = nats_to_bits(std::max(0.0, rep.maxmin_secrecy));
            for (int i = 0; i < inst.num_groups(); ++i)
            {
                const UserGroup &grp = inst.groups[i];
                for (int k = 0; k < grp.num_dl(); ++k)
                    row.sr_dl_bps[grp.dl_id[k] / cfg.K][grp.dl_id[k] % cfg.K] =
                        nats_to_bits(rep.rates.secrecy_dl[i][k]);
                for (int l = 0; l < grp.num_ul(); ++l)
                    row.sr_ul_bps[grp.ul_id[l] / cfg.L][grp.ul_id[l] % cfg.L] =
                        nats_to_bits(rep.rates.secrecy_ul[i][l]);
            }
            const auto &gs = rep.design.groups;
            row.tau1 = gs.size() > 0 ? gs[0].tau() : 0.0;
            row.tau2 = gs.size() > 1 ? gs[1].tau() : 0.0;
            row.iters = static_cast<int>(rep.trace.size());
            row.ms = opts.record_timing ? rep.total_ms : 0.0;
            if (rep.outage)
                row.outage_ok = rep.outage->all_pass ? 1 : 0;
            row.feasible = rep.feasibility.ok;
            row.qos_feasible = rep.qos_feasible;
            if (!rep.qos_feasible)
                row.status = "qos-infeasible";
            else if (!rep.ok)
                row.status = rep.message;
            if (report)
                *report = std::move(rep);
        }
        catch (const std::exception &ex)
        {
            row.status = std::string("error: ") + ex.what();
        }
        for (auto &c : row.status)
            if (c == ',' || c == '\n')
                c = ';';
        return row;
    }

    namespace
    {
        struct Task
        {
            SystemConfig cfg;
            Mode mode;
            SolverOptions opts;
        };

        std::vector<ResultRow> run_tasks(const std::vector<Task> &tasks, int workers)
        {
            std::vector<ResultRow> rows(tasks.size());
            std::atomic<std::size_t> next{0};
            auto worker = [&]
            {
                for (std::size_t t = next++; t < tasks.size(); t = next++)
                    rows[t] = solve_row(tasks[t].cfg, tasks[t].mode, tasks[t].opts);
            };
            const int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
            std::vector<std::thread> pool;
            for (int w = 1; w < n; ++w)
                pool.emplace_back(worker);
            worker();
            for (auto &t : pool)
                t.join();
            return rows;
        }
    } // namespace

    std::vector<ResultRow> run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        // rows come out in (target, mode, power, seed) order whatever the worker count
        std::vector<Task> tasks;
        for (const auto &q : spec.qos_bps)
            for (Mode m : spec.modes)
                for (double p : spec.pbs_dbm)
                    for (auto seed : spec.seeds)
                    {
                        Task t{spec.base, m, spec.options};
                        t.cfg.P_bs_max = dbm_to_watts(p);
                        t.cfg.rng_seed = seed;
                        t.opts.qos_ul_bps = q;
                        tasks.push_back(std::move(t));
                    }
        return run_tasks(tasks, spec.workers);
    }

    std::vector<ResultRow> run_qos_experiment(const ExperimentSpec &spec)
    {
        for (const auto &q : spec.qos_bps)
            if (!q)
                throw invariant_violation("run_qos_experiment: every UL target must be set");
        return run_experiment(spec);
    }

    // ---------------------------------------------------------------------
    // CSV

    namespace
    {
        std::string num(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cur;
            std::istringstream is(line);
            while (std::getline(is, cur, ','))
                out.push_back(cur);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }
    } // namespace

    std::string csv_header(int K, int L)
    {
        std::string h = "seed,mode,pbs_dbm,qos_bps,maxmin_sr_bps";
        for (int i = 1; i <= 2; ++i)
            for (int k = 1; k <= K; ++k)
                h += ",sr_dl_" + std::to_string(i) + "_" + std::to_string(k);
        for (int i = 1; i <= 2; ++i)
            for (int l = 1; l <= L; ++l)
                h += ",sr_ul_" + std::to_string(i) + "_" + std::to_string(l);
        h += ",tau1,tau2,iters,ms,outage_ok,status";
        return h;
    }

    std::string to_csv(const std::vector<ResultRow> &rows, int K, int L)
    {
        std::string out = csv_header(K, L) + "\n";
        for (const auto &r : rows)
        {
            out += std::to_string(r.seed) + "," + to_string(r.mode) + "," + num(r.pbs_dbm) + "," +
                   (r.qos_bps ? num(*r.qos_bps) : std::string()) + "," + num(r.maxmin_sr_bps);
            for (const auto &grp : r.sr_dl_bps)
                for (double v : grp)
                    out += "," + num(v);
            for (const auto &grp : r.sr_ul_bps)
                for (double v : grp)
                    out += "," + num(v);
            out += "," + num(r.tau1) + "," + num(r.tau2) + "," + std::to_string(r.iters) + "," + num(r.ms) + "," +
                   (r.outage_ok < 0 ? std::string("na") : std::to_string(r.outage_ok)) + "," + r.status + "\n";
        }
        return out;
    }

    std::vector<ResultRow> rows_from_csv(const std::string &text)
    {
        std::istringstream is(text);
        std::string line;
        if (!std::getline(is, line))
            throw invariant_violation("rows_from_csv: empty input");
        const auto header = split(line);
        int ndl = 0, nul = 0;
        for (const auto &h : header)
        {
            ndl += h.rfind("sr_dl_", 0) == 0;
            nul += h.rfind("sr_ul_", 0) == 0;
        }
        const int K = ndl / 2, L = nul / 2;
        if (header.size() != static_cast<std::size_t>(5 + ndl + nul + 6))
            throw invariant_violation("rows_from_csv: unexpected header");

        std::vector<ResultRow> rows;
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            const auto f = split(line);
            if (f.size() != header.size())
                throw invariant_violation("rows_from_csv: ragged row");
            ResultRow r;
            std::size_t c = 0;
            r.seed = std::stoull(f[c++]);
            r.mode = mode_from_string(f[c++]);
            r.pbs_dbm = std::stod(f[c++]);
            if (!f[c].empty())
                r.qos_bps = std::stod(f[c]);
            ++c;
            r.maxmin_sr_bps = std::stod(f[c++]);
            r.sr_dl_bps.assign(2, std::vector<double>(K));
            r.sr_ul_bps.assign(2, std::vector<double>(L));
            for (auto &grp : r.sr_dl_bps)
                for (double &v : grp)
                    v = std::stod(f[c++]);
            for (auto &grp : r.sr_ul_bps)
                for (double &v : grp)
                    v = std::stod(f[c++]);
            r.tau1 = std::stod(f[c++]);
            r.tau2 = std::stod(f[c++]);
            r.iters = std::stoi(f[c++]);
            r.ms = std::stod(f[c++]);
            r.outage_ok = f[c] == "na" ? -1 : std::stoi(f[c]);
            ++c;
            r.status = f[c++];
            rows.push_back(std::move(r));
        }
        return rows;
    }

    // ---------------------------------------------------------------------
    // summary

    std::vector<SummaryPoint> summarize(const std::vector<ResultRow> &rows)
    {
        std::vector<SummaryPoint> pts;
        std::vector<std::vector<double>> values;
        auto same = [](const SummaryPoint &p, const ResultRow &r)
        { return p.mode == r.mode && p.pbs_dbm == r.pbs_dbm && p.qos_bps == r.qos_bps; };
        for (const auto &r : rows)
        {
            std::size_t idx = 0;
            while (idx < pts.size() && !same(pts[idx], r))
                ++idx;
            if (idx == pts.size())
            {
                SummaryPoint p;
                p.mode = r.mode;
                p.pbs_dbm = r.pbs_dbm;
                p.qos_bps = r.qos_bps;
                pts.push_back(p);
                values.emplace_back();
            }
            if (r.status == "ok")
                values[idx].push_back(r.maxmin_sr_bps);
            else
                ++pts[idx].n_failed;
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            const auto &v = values[i];
            pts[i].n = static_cast<int>(v.size());
            if (v.empty())
                continue;
            double s = 0.0;
            for (double x : v)
                s += x;
            pts[i].mean = s / v.size();
            if (v.size() > 1)
            {
                double ss = 0.0;
                for (double x : v)
                    ss += (x - pts[i].mean) * (x - pts[i].mean);
                pts[i].ci95 = 1.959963984540054 * std::sqrt(ss / (v.size() - 1)) / std::sqrt(double(v.size()));
            }
        }
        return pts;
    }

    json summary_to_json(const std::vector<SummaryPoint> &pts)
    {
        json out = json::array();
        for (const auto &p : pts)
            out.push_back({{"mode", to_string(p.mode)},
                           {"pbs_dbm", p.pbs_dbm},
                           {"qos_bps", p.qos_bps ? json(*p.qos_bps) : json(nullptr)},
                           {"n", p.n},
                           {"n_failed", p.n_failed},
                           {"mean_maxmin_sr_bps", p.mean},
                           {"ci95_bps", p.ci95}});
        return json{{"points", out}};
    }

    void write_outputs(const std::vector<ResultRow> &rows, int K, int L, const std::string &csv_path,
                       const std::string &summary_path)
    {
        const std::string text = to_csv(rows, K, L);
        if (!csv_path.empty())
        {
            std::ofstream f(csv_path, std::ios::binary);
            if (!f)
                throw domain_error("cannot write " + csv_path);
            f << text;
        }
        if (!summary_path.empty())
        {
            std::ofstream f(summary_path, std::ios::binary);
            if (!f)
                throw domain_error("cannot write " + summary_path);
            f << summary_to_json(summarize(rows_from_csv(text))).dump(2) << "\n";
        }
    }

    // ---------------------------------------------------------------------
    // designs and reports

    namespace
    {
        json cvec_json(const CVec &v)
        {
            json a = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                a.push_back({v[i].real(), v[i].imag()});
            return a;
        }

        CVec cvec_from(const json &a)
        {
            CVec v(static_cast<Eigen::Index>(a.size()));
            for (std::size_t i = 0; i < a.size(); ++i)
                v[i] = cplx(a[i].at(0).get<double>(), a[i].at(1).get<double>());
            return v;
        }
    } // namespace

    json design_to_json(const DesignPoint &pt)
    {
        json groups = json::array();
        for (const auto &g : pt.groups)
        {
            json w = json::array();
            for (const auto &b : g.w)
                w.push_back(cvec_json(b));
            json V = json::array();
            for (Eigen::Index c = 0; c < g.V.cols(); ++c)
                V.push_back(cvec_json(g.V.col(c)));
            groups.push_back({{"alpha", g.alpha},
                              {"w", w},
                              {"V_rows", g.V.rows()},
                              {"V_cols", V},
                              {"rho", g.rho},
                              {"beta_dl", g.beta_dl},
                              {"beta_ul", g.beta_ul},
                              {"gamma_dl", g.gamma_dl},
                              {"gamma_ul", g.gamma_ul}});
        }
        return json{{"eta", pt.eta}, {"groups", groups}};
    }

    DesignPoint design_from_json(const json &j)
    {
        DesignPoint pt;
        pt.eta = j.value("eta", 0.0);
        for (const auto &g : j.at("groups"))
        {
            GroupDesign gd;
            gd.alpha = g.at("alpha").get<double>();
            for (const auto &b : g.at("w"))
                gd.w.push_back(cvec_from(b));
            const auto &cols = g.at("V_cols");
            gd.V = CMat::Zero(g.at("V_rows").get<Eigen::Index>(), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c)
                gd.V.col(static_cast<Eigen::Index>(c)) = cvec_from(cols[c]);
            gd.rho = g.at("rho").get<std::vector<double>>();
            gd.beta_dl = g.at("beta_dl").get<std::vector<double>>();
            gd.beta_ul = g.at("beta_ul").get<std::vector<double>>();
            gd.gamma_dl = g.at("gamma_dl").get<std::vector<double>>();
            gd.gamma_ul = g.at("gamma_ul").get<std::vector<double>>();
            pt.groups.push_back(std::move(gd));
        }
        return pt;
    }

    json trace_to_json(const IterationTrace &t)
    {
        json a = json::array();
        for (const auto &r : t)
            a.push_back({{"iter", r.iter},
                         {"eta", r.eta},
                         {"status", conic::to_string(r.status)},
                         {"violation", r.violation},
                         {"self_violation", r.self_violation},
                         {"tightness", r.tightness},
                         {"solver_iters", r.solver_iters},
                         {"ms", r.ms}});
        return a;
    }

    json report_to_json(const SolveReport &r)
    {
        auto bits = [](const std::vector<std::vector<double>> &v)
        {
            json a = json::array();
            for (const auto &row : v)
            {
                json b = json::array();
                for (double x : row)
                    b.push_back(nats_to_bits(x));
                a.push_back(b);
            }
            return a;
        };
        json j{{"ok", r.ok},
               {"message", r.message},
               {"converged", r.converged},
               {"init_rounds", r.init_rounds},
               {"init_eta", r.init_eta},
               {"maxmin_sr_bps", nats_to_bits(r.maxmin_secrecy)},
               {"qos_feasible", r.qos_feasible},
               {"secrecy_dl_bps", bits(r.rates.secrecy_dl)},
               {"secrecy_ul_bps", bits(r.rates.secrecy_ul)},
               {"min_omega_eig", r.min_omega_eig},
               {"total_ms", r.total_ms},
               {"feasibility",
                {{"bs_power", r.feasibility.bs_power},
                 {"bs_power_rel_excess", r.feasibility.bs_power_rel_excess},
                 {"ul_power_rel_excess", r.feasibility.ul_power_rel_excess},
                 {"min_rho", r.feasibility.min_rho},
                 {"tau_sum", r.feasibility.tau_sum},
                 {"tau_slack", r.feasibility.tau_slack},
                 {"min_alpha", r.feasibility.min_alpha},
                 {"min_lemma_rel_slack", r.feasibility.min_lemma_rel_slack},
                 {"ok", r.feasibility.ok}}},
               {"trace", trace_to_json(r.trace)},
               {"design", design_to_json(r.design)}};
        if (r.outage)
        {
            json checks = json::array();
            for (const auto &c : r.outage->checks)
                checks.push_back({{"group", c.group},
                                  {"uplink", c.uplink},
                                  {"user", c.user},
                                  {"epsilon", c.epsilon},
                                  {"gamma", c.gamma},
                                  {"probability", c.probability.estimate},
                                  {"ci_low", c.probability.low},
                                  {"ci_high", c.probability.high},
                                  {"pass", c.pass}});
            j["outage"] = {{"samples", r.outage->samples},
                           {"all_pass", r.outage->all_pass},
                           {"worst_margin", r.outage->worst_margin},
                           {"checks", checks}};
        }
        return j;
    }

} // namespace fdsec
