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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdsec/harness.hpp"

using namespace fdsec;
using nlohmann::json;

namespace
{
    ExperimentSpec small_spec()
    {
        ExperimentSpec s;
        s.base.K = 1;
        s.base.L = 1;
        s.base.M = 1;
        s.base.Nt = 2;
        s.base.Nr = 2;
        s.base.Ne = {2};
        s.base.normalize_shapes();
        s.pbs_dbm = {26.0};
        s.seeds = {1};
        s.options.max_iters = 8;
        s.options.outage_samples = 200;
        s.options.record_timing = false;
        return s;
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
} // namespace

TEST_CASE("sweep file parsing")
{
    const json j = json::parse(R"({
        "config": {"K": 1, "L": 1},
        "pbs_dbm": [10, 20],
        "num_seeds": 3,
        "modes": ["hd", "proposed-fd"],
        "qos_bps": [null, 2.0],
        "workers": 2,
        "solver": {"max_iters": 7, "rel_tol": 1e-3, "record_timing": false, "outage_samples": 0}
    })");
    const ExperimentSpec s = spec_from_json(j);
    CHECK(s.base.K == 1);
    CHECK(s.pbs_dbm == std::vector<double>{10, 20});
    CHECK(s.seeds == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(s.modes == std::vector<Mode>{Mode::hd, Mode::proposed_fd});
    REQUIRE(s.qos_bps.size() == 2);
    CHECK(!s.qos_bps[0]);
    CHECK(*s.qos_bps[1] == 2.0);
    CHECK(s.workers == 2);
    CHECK(s.options.max_iters == 7);
    CHECK(!s.options.record_timing);

    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"seedz": [1]})")), invariant_violation);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"solver": {"iters": 3}})")), invariant_violation);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"seeds": []})")), invariant_violation);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"pbs_dbm": []})")), invariant_violation);

    const ExperimentSpec d;
    CHECK(d.seeds.size() == 20);
    CHECK(d.pbs_dbm == std::vector<double>{10, 14, 18, 22, 26, 30});
}

TEST_CASE("CSV header layout")
{
    CHECK(csv_header(1, 2) == "seed,mode,pbs_dbm,qos_bps,maxmin_sr_bps,sr_dl_1_1,sr_dl_2_1,"
                              "sr_ul_1_1,sr_ul_1_2,sr_ul_2_1,sr_ul_2_2,tau1,tau2,iters,ms,outage_ok,status");
}

TEST_CASE("CSV round trip is exact")
{
    ResultRow r;
    r.seed = 12;
    r.mode = Mode::conventional_fd;
    r.pbs_dbm = 22.0;
    r.qos_bps = 2.0;
    r.maxmin_sr_bps = 1.0 / 3.0;
    r.sr_dl_bps = {{0.1, std::sqrt(2.0)}, {3.0, 4.5}};
    r.sr_ul_bps = {{1e-17, 0.0}, {2.0 / 7.0, 9.0}};
    r.tau1 = 0.625;
    r.tau2 = 0.375;
    r.iters = 17;
    r.ms = 123.456;
    r.outage_ok = 0;
    r.status = "qos-infeasible";
    ResultRow s = r;
    s.qos_bps.reset();
    s.outage_ok = -1;
    s.status = "ok";
    const std::string text = to_csv({r, s}, 2, 2);
    const auto back = rows_from_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(to_csv(back, 2, 2) == text);
    CHECK(back[0].maxmin_sr_bps == r.maxmin_sr_bps);
    CHECK(back[0].sr_dl_bps == r.sr_dl_bps);
    CHECK(back[0].sr_ul_bps == r.sr_ul_bps);
    CHECK(back[0].qos_bps == r.qos_bps);
    CHECK(!back[1].qos_bps);
    CHECK(back[1].outage_ok == -1);
    CHECK_THROWS_AS(rows_from_csv(""), invariant_violation);
    CHECK_THROWS_AS(rows_from_csv("a,b\n1,2\n"), invariant_violation);
}

TEST_CASE("summary statistics")
{
    std::vector<ResultRow> rows(4);
    const double v[] = {1.0, 2.0, 3.0, 100.0};
    for (int n = 0; n < 4; ++n)
    {
        rows[n].maxmin_sr_bps = v[n];
        rows[n].pbs_dbm = 26.0;
    }
    rows[3].status = "error: boom";
    const auto pts = summarize(rows);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].n == 3);
    CHECK(pts[0].n_failed == 1);
    CHECK(pts[0].mean == doctest::Approx(2.0));
    CHECK(pts[0].ci95 == doctest::Approx(1.959963984540054 / std::sqrt(3.0)));
}

TEST_CASE("singleton sweep gives one row per mode, bit-identical on rerun")
{
    const ExperimentSpec spec = small_spec();
    const auto a = run_experiment(spec);
    REQUIRE(a.size() == 3);
    CHECK(a[0].mode == Mode::proposed_fd);
    CHECK(a[1].mode == Mode::conventional_fd);
    CHECK(a[2].mode == Mode::hd);
    for (const auto &r : a)
    {
        INFO(to_string(r.mode) << ": " << r.status);
        CHECK(r.status == "ok");
        CHECK(r.feasible);
        CHECK(r.ms == 0.0);
        CHECK(r.maxmin_sr_bps >= 0.0);
        CHECK(r.tau1 + r.tau2 <= 1.0 + 1e-9);
        CHECK(r.outage_ok != -1);
        for (const auto &g : r.sr_dl_bps)
            for (double x : g)
                CHECK(x >= 0.0);
    }
    ExperimentSpec two = spec;
    two.workers = 2;
    const auto b = run_experiment(two);
    CHECK(to_csv(a, 1, 1) == to_csv(b, 1, 1));
}

TEST_CASE("written summary matches a recomputation from the CSV")
{
    ExperimentSpec spec = small_spec();
    spec.seeds = {1, 2};
    spec.modes = {Mode::hd};
    spec.pbs_dbm = {20.0, 26.0};
    const auto rows = run_experiment(spec);
    const auto dir = std::filesystem::temp_directory_path() / "fdsec_harness_test";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "results.csv").string(), sum = (dir / "summary.json").string();
    write_outputs(rows, spec.base.K, spec.base.L, csv, sum);
    const auto parsed = rows_from_csv(slurp(csv));
    CHECK(summary_to_json(summarize(parsed)) == json::parse(slurp(sum)));
    CHECK(json::parse(slurp(sum)).at("points").size() == 2);
}

TEST_CASE("UL secrecy targets")
{
    ExperimentSpec spec = small_spec();
    spec.modes = {Mode::proposed_fd};
    spec.qos_bps = {std::nullopt};
    CHECK_THROWS_AS(run_qos_experiment(spec), invariant_violation);
    spec.qos_bps = {500.0};
    const auto rows = run_qos_experiment(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == "qos-infeasible");
    CHECK(!rows[0].qos_feasible);
    CHECK(rows[0].qos_bps == 500.0);
}

TEST_CASE("design JSON round trip")
{
    SystemConfig cfg = small_spec().base;
    SolverOptions o = small_spec().options;
    o.outage_samples = 0;
    SolveReport rep;
    solve_row(cfg, Mode::proposed_fd, o, &rep);
    const DesignPoint back = design_from_json(design_to_json(rep.design));
    REQUIRE(back.groups.size() == rep.design.groups.size());
    for (std::size_t i = 0; i < back.groups.size(); ++i)
    {
        CHECK(back.groups[i].alpha == rep.design.groups[i].alpha);
        CHECK(back.groups[i].w[0] == rep.design.groups[i].w[0]);
        CHECK(back.groups[i].V == rep.design.groups[i].V);
        CHECK(back.groups[i].rho == rep.design.groups[i].rho);
        CHECK(back.groups[i].gamma_dl == rep.design.groups[i].gamma_dl);
    }
    const json j = report_to_json(rep);
    CHECK(j.contains("trace"));
    CHECK(j.at("trace").size() == rep.trace.size());
}
