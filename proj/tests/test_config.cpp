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

#include "fdsec/config.hpp"
#include "fdsec/instance.hpp"

using namespace fdsec;
using nlohmann::json;

TEST_CASE("default scenario values")
{
    const SystemConfig c = default_config();
    CHECK(c.K == 2);
    CHECK(c.L == 2);
    CHECK(c.M == 2);
    CHECK(c.Nt == 5);
    CHECK(c.Nr == 5);
    CHECK(c.Ne == std::vector<int>{2, 2});
    CHECK(watts_to_dbm(c.P_bs_max) == doctest::Approx(26.0));
    CHECK(watts_to_dbm(c.P_ul_max[1][1]) == doctest::Approx(23.0));
    CHECK(c.sigma_si == doctest::Approx(std::pow(10.0, -7.5)));
    CHECK(c.epsilon_dl[0][0] == 0.99);
}

TEST_CASE("unit conversions")
{
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
    CHECK(watts_to_dbm(dbm_to_watts(17.3)) == doctest::Approx(17.3));
    CHECK(nats_to_bits(std::log(2.0)) == doctest::Approx(1.0));
    CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3));
}

TEST_CASE("invalid configurations are rejected")
{
    auto broken = [](auto edit)
    {
        SystemConfig c = default_config();
        edit(c);
        return c;
    };
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.sigma_si = 1.0; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.sigma_si = -1e-3; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.P_bs_max = 0.0; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.inner_radius_m = 200.0; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.epsilon_ul[0][1] = 1.0; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.M = 0; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.K = 0; c.L = 0; }).validate(), invariant_violation);
    CHECK_THROWS_AS(broken([](SystemConfig &c) { c.Ne = {2}; }).validate(), invariant_violation);
    CHECK_NOTHROW(default_config().validate());
}

TEST_CASE("JSON round trip and dB-suffixed keys")
{
    SystemConfig c = default_config();
    c.rng_seed = 77;
    c.P_ul_max[1][0] = 0.05;
    const SystemConfig back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));

    const json j = json::parse(R"({"K": 1, "L": 3, "M": 1, "Ne": 4,
        "P_bs_max_dbm": 20, "P_ul_max_dbm": [10, [13, 14, 15]], "sigma_si_db": -90})");
    const SystemConfig d = config_from_json(j);
    CHECK(d.K == 1);
    CHECK(d.L == 3);
    CHECK(d.Ne == std::vector<int>{4});
    CHECK(d.P_bs_max == doctest::Approx(0.1));
    CHECK(d.P_ul_max[0].size() == 3);
    CHECK(d.P_ul_max[0][2] == doctest::Approx(0.01));
    CHECK(d.P_ul_max[1][2] == doctest::Approx(dbm_to_watts(15)));
    CHECK(d.sigma_si == doctest::Approx(1e-9));
    CHECK(d.epsilon_dl[1].size() == 1);
    CHECK(d.epsilon_ul[1].size() == 3);

    CHECK_THROWS_AS(config_from_json(json::parse(R"({"sigma_si": 2})")), invariant_violation);
}

TEST_CASE("mode names")
{
    for (Mode m : {Mode::proposed_fd, Mode::conventional_fd, Mode::hd})
        CHECK(mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(mode_from_string("fd-noma"), invariant_violation);
}
