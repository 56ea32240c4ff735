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

#include <algorithm>

#include "fdsec/channel_model.hpp"
#include "fdsec/instance.hpp"

using namespace fdsec;

TEST_CASE("path loss intercepts and slopes")
{
    CHECK(path_loss_db(1.0, true) == doctest::Approx(103.8).epsilon(1e-14));
    CHECK(path_loss_db(0.1, true) == doctest::Approx(82.9).epsilon(1e-14));
    CHECK(path_loss_db(0.1, false) == doctest::Approx(107.9).epsilon(1e-14));
    CHECK(path_loss_db(1.0, false) == doctest::Approx(145.4).epsilon(1e-14));
    CHECK(path_gain(100.0, true) == doctest::Approx(std::pow(10.0, -8.29)).epsilon(1e-12));
    CHECK_THROWS_AS(path_loss_db(0.0, true), domain_error);
    CHECK_THROWS_AS(path_loss_db(-1.0, false), domain_error);
}

TEST_CASE("noise power from density and bandwidth")
{
    SystemConfig c = default_config();
    CHECK(noise_power_watts(c) == doctest::Approx(std::pow(10.0, -13.4)).epsilon(1e-12));
    c.bandwidth_hz = 1.0;
    CHECK(noise_power_watts(c) == doctest::Approx(std::pow(10.0, -20.4)).epsilon(1e-12));
    c.bandwidth_hz = 10e6;
    c.noise_psd_dbm_hz = -170.0;
    CHECK(noise_power_watts(c) == doctest::Approx(1e-13).epsilon(1e-12));
}

TEST_CASE("placement is deterministic and respects the zones")
{
    SystemConfig c = default_config();
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
    {
        Rng a(seed), b(seed);
        const Topology t1 = place_users(c, a), t2 = place_users(c, b);
        REQUIRE(t1.dl.size() == 4);
        REQUIRE(t1.ul.size() == 4);
        REQUIRE(t1.eve.size() == 2);
        for (std::size_t n = 0; n < t1.dl.size(); ++n)
        {
            CHECK(t1.dl[n].distance_m == t2.dl[n].distance_m);
            CHECK(t1.dl[n].angle_rad == t2.dl[n].angle_rad);
        }
        for (int k = 0; k < c.K; ++k)
        {
            CHECK(t1.dl[k].distance_m <= c.inner_radius_m);
            CHECK(t1.dl[c.K + k].distance_m >= c.inner_radius_m);
            CHECK(t1.dl[c.K + k].distance_m <= c.cell_radius_m);
        }
        for (int l = 0; l < c.L; ++l)
        {
            CHECK(t1.ul[l].distance_m >= c.inner_radius_m);
            CHECK(t1.ul[c.L + l].distance_m <= c.inner_radius_m);
        }
        CHECK(t1.eve[0].distance_m <= c.inner_radius_m);
        CHECK(t1.eve[1].distance_m >= c.inner_radius_m);
        auto all = t1.dl;
        all.insert(all.end(), t1.ul.begin(), t1.ul.end());
        all.insert(all.end(), t1.eve.begin(), t1.eve.end());
        for (const auto &p : all)
            CHECK(p.distance_m >= c.min_bs_distance_m);
    }
}

TEST_CASE("radial placement is uniform over the zone area")
{
    // Kolmogorov distance against F(r) = (r^2 - a^2) / (b^2 - a^2)
    auto ks = [](std::vector<double> r, double a, double b)
    {
        std::sort(r.begin(), r.end());
        const double n = static_cast<double>(r.size());
        double d = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
        {
            const double F = (r[i] * r[i] - a * a) / (b * b - a * a);
            d = std::max({d, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
        }
        return d;
    };
    const SystemConfig c = default_config();
    Rng rng(5);
    std::vector<double> inner, outer;
    for (int n = 0; n < 10000; ++n)
    {
        const Topology t = place_users(c, rng);
        inner.push_back(t.dl[0].distance_m);
        outer.push_back(t.dl[c.K].distance_m);
    }
    CHECK(ks(inner, c.min_bs_distance_m, c.inner_radius_m) <= 0.02);
    CHECK(ks(outer, c.inner_radius_m, c.cell_radius_m) <= 0.02);
}

TEST_CASE("channel draws are bit-identical for a seed")
{
    SystemConfig c = default_config();
    c.rng_seed = 9;
    const Realization a = realize(c), b = realize(c);
    for (std::size_t k = 0; k < a.channels.h.size(); ++k)
        CHECK(a.channels.h[k] == b.channels.h[k]);
    for (std::size_t l = 0; l < a.channels.g.size(); ++l)
        CHECK(a.channels.g[l] == b.channels.g[l]);
    CHECK(a.channels.f == b.channels.f);
    CHECK(a.channels.G_si == b.channels.G_si);
    CHECK(a.channels.gbar == b.channels.gbar);
    c.rng_seed = 10;
    CHECK(realize(c).channels.h[0] != a.channels.h[0]);
}

TEST_CASE("Eve statistics are the stated closed form")
{
    SystemConfig c = default_config();
    Rng rng(1);
    Topology t = place_users(c, rng);
    t.eve[0].distance_m = 100.0;
    const ChannelSet ch = draw_channels(c, t, rng);
    const CMat expect = CMat::Identity(c.Nt, c.Nt) * (std::pow(10.0, -8.29) * 2.0);
    CHECK((ch.Hbar[0] - expect).norm() <= 1e-12 * expect.norm());
    for (int m = 0; m < c.M; ++m)
    {
        CHECK(ch.Hbar[m].trace().real() ==
              doctest::Approx(c.Nt * c.Ne[m] * path_gain(t.eve[m].distance_m, true)).epsilon(1e-12));
        for (int u = 0; u < 2 * c.L; ++u)
        {
            const double d = std::max(distance_m(t.ul[u], t.eve[m]), c.min_bs_distance_m);
            CHECK(ch.gbar(m, u) == doctest::Approx(path_gain(d, true) * c.Ne[m]).epsilon(1e-12));
        }
    }
}

TEST_CASE("channel second moments follow the path loss")
{
    SystemConfig c = default_config();
    Rng place(2);
    const Topology t = place_users(c, place);
    const double dl_gain = path_gain(t.dl[0].distance_m, true);
    const double d_cci = std::max(distance_m(t.dl[0], t.ul[0]), c.min_bs_distance_m);
    const double cci_gain = path_gain(d_cci, false);
    double h2 = 0.0, f2 = 0.0, si2 = 0.0;
    const int n = 10000;
    Rng rng(3);
    for (int r = 0; r < n; ++r)
    {
        const ChannelSet ch = draw_channels(c, t, rng);
        h2 += std::norm(ch.h[0][0]);
        f2 += std::norm(ch.f(0, 0));
        si2 += std::norm(ch.G_si(1, 2));
    }
    CHECK(h2 / n == doctest::Approx(dl_gain).epsilon(0.03));
    CHECK(f2 / n == doctest::Approx(cci_gain).epsilon(0.03));
    CHECK(si2 / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("SIC order is descending channel norm")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        SystemConfig c = default_config();
        c.rng_seed = seed;
        const ChannelSet ch = realize(c).channels;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j + 1 < c.L; ++j)
                CHECK(ch.g[i * c.L + ch.sic_order[i][j]].norm() >= ch.g[i * c.L + ch.sic_order[i][j + 1]].norm());
    }
}

TEST_CASE("instances per mode")
{
    SystemConfig c = default_config();
    c.rng_seed = 4;
    const Realization r = realize(c);
    const double s = std::sqrt(r.channels.noise_power);

    const Instance fd = make_instance(c, r, Mode::proposed_fd);
    CHECK(fd.num_groups() == 2);
    CHECK(fd.variable_time);
    CHECK(fd.noise == 1.0);
    CHECK((fd.groups[1].h[0] - r.channels.h[c.K] / s).norm() <= 1e-12 * fd.groups[1].h[0].norm());
    CHECK(fd.Hbar[0](0, 0).real() == doctest::Approx(r.channels.Hbar[0](0, 0).real() / (s * s)));
    for (int l = 0; l + 1 < c.L; ++l)
        CHECK(fd.groups[0].g[l].norm() >= fd.groups[0].g[l + 1].norm());

    const Instance conv = make_instance(c, r, Mode::conventional_fd);
    CHECK(conv.num_groups() == 1);
    CHECK(conv.groups[0].num_dl() == 2 * c.K);
    CHECK(conv.groups[0].num_ul() == 2 * c.L);
    CHECK(!conv.variable_time);
    CHECK(conv.tau_fixed == std::vector<double>{1.0});

    const Instance hd = make_instance(c, r, Mode::hd);
    CHECK(hd.Nt == c.Nt + c.Nr);
    CHECK(hd.sigma_si == 0.0);
    CHECK(hd.num_groups() == 2);
    CHECK(hd.groups[0].num_ul() == 0);
    CHECK(hd.groups[0].artificial_noise);
    CHECK(hd.groups[1].num_dl() == 0);
    CHECK(!hd.groups[1].artificial_noise);
    CHECK(hd.tau_fixed == std::vector<double>{0.5, 0.5});
    CHECK(hd.groups[0].h[0].size() == c.Nt + c.Nr);
    CHECK(make_instance(c, r, Mode::hd).groups[0].h[0] == hd.groups[0].h[0]);
}
