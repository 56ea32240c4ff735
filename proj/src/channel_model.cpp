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

#include "fdsec/channel_model.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

namespace fdsec
{
    double distance_m(const Position &a, const Position &b)
    {
        const double ax = a.distance_m * std::cos(a.angle_rad);
        const double ay = a.distance_m * std::sin(a.angle_rad);
        const double bx = b.distance_m * std::cos(b.angle_rad);
        const double by = b.distance_m * std::sin(b.angle_rad);
        return std::hypot(ax - bx, ay - by);
    }

    double path_loss_db(double d_km, bool los)
    {
        if (!(d_km > 0.0))
            throw domain_error("path_loss_db: distance must be positive");
        return los ? 103.8 + 20.9 * std::log10(d_km) : 145.4 + 37.5 * std::log10(d_km);
    }

    double path_gain(double d_m, bool los)
    {
        return std::pow(10.0, -path_loss_db(d_m / 1000.0, los) / 10.0);
    }

    double noise_power_watts(const SystemConfig &config)
    {
        if (!(config.bandwidth_hz > 0.0))
            throw domain_error("noise_power_watts: bandwidth must be positive");
        return std::pow(10.0, (config.noise_psd_dbm_hz - 30.0) / 10.0) * config.bandwidth_hz;
    }

    double sample_radius(double r_min, double r_max, Rng &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double a = r_min * r_min;
        const double b = r_max * r_max;
        return std::sqrt(a + u(rng) * (b - a));
    }

    CVec complex_gaussian(int n, double var, Rng &rng)
    {
        std::normal_distribution<double> nd(0.0, std::sqrt(var / 2.0));
        CVec v(n);
        for (int i = 0; i < n; ++i)
        {
            const double re = nd(rng);
            const double im = nd(rng);
            v[i] = cplx(re, im);
        }
        return v;
    }

    namespace
    {
        Position sample_in_zone(const SystemConfig &c, Zone zone, Rng &rng)
        {
            std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
            Position p;
            p.zone = zone;
            if (zone == Zone::inner)
                p.distance_m = sample_radius(c.min_bs_distance_m, c.inner_radius_m, rng);
            else
                p.distance_m = sample_radius(c.inner_radius_m, c.cell_radius_m, rng);
            p.angle_rad = ang(rng);
            return p;
        }
    } // namespace

    Topology place_users(const SystemConfig &config, Rng &rng)
    {
        config.validate();
        Topology t;
        t.K = config.K;
        t.L = config.L;
        // group 0: near DL + far UL; group 1: far DL + near UL
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < config.K; ++k)
                t.dl.push_back(sample_in_zone(config, i == 0 ? Zone::inner : Zone::outer, rng));
        for (int i = 0; i < 2; ++i)
            for (int l = 0; l < config.L; ++l)
                t.ul.push_back(sample_in_zone(config, i == 0 ? Zone::outer : Zone::inner, rng));
        for (int m = 0; m < config.M; ++m)
            t.eve.push_back(sample_in_zone(config, m % 2 == 0 ? Zone::inner : Zone::outer, rng));
        return t;
    }

    ChannelSet draw_channels(const SystemConfig &config, const Topology &topo, Rng &rng)
    {
        config.validate();
        ChannelSet ch;
        ch.Nt = config.Nt;
        ch.Nr = config.Nr;
        ch.K = config.K;
        ch.L = config.L;
        ch.M = config.M;
        ch.Ne = config.Ne;
        ch.sigma_si = config.sigma_si;
        ch.noise_power = noise_power_watts(config);

        for (const auto &p : topo.dl)
            ch.h.push_back(complex_gaussian(config.Nt, path_gain(p.distance_m, true), rng));
        for (const auto &p : topo.ul)
            ch.g.push_back(complex_gaussian(config.Nr, path_gain(p.distance_m, true), rng));

        const int nd = static_cast<int>(topo.dl.size());
        const int nu = static_cast<int>(topo.ul.size());
        ch.f.resize(nd, nu);
        for (int a = 0; a < nd; ++a)
            for (int b = 0; b < nu; ++b)
            {
                const double d = std::max(distance_m(topo.dl[a], topo.ul[b]), config.min_bs_distance_m);
                ch.f(a, b) = complex_gaussian(1, path_gain(d, false), rng)[0];
            }

        // Rician loop channel with unit second moment per entry
        const double kf = db_to_linear(config.rician_k_db);
        const double los_amp = std::sqrt(kf / (kf + 1.0));
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        ch.G_si.resize(config.Nt, config.Nr);
        for (int r = 0; r < config.Nt; ++r)
            for (int c = 0; c < config.Nr; ++c)
            {
                const cplx los = std::polar(los_amp, phase(rng));
                ch.G_si(r, c) = los + complex_gaussian(1, 1.0 / (kf + 1.0), rng)[0];
            }

        ch.gbar.resize(config.M, nu);
        for (int m = 0; m < config.M; ++m)
        {
            const double gain = path_gain(topo.eve[m].distance_m, true);
            ch.Hbar.push_back(CMat::Identity(config.Nt, config.Nt) * (gain * config.Ne[m]));
            for (int b = 0; b < nu; ++b)
            {
                const double d = std::max(distance_m(topo.ul[b], topo.eve[m]), config.min_bs_distance_m);
                ch.gbar(m, b) = path_gain(d, true) * config.Ne[m];
            }
        }

        ch.sic_order.resize(2);
        for (int i = 0; i < 2; ++i)
        {
            auto &ord = ch.sic_order[i];
            ord.resize(config.L);
            std::iota(ord.begin(), ord.end(), 0);
            std::stable_sort(ord.begin(), ord.end(), [&](int a, int b)
                             { return ch.g[i * config.L + a].norm() > ch.g[i * config.L + b].norm(); });
        }
        return ch;
    }

    Realization realize(const SystemConfig &config)
    {
        Rng rng(config.rng_seed);
        Realization r;
        r.topology = place_users(config, rng);
        r.channels = draw_channels(config, r.topology, rng);
        return r;
    }

} // namespace fdsec
