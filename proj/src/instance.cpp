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

#include "fdsec/instance.hpp"

#include <algorithm>
#include <numeric>

namespace fdsec
{
    std::string to_string(Mode m)
    {
        switch (m)
        {
        case Mode::proposed_fd:
            return "proposed-fd";
        case Mode::conventional_fd:
            return "conventional-fd";
        case Mode::hd:
            return "hd";
        }
        return "?";
    }

    Mode mode_from_string(const std::string &s)
    {
        if (s == "proposed-fd")
            return Mode::proposed_fd;
        if (s == "conventional-fd")
            return Mode::conventional_fd;
        if (s == "hd")
            return Mode::hd;
        throw invariant_violation("unknown mode '" + s + "'");
    }

    int Instance::total_dl() const
    {
        int n = 0;
        for (const auto &g : groups)
            n += g.num_dl();
        return n;
    }

    int Instance::total_ul() const
    {
        int n = 0;
        for (const auto &g : groups)
            n += g.num_ul();
        return n;
    }

    namespace
    {
        std::vector<int> order_by_norm(const std::vector<CVec> &g, const std::vector<int> &ids)
        {
            std::vector<int> ord(ids.size());
            std::iota(ord.begin(), ord.end(), 0);
            std::stable_sort(ord.begin(), ord.end(), [&](int a, int b)
                             { return g[ids[a]].norm() > g[ids[b]].norm(); });
            std::vector<int> out;
            for (int o : ord)
                out.push_back(ids[o]);
            return out;
        }

        // Group with the given DL ids and UL ids (UL ids already in decoding order).
        UserGroup collect(const SystemConfig &c, const std::vector<CVec> &h, const std::vector<CVec> &g,
                          const CMat &f, const Mat &gbar, const std::vector<int> &dl, const std::vector<int> &ul)
        {
            UserGroup grp;
            grp.dl_id = dl;
            grp.ul_id = ul;
            for (int d : dl)
            {
                grp.h.push_back(h[d]);
                grp.eps_dl.push_back(c.epsilon_dl[d / c.K][d % c.K]);
            }
            for (int u : ul)
            {
                grp.g.push_back(g[u]);
                grp.eps_ul.push_back(c.epsilon_ul[u / c.L][u % c.L]);
                grp.p_ul_max.push_back(c.P_ul_max[u / c.L][u % c.L]);
            }
            grp.f = CMat::Zero(dl.size(), ul.size());
            if (f.size() > 0)
                for (std::size_t a = 0; a < dl.size(); ++a)
                    for (std::size_t b = 0; b < ul.size(); ++b)
                        grp.f(a, b) = f(dl[a], ul[b]);
            grp.gbar = Mat::Zero(c.M, ul.size());
            for (int m = 0; m < c.M; ++m)
                for (std::size_t b = 0; b < ul.size(); ++b)
                    grp.gbar(m, b) = gbar(m, ul[b]);
            return grp;
        }

        std::vector<int> range(int from, int count)
        {
            std::vector<int> v(count);
            std::iota(v.begin(), v.end(), from);
            return v;
        }
    } // namespace

    Instance make_instance_unscaled(const SystemConfig &config, const Realization &r, Mode mode)
    {
        config.validate();
        const ChannelSet &ch = r.channels;
        Instance inst;
        inst.mode = mode;
        inst.M = ch.M;
        inst.Ne = ch.Ne;
        inst.noise = ch.noise_power;
        inst.P_bs = config.P_bs_max;
        const int K = ch.K;
        const int L = ch.L;

        if (mode == Mode::proposed_fd)
        {
            inst.Nt = ch.Nt;
            inst.Nr = ch.Nr;
            inst.G_si = ch.G_si;
            inst.sigma_si = ch.sigma_si;
            inst.Hbar = ch.Hbar;
            for (int i = 0; i < 2; ++i)
            {
                std::vector<int> ul;
                for (int l : ch.sic_order[i])
                    ul.push_back(i * L + l);
                inst.groups.push_back(collect(config, ch.h, ch.g, ch.f, ch.gbar, range(i * K, K), ul));
            }
            inst.variable_time = true;
        }
        else if (mode == Mode::conventional_fd)
        {
            inst.Nt = ch.Nt;
            inst.Nr = ch.Nr;
            inst.G_si = ch.G_si;
            inst.sigma_si = ch.sigma_si;
            inst.Hbar = ch.Hbar;
            const auto ul = order_by_norm(ch.g, range(0, 2 * L));
            inst.groups.push_back(collect(config, ch.h, ch.g, ch.f, ch.gbar, range(0, 2 * K), ul));
            inst.variable_time = false;
            inst.tau_fixed = {1.0};
        }
        else
        {
            const int N = ch.Nt + ch.Nr;
            inst.Nt = N;
            inst.Nr = N;
            inst.G_si = CMat::Zero(N, N);
            inst.sigma_si = 0.0;
            for (const auto &hb : ch.Hbar)
                inst.Hbar.push_back(CMat::Identity(N, N) * hb(0, 0).real());

            std::seed_seq seq{static_cast<std::uint64_t>(config.rng_seed), std::uint64_t{0x4844}};
            Rng rng(seq);
            std::vector<CVec> h, g;
            for (const auto &p : r.topology.dl)
                h.push_back(complex_gaussian(N, path_gain(p.distance_m, true), rng));
            for (const auto &p : r.topology.ul)
                g.push_back(complex_gaussian(N, path_gain(p.distance_m, true), rng));

            if (K > 0)
                inst.groups.push_back(collect(config, h, g, CMat(), ch.gbar, range(0, 2 * K), {}));
            if (L > 0)
            {
                auto grp = collect(config, h, g, CMat(), ch.gbar, {}, order_by_norm(g, range(0, 2 * L)));
                grp.artificial_noise = false;
                inst.groups.push_back(grp);
            }
            inst.variable_time = false;
            inst.tau_fixed.assign(inst.groups.size(), 0.5);
        }
        return inst;
    }

    Instance make_instance(const SystemConfig &config, const Realization &r, Mode mode)
    {
        Instance inst = make_instance_unscaled(config, r, mode);
        const double s = std::sqrt(inst.noise);
        const double s2 = inst.noise;
        inst.amplitude_scale = s;
        inst.noise = 1.0;
        inst.G_si /= s;
        for (auto &hb : inst.Hbar)
            hb /= s2;
        for (auto &grp : inst.groups)
        {
            for (auto &h : grp.h)
                h /= s;
            for (auto &g : grp.g)
                g /= s;
            grp.f /= s;
            grp.gbar /= s2;
        }
        return inst;
    }

} // namespace fdsec
