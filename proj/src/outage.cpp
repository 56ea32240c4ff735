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

#include "fdsec/outage.hpp"

#include <algorithm>
#include <limits>

namespace fdsec
{
    WilsonInterval wilson_interval(long successes, long n, double z)
    {
        WilsonInterval w;
        if (n <= 0)
            return w;
        const double nn = static_cast<double>(n);
        const double p = successes / nn;
        const double z2 = z * z;
        const double denom = 1.0 + z2 / nn;
        const double centre = (p + z2 / (2.0 * nn)) / denom;
        const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
        w.estimate = p;
        w.low = std::max(0.0, centre - half);
        w.high = std::min(1.0, centre + half);
        return w;
    }

    EveChannels sample_eve(const Instance &inst, int m, Rng &rng)
    {
        const int ne = inst.Ne[m];
        // H = Hbar^{1/2} Z / sqrt(Ne) has E{H H^H} = Hbar
        Eigen::SelfAdjointEigenSolver<CMat> es(inst.Hbar[m]);
        const Vec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const CMat half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
        CMat Z(inst.Nt, ne);
        for (int c = 0; c < ne; ++c)
            Z.col(c) = complex_gaussian(inst.Nt, 1.0, rng);
        EveChannels e;
        e.H = half * Z / std::sqrt(static_cast<double>(ne));
        for (const auto &grp : inst.groups)
        {
            std::vector<CVec> g;
            for (int l = 0; l < grp.num_ul(); ++l)
                g.push_back(complex_gaussian(ne, grp.gbar(m, l) / ne, rng));
            e.g.push_back(std::move(g));
        }
        return e;
    }

    namespace
    {
        // Rates of every Eve for one joint draw, [m] -> per group.
        std::vector<std::vector<EveRates>> draw_rates(const Instance &inst, const DesignPoint &pt, Rng &rng)
        {
            std::vector<std::vector<EveRates>> out(inst.M);
            for (int m = 0; m < inst.M; ++m)
            {
                const EveChannels e = sample_eve(inst, m, rng);
                for (int i = 0; i < inst.num_groups(); ++i)
                    out[m].push_back(eve_rates(inst, pt, e, m, i));
            }
            return out;
        }
    } // namespace

    OutageReport empirical_outage(const Instance &inst, const DesignPoint &pt, long n_samples, Rng &rng)
    {
        struct Slot
        {
            int group;
            bool uplink;
            int user;
            long ok = 0;
        };
        std::vector<Slot> slots;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            for (int k = 0; k < inst.groups[i].num_dl(); ++k)
                slots.push_back({i, false, k});
            for (int l = 0; l < inst.groups[i].num_ul(); ++l)
                slots.push_back({i, true, l});
        }

        for (long s = 0; s < n_samples; ++s)
        {
            const auto rates = draw_rates(inst, pt, rng);
            for (auto &slot : slots)
            {
                const GroupDesign &gd = pt.groups[slot.group];
                const double cap = slot.uplink ? gd.gamma_ul[slot.user] : gd.gamma_dl[slot.user];
                double worst = 0.0;
                for (int m = 0; m < inst.M; ++m)
                {
                    const EveRates &r = rates[m][slot.group];
                    worst = std::max(worst, slot.uplink ? r.ul[slot.user] : r.dl[slot.user]);
                }
                if (worst <= cap)
                    ++slot.ok;
            }
        }

        OutageReport rep;
        rep.samples = n_samples;
        rep.worst_margin = std::numeric_limits<double>::infinity();
        for (const auto &slot : slots)
        {
            const UserGroup &grp = inst.groups[slot.group];
            const GroupDesign &gd = pt.groups[slot.group];
            OutageCheck c;
            c.group = slot.group;
            c.uplink = slot.uplink;
            c.user = slot.user;
            c.epsilon = slot.uplink ? grp.eps_ul[slot.user] : grp.eps_dl[slot.user];
            c.gamma = slot.uplink ? gd.gamma_ul[slot.user] : gd.gamma_dl[slot.user];
            c.probability = wilson_interval(slot.ok, n_samples);
            const double margin = c.probability.estimate - (c.epsilon - 3.0 * c.probability.half_width());
            c.pass = margin >= 0.0;
            rep.all_pass = rep.all_pass && c.pass;
            rep.worst_margin = std::min(rep.worst_margin, margin);
            rep.checks.push_back(c);
        }
        if (slots.empty())
            rep.worst_margin = 0.0;
        return rep;
    }

    std::vector<MarkovCheck> markov_bound_check(const Instance &inst, const DesignPoint &pt, long n_samples, Rng &rng)
    {
        std::vector<MarkovCheck> checks;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            const GroupDesign &gd = pt.groups[i];
            for (int m = 0; m < inst.M; ++m)
            {
                auto make = [&](bool ul, int u)
                {
                    MarkovCheck c;
                    c.group = i;
                    c.uplink = ul;
                    c.user = u;
                    c.eve = m;
                    const double eps = ul ? grp.eps_ul[u] : grp.eps_dl[u];
                    const double gamma = ul ? gd.gamma_ul[u] : gd.gamma_dl[u];
                    const double signal = ul ? eve_ul_signal(inst, pt, i, u, m) : eve_dl_signal(inst, pt, i, u, m);
                    const double interference = ul ? chi_bar(inst, pt, i, u, m) : psi_bar(inst, pt, i, u, m);
                    const double e1 = std::expm1(gd.alpha * gamma);
                    const double y = e1 * inst.Ne[m] * inst.noise;
                    c.bound = y > 0.0 ? (signal - e1 * interference) / y : std::numeric_limits<double>::infinity();
                    c.target = 1.0 - std::pow(eps, 1.0 / inst.M);
                    c.premise_holds = interference == 0.0;
                    return c;
                };
                for (int k = 0; k < grp.num_dl(); ++k)
                    checks.push_back(make(false, k));
                for (int l = 0; l < grp.num_ul(); ++l)
                    checks.push_back(make(true, l));
            }
        }

        std::vector<long> exceed(checks.size(), 0);
        for (long s = 0; s < n_samples; ++s)
        {
            const auto rates = draw_rates(inst, pt, rng);
            for (std::size_t c = 0; c < checks.size(); ++c)
            {
                const MarkovCheck &mc = checks[c];
                const GroupDesign &gd = pt.groups[mc.group];
                const EveRates &r = rates[mc.eve][mc.group];
                const double rate = mc.uplink ? r.ul[mc.user] : r.dl[mc.user];
                const double cap = mc.uplink ? gd.gamma_ul[mc.user] : gd.gamma_dl[mc.user];
                if (rate >= cap)
                    ++exceed[c];
            }
        }
        for (std::size_t c = 0; c < checks.size(); ++c)
        {
            checks[c].exceed = wilson_interval(exceed[c], n_samples);
            checks[c].holds = checks[c].exceed.estimate <= checks[c].bound + 3.0 * checks[c].exceed.half_width();
        }
        return checks;
    }

} // namespace fdsec
