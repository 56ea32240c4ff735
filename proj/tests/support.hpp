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
// Shared helpers for the unit and acceptance tests: seeded instances and
// random design points of the right shapes.

#ifndef FDSEC_TESTS_SUPPORT_HPP
#define FDSEC_TESTS_SUPPORT_HPP

#include <random>

#include "fdsec/channel_model.hpp"
#include "fdsec/config.hpp"
#include "fdsec/instance.hpp"
#include "fdsec/rates.hpp"

namespace fdsec::testing
{
    inline Instance seeded_instance(std::uint64_t seed, Mode mode = Mode::proposed_fd,
                                    SystemConfig cfg = default_config())
    {
        cfg.rng_seed = seed;
        return make_instance(cfg, realize(cfg), mode);
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    inline CMat complex_gaussian_matrix(int rows, int cols, double var, Rng &rng)
    {
        CMat m(rows, cols);
        for (int c = 0; c < cols; ++c)
            m.col(c) = complex_gaussian(rows, var, rng);
        return m;
    }

    /// Random design spending a random share of each budget. Time splits
    /// satisfy 1/alpha_1 + 1/alpha_2 <= 1 when they are variables.
    inline DesignPoint random_design(const Instance &inst, Rng &rng)
    {
        DesignPoint pt = zero_design(inst);
        const int beams = inst.total_dl() + inst.Nt;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            GroupDesign &gd = pt.groups[i];
            for (auto &w : gd.w)
                w = complex_gaussian(inst.Nt, uniform(rng, 0.05, 1.0) * inst.P_bs / (beams * inst.Nt), rng);
            if (gd.V.cols() > 0)
                gd.V = complex_gaussian_matrix(inst.Nt, inst.Nt,
                                               uniform(rng, 0.0, 0.2) * inst.P_bs / (beams * inst.Nt), rng);
            for (int l = 0; l < grp.num_ul(); ++l)
                gd.rho[l] = std::sqrt(grp.p_ul_max[l]) * uniform(rng, 0.05, 1.0);
            for (auto &b : gd.beta_dl)
                b = uniform(rng, 0.05, 20.0);
            for (auto &b : gd.beta_ul)
                b = uniform(rng, 0.05, 20.0);
            for (auto &g : gd.gamma_dl)
                g = uniform(rng, 0.0, 2.0);
            for (auto &g : gd.gamma_ul)
                g = uniform(rng, 0.0, 2.0);
        }
        if (inst.variable_time && inst.num_groups() == 2)
        {
            const double a1 = uniform(rng, 1.2, 5.0);
            pt.groups[0].alpha = a1;
            pt.groups[1].alpha = a1 / (a1 - 1.0) * uniform(rng, 1.0, 1.5);
        }
        return pt;
    }

    /// Multiplicative perturbation of every design variable by up to `rel`.
    /// Time splits move by up to `rel` as well, kept above 1.
    inline DesignPoint perturb(const DesignPoint &base, double rel, Rng &rng, bool move_alpha = true)
    {
        DesignPoint pt = base;
        for (auto &gd : pt.groups)
        {
            for (auto &w : gd.w)
                w += rel * w.norm() / std::sqrt(2.0 * w.size()) *
                     complex_gaussian(static_cast<int>(w.size()), 2.0, rng);
            if (gd.V.cols() > 0)
                gd.V += rel * gd.V.norm() / gd.V.cols() * complex_gaussian_matrix(gd.V.rows(), gd.V.cols(), 1.0, rng);
            for (auto &r : gd.rho)
                r = std::max(0.0, r * (1.0 + rel * uniform(rng, -1.0, 1.0)));
            for (auto &b : gd.beta_dl)
                b *= 1.0 + rel * uniform(rng, -0.99, 1.0);
            for (auto &b : gd.beta_ul)
                b *= 1.0 + rel * uniform(rng, -0.99, 1.0);
            if (move_alpha)
                gd.alpha = std::max(1.0 + 1e-3, gd.alpha * (1.0 + rel * uniform(rng, -0.5, 0.5)));
        }
        return pt;
    }

} // namespace fdsec::testing

#endif
