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
// Optimizer-facing view of one channel realization. Users are arranged in
// groups that share a time fraction; each transmission mode is just a
// different grouping of the same users.

#ifndef FDSEC_INSTANCE_HPP
#define FDSEC_INSTANCE_HPP

#include <string>
#include <vector>

#include "fdsec/channel_model.hpp"
#include "fdsec/config.hpp"
#include "fdsec/types.hpp"

namespace fdsec
{
    enum class Mode
    {
        proposed_fd,     ///< two groups, optimized time split
        conventional_fd, ///< one group holding every user, full block
        hd               ///< DL block then UL block, N = Nt + Nr antennas, no SI/CCI
    };

    std::string to_string(Mode m);
    /// Accepts "proposed-fd", "conventional-fd", "hd".
    Mode mode_from_string(const std::string &s);

    struct UserGroup
    {
        std::vector<CVec> h;       ///< DL channels
        std::vector<CVec> g;       ///< UL channels in SIC decoding order
        CMat f;                    ///< CCI, |h| x |g|
        Mat gbar;                  ///< Eve statistics, M x |g|
        std::vector<double> eps_dl;
        std::vector<double> eps_ul;
        std::vector<double> p_ul_max;
        /// Flat ids of the original users: DL (i,k) -> i*K + k, UL (i,l) -> i*L + l.
        std::vector<int> dl_id;
        std::vector<int> ul_id;
        bool artificial_noise = true;

        int num_dl() const { return static_cast<int>(h.size()); }
        int num_ul() const { return static_cast<int>(g.size()); }
    };

    struct Instance
    {
        Mode mode = Mode::proposed_fd;
        int Nt = 0;
        int Nr = 0;
        int M = 0;
        std::vector<int> Ne;
        CMat G_si;
        double sigma_si = 0.0;
        std::vector<CMat> Hbar;
        double noise = 1.0;
        double P_bs = 0.0;
        std::vector<UserGroup> groups;
        /// true: alpha_i are optimized; false: tau_fixed applies.
        bool variable_time = true;
        std::vector<double> tau_fixed;
        /// Channel amplitudes were divided by this value (noise std. deviation).
        double amplitude_scale = 1.0;

        int num_groups() const { return static_cast<int>(groups.size()); }
        int total_dl() const;
        int total_ul() const;
    };

    /// Builds the instance for `mode`, with channels normalized to unit noise.
    /// HD mode redraws the legitimate channels for N = Nt + Nr antennas on
    /// the same topology, from an RNG stream derived from config.rng_seed.
    Instance make_instance(const SystemConfig &config, const Realization &r, Mode mode);

    /// Same construction without normalization (noise = ch.noise_power).
    Instance make_instance_unscaled(const SystemConfig &config, const Realization &r, Mode mode);

} // namespace fdsec

#endif
