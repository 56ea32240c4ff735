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
// Two-zone small-cell topology and channel realizations.
//
// Users are split into two groups served in separate time fractions:
// group 0 holds the near DL users and the far UL users, group 1 the far
// DL users and the near UL users. Eavesdroppers alternate between the
// inner disc and the outer annulus. Eve channels are only known through
// their second-order statistics.

#ifndef FDSEC_CHANNEL_MODEL_HPP
#define FDSEC_CHANNEL_MODEL_HPP

#include <random>
#include <vector>

#include "fdsec/config.hpp"
#include "fdsec/types.hpp"

namespace fdsec
{
    using Rng = std::mt19937_64;

    enum class Zone
    {
        inner = 1,
        outer = 2
    };

    struct Position
    {
        double distance_m = 0.0;
        double angle_rad = 0.0;
        Zone zone = Zone::inner;
    };

    double distance_m(const Position &a, const Position &b);

    /// Flat indexing: DL user (i,k) -> i*K + k, UL user (i,l) -> i*L + l.
    struct Topology
    {
        int K = 0;
        int L = 0;
        std::vector<Position> dl;
        std::vector<Position> ul;
        std::vector<Position> eve;
    };

    struct ChannelSet
    {
        int Nt = 0;
        int Nr = 0;
        int K = 0;
        int L = 0;
        int M = 0;
        std::vector<CVec> h;     ///< DL channels, Nt each
        std::vector<CVec> g;     ///< UL channels, Nr each
        CMat f;                  ///< UL-to-DL CCI, 2K x 2L (all pairs)
        CMat G_si;               ///< loop channel, Nt x Nr, unit second moment per entry
        double sigma_si = 0.0;   ///< residual-SI power gain
        std::vector<CMat> Hbar;  ///< E{H_m H_m^H}, Nt x Nt
        Mat gbar;                ///< E{g g^H} per (Eve, UL user), M x 2L
        std::vector<int> Ne;
        double noise_power = 0.0;
        /// Per group: UL indices (within the group) in SIC decoding order.
        std::vector<std::vector<int>> sic_order;
    };

    /// Path loss in dB at distance d_km (LOS or NLOS model).
    double path_loss_db(double d_km, bool los);
    /// Linear power gain 10^(-PL/10).
    double path_gain(double d_m, bool los);

    double noise_power_watts(const SystemConfig &config);

    /// Radius sampled uniformly over the area of the annulus [r_min, r_max].
    double sample_radius(double r_min, double r_max, Rng &rng);

    Topology place_users(const SystemConfig &config, Rng &rng);

    ChannelSet draw_channels(const SystemConfig &config, const Topology &topo, Rng &rng);

    /// Circularly-symmetric complex Gaussian vector with per-entry variance `var`.
    CVec complex_gaussian(int n, double var, Rng &rng);

    /// Convenience: place users and draw channels from config.rng_seed.
    struct Realization
    {
        Topology topology;
        ChannelSet channels;
    };
    Realization realize(const SystemConfig &config);

} // namespace fdsec

#endif
