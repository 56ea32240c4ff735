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

#ifndef FDSEC_CONFIG_HPP
#define FDSEC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdsec/types.hpp"

namespace fdsec
{
    /// Scenario constants. Powers are in watts and gains linear; the JSON
    /// boundary accepts `_dbm` / `_db` variants of the power and gain keys.
    struct SystemConfig
    {
        int K = 2; ///< DL users per group
        int L = 2; ///< UL users per group
        int M = 2; ///< eavesdroppers
        int Nt = 5;
        int Nr = 5;
        std::vector<int> Ne{2, 2};

        double P_bs_max = dbm_to_watts(26.0);
        /// [group][user]
        std::vector<std::vector<double>> P_ul_max{{dbm_to_watts(23.0), dbm_to_watts(23.0)},
                                                  {dbm_to_watts(23.0), dbm_to_watts(23.0)}};

        double noise_psd_dbm_hz = -174.0;
        double bandwidth_hz = 10e6;
        double sigma_si = db_to_linear(-75.0);
        double rician_k_db = 5.0;

        double cell_radius_m = 100.0;
        double inner_radius_m = 50.0;
        double min_bs_distance_m = 10.0;

        std::vector<std::vector<double>> epsilon_dl{{0.99, 0.99}, {0.99, 0.99}};
        std::vector<std::vector<double>> epsilon_ul{{0.99, 0.99}, {0.99, 0.99}};

        std::uint64_t rng_seed = 1;

        /// Throws invariant_violation when a field is out of range.
        void validate() const;

        /// Resizes per-user tables to K/L, broadcasting the first entry.
        void normalize_shapes();

        /// Sets every UL budget (or every outage level) to one value.
        void set_uniform_ul_power(double watts);
        void set_uniform_epsilon(double eps);
    };

    /// Default small-cell scenario (the field initializers above).
    SystemConfig default_config();

    SystemConfig config_from_json(const nlohmann::json &j);
    nlohmann::json config_to_json(const SystemConfig &c);
    SystemConfig load_config(const std::string &path);

} // namespace fdsec

#endif
