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
// Monte Carlo check of the eavesdropper outage constraints. Eve channels
// are drawn as circular Gaussians whose second moments match Hbar / gbar.

#ifndef FDSEC_OUTAGE_HPP
#define FDSEC_OUTAGE_HPP

#include <vector>

#include "fdsec/channel_model.hpp"
#include "fdsec/instance.hpp"
#include "fdsec/rates.hpp"

namespace fdsec
{
    struct WilsonInterval
    {
        double estimate = 0.0;
        double low = 0.0;
        double high = 1.0;
        double half_width() const { return 0.5 * (high - low); }
    };

    /// Wilson score interval for `successes` out of `n` at normal quantile z.
    WilsonInterval wilson_interval(long successes, long n, double z = 1.959963984540054);

    /// One draw of Eve m's channels for every group of the instance.
    EveChannels sample_eve(const Instance &inst, int m, Rng &rng);

    struct OutageCheck
    {
        int group = 0;
        bool uplink = false;
        int user = 0;        ///< index within the group
        double epsilon = 0.0;
        double gamma = 0.0;  ///< rate cap being tested (nats)
        WilsonInterval probability; ///< Prob(max_m C_Eve <= Gamma)
        bool pass = false;   ///< estimate >= epsilon - 3 * half width
    };

    struct OutageReport
    {
        long samples = 0;
        std::vector<OutageCheck> checks;
        bool all_pass = true;
        /// Smallest estimate - (epsilon - 3 * half width) over all checks.
        double worst_margin = 0.0;
    };

    OutageReport empirical_outage(const Instance &inst, const DesignPoint &pt, long n_samples, Rng &rng);

    struct MarkovCheck
    {
        int group = 0;
        bool uplink = false;
        int user = 0;
        int eve = 0;
        /// Markov-style estimate of Prob(C_Eve,m >= Gamma).
        double bound = 0.0;
        /// 1 - epsilon^{1/M}: what the design guarantees through the bound.
        double target = 0.0;
        WilsonInterval exceed; ///< empirical Prob(C_Eve,m >= Gamma)
        /// The Markov step needs a nonnegative variable; that holds only when
        /// the Eve sees no interference besides noise.
        bool premise_holds = false;
        bool holds = false; ///< exceed.estimate <= bound + 3 * half width
    };

    std::vector<MarkovCheck> markov_bound_check(const Instance &inst, const DesignPoint &pt, long n_samples, Rng &rng);

} // namespace fdsec

#endif
