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
// Exact rate and power expressions. All rates are in nats/s/Hz and scale
// with the group's time fraction tau_i = 1 / alpha_i.

#ifndef FDSEC_RATES_HPP
#define FDSEC_RATES_HPP

#include <vector>

#include "fdsec/instance.hpp"
#include "fdsec/types.hpp"

namespace fdsec
{
    struct GroupDesign
    {
        std::vector<CVec> w;     ///< one beamformer per DL user
        CMat V;                  ///< AN shaping, Nt x Nt (Nt x 0 without AN)
        std::vector<double> rho; ///< UL amplitudes, power rho^2
        double alpha = 2.0;      ///< inverse time fraction
        std::vector<double> beta_dl, beta_ul;
        std::vector<double> gamma_dl, gamma_ul;

        double tau() const { return 1.0 / alpha; }
    };

    struct DesignPoint
    {
        std::vector<GroupDesign> groups;
        double eta = 0.0;
    };

    /// Zero design with the right shapes, alpha = 1/tau_fixed or 2.
    DesignPoint zero_design(const Instance &inst);

    /// Sampled channels of one eavesdropper.
    struct EveChannels
    {
        CMat H;                            ///< Nt x Ne
        std::vector<std::vector<CVec>> g;  ///< [group][UL user], Ne each
    };

    // -- legitimate links ------------------------------------------------

    /// Interference-plus-noise at DL user k of group i.
    double dl_interference(const Instance &inst, const DesignPoint &pt, int i, int k);
    double dl_sinr(const Instance &inst, const DesignPoint &pt, int i, int k);
    double dl_rate(const Instance &inst, const DesignPoint &pt, int i, int k);

    /// sum_{j >= first} rho_j^2 g_j g_j^H + SI + noise*I.
    /// The covariance seen by UL user l is ul_covariance(..., l + 1).
    CMat ul_covariance(const Instance &inst, const DesignPoint &pt, int i, int first);
    double ul_sinr(const Instance &inst, const DesignPoint &pt, int i, int l);
    double ul_rate(const Instance &inst, const DesignPoint &pt, int i, int l);

    /// tau * ln det(I + N^{-1} sum_l rho_l^2 g_l g_l^H) with N the SI-plus-noise covariance.
    double ul_sum_capacity(const Instance &inst, const DesignPoint &pt, int i);

    // -- eavesdroppers ----------------------------------------------------

    struct EveRates
    {
        std::vector<double> dl; ///< per DL user of the group
        std::vector<double> ul; ///< per UL user of the group
    };

    EveRates eve_rates(const Instance &inst, const DesignPoint &pt, const EveChannels &eve, int m, int i);

    /// Statistical interference terms of the outage constraints.
    double psi_bar(const Instance &inst, const DesignPoint &pt, int i, int k, int m);
    double chi_bar(const Instance &inst, const DesignPoint &pt, int i, int l, int m);
    /// w^H Hbar w  and  rho^2 gbar.
    double eve_dl_signal(const Instance &inst, const DesignPoint &pt, int i, int k, int m);
    double eve_ul_signal(const Instance &inst, const DesignPoint &pt, int i, int l, int m);
    /// Noise share (1 - eps^{1/M}) Ne sigma^2.
    double outage_margin(const Instance &inst, double eps, int m);

    /// RHS - LHS of the deterministic outage constraints; >= 0 when satisfied.
    double lemma_dl_slack(const Instance &inst, const DesignPoint &pt, int i, int k, int m);
    double lemma_ul_slack(const Instance &inst, const DesignPoint &pt, int i, int l, int m);

    // -- powers -----------------------------------------------------------

    /// sum_k ||w_k||^2 + ||V||_F^2 of one group.
    double group_tx_energy(const GroupDesign &g);
    double bs_power(const DesignPoint &pt);
    double ul_power(const DesignPoint &pt, int i, int l);

    // -- reports ----------------------------------------------------------

    struct RateReport
    {
        std::vector<std::vector<double>> dl_rate, ul_rate;        ///< [group][user]
        std::vector<std::vector<double>> eve_dl_rate, eve_ul_rate; ///< max over Eves
        std::vector<std::vector<double>> secrecy_dl, secrecy_ul;
        double bs_power = 0.0;
        std::vector<std::vector<double>> ul_power;
        double min_secrecy = 0.0;
    };

    /// Secrecy against sampled Eves: own rate minus the best Eve, clipped at 0.
    RateReport secrecy_rates(const Instance &inst, const DesignPoint &pt, const std::vector<EveChannels> &eves);
    /// Secrecy with the design's Gamma caps standing in for the Eve rates.
    RateReport secrecy_rates(const Instance &inst, const DesignPoint &pt);

} // namespace fdsec

#endif
