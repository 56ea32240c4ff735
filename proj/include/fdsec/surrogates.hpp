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
// Convex surrogates of the nonconvex rate, outage and power constraints,
// built around an expansion point. Each surrogate comes as a plain value
// function (for checking tightness and bound direction) and as an emitter
// of conic blocks over a Layout of subproblem variables.

#ifndef FDSEC_SURROGATES_HPP
#define FDSEC_SURROGATES_HPP

#include <vector>

#include "fdsec/conic.hpp"
#include "fdsec/instance.hpp"
#include "fdsec/rates.hpp"

namespace fdsec
{
    struct SurrogateSettings
    {
        /// Trust-region margin relative to ||h|| ||w^k||.
        double trust_margin = 1e-8;
        /// UL amplitudes at the expansion point are kept >= this times sqrt(P_ul).
        double rho_floor = 1e-6;
        double beta_floor = 1e-9;
    };

    struct ExpansionGroup
    {
        std::vector<double> gamma_dl;  ///< DL SINRs
        std::vector<double> rate_dl;   ///< exact DL rates
        std::vector<double> re_hw;     ///< Re{h^H w^k} after rotation (= |h^H w^k|)
        std::vector<double> gamma_ul;
        std::vector<double> rate_ul;
        std::vector<CMat> omega;       ///< Phi_l^{-1} - Phi_{l-1}^{-1}
        std::vector<CMat> omega_sqrt;  ///< Hermitian square roots, negative eigenvalues clipped
        double min_omega_eig = 0.0;
    };

    struct ExpansionPoint
    {
        DesignPoint point; ///< rotated beamformers, floored rho and beta
        std::vector<ExpansionGroup> groups;
    };

    /// Rotates each w_k so that h_k^H w_k is real and nonnegative, floors rho
    /// and beta, and caches SINRs and Omega matrices.
    /// Throws invalid_expansion when some h_k^H w_k vanishes.
    ExpansionPoint make_expansion(const Instance &inst, const DesignPoint &pt, const SurrogateSettings &s = {});

    // -- scalar coefficient families ---------------------------------------

    struct ZetaCoeffs
    {
        double A, B, C;
    };
    /// ln(1+g)/t >= A - B/g - C t, tight at (gamma, t).
    ZetaCoeffs zeta_coeffs(double gamma, double t);
    double zeta_bound(const ZetaCoeffs &c, double gamma, double t);

    struct UlCoeffs
    {
        double A, B, C;
    };
    /// Coefficients of the UL surrogate A + B rho - phi(X)/alpha^k - C alpha.
    UlCoeffs ul_coeffs(double gamma, double rho_k, double alpha_k);

    struct LogUpper
    {
        double a, b;
    };
    /// ln(1+x) <= a + b x, tight at x_k.
    LogUpper log_upper_coeffs(double x_k);

    /// 0.5 (beta^2 / (beta_k alpha_k) + beta_k / (2 alpha - alpha_k)) >= beta / alpha.
    double bilinear_upper(double beta, double alpha, double beta_k, double alpha_k);

    // -- surrogate values at an arbitrary point ------------------------------

    /// Lower bound on the DL rate; the point must lie in the trust region.
    double dl_surrogate(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int k);
    /// Lower bound on the UL rate.
    double ul_surrogate(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int l);
    /// Convex quadratic phi^k(X) = Tr((rho^2 g g^H + Phi_l(X)) Omega).
    double ul_phi(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int l);

    /// Affine minorants of psi_bar and chi_bar.
    double psi_bar_linear(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int k, int m);
    double chi_bar_linear(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int l, int m);

    /// a/alpha + b W^k(beta, alpha): upper bound on ln(1+beta)/alpha.
    double eve_rate_upper(double beta, double alpha, double beta_k, double alpha_k);

    /// Two-group power rows: BS row and per-UL rows of group 0 (inner
    /// approximations of the (1 - 1/alpha_2)-weighted budgets).
    double bs_power_surrogate(const ExpansionPoint &e, const DesignPoint &pt);
    double bs_power_two_group(const DesignPoint &pt);
    double ul_power_surrogate(const ExpansionPoint &e, const DesignPoint &pt, int l);
    double ul_power_two_group(const DesignPoint &pt, int l);

    // -- conic emission ------------------------------------------------------

    struct GroupVars
    {
        std::vector<conic::ComplexVar> w;
        conic::ComplexVar V; ///< column-major Nt x Nt; invalid without AN
        std::vector<int> rho;
        int alpha = -1;      ///< -1 when the time split is fixed
        int inv_alpha = -1;  ///< t >= 1/alpha
        int inv_affine = -1; ///< r >= 1/(2 alpha - alpha^k)
        std::vector<int> dl_epi, ul_epi;
        std::vector<int> beta_dl, beta_ul, gamma_dl, gamma_ul;
        std::vector<int> beta_dl_sq, beta_ul_sq;

        conic::AffineExpr alpha_expr(double fixed) const;
    };

    struct Layout
    {
        std::vector<GroupVars> groups;
        int eta = -1;
        int power_epi = -1; ///< p >= ||x_2||^2 / alpha_2 (two-group mode)
        bool eves = true;
    };

    /// Allocates the subproblem variables; Eve-related ones only if `eves`.
    Layout allocate_layout(conic::ConicProgram &p, const Instance &inst, bool eves);

    /// Writes a design point into a variable vector (epigraphs set tight).
    Vec layout_values(const Layout &L, const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt);
    /// Reads the design variables of a solution.
    DesignPoint layout_design(const Layout &L, const Instance &inst, const Vec &x);

    /// Rate surrogate >= target, trust-region and sign rows, epigraph cone.
    void add_dl_blocks(conic::ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e,
                       int i, int k, const conic::AffineExpr &target, const SurrogateSettings &s = {});
    void add_ul_blocks(conic::ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e,
                       int i, int l, const conic::AffineExpr &target);
    /// Outage cones for every Eve plus the Gamma row.
    void add_eve_dl_blocks(conic::ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e,
                           int i, int k, const SurrogateSettings &s = {});
    void add_eve_ul_blocks(conic::ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e,
                           int i, int l, const SurrogateSettings &s = {});
    /// BS/UL power budgets, time-split rows and the 1/alpha epigraphs.
    void add_power_blocks(conic::ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e);

} // namespace fdsec

#endif
