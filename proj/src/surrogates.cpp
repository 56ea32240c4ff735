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

#include "fdsec/surrogates.hpp"

#include <algorithm>
#include <string>

namespace fdsec
{
    using conic::AffineExpr;
    using conic::ComplexVar;
    using conic::ConicProgram;

    // ---------------------------------------------------------------------
    // expansion point

    ExpansionPoint make_expansion(const Instance &inst, const DesignPoint &pt, const SurrogateSettings &s)
    {
        ExpansionPoint e;
        e.point = pt;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            GroupDesign &gd = e.point.groups[i];
            ExpansionGroup eg;
            for (int k = 0; k < grp.num_dl(); ++k)
            {
                const cplx hw = grp.h[k].dot(gd.w[k]);
                if (!(std::abs(hw) > 1e-12 * grp.h[k].norm() * std::max(gd.w[k].norm(), 1e-300)) ||
                    gd.w[k].norm() == 0.0)
                    throw invalid_expansion("DL user " + std::to_string(k) + " of group " + std::to_string(i) +
                                            ": h^H w vanishes at the expansion point");
                gd.w[k] *= std::conj(hw) / std::abs(hw);
                eg.re_hw.push_back(std::abs(hw));
            }
            for (int l = 0; l < grp.num_ul(); ++l)
                gd.rho[l] = std::max(gd.rho[l], s.rho_floor * std::sqrt(grp.p_ul_max[l]));
            for (auto &b : gd.beta_dl)
                b = std::max(b, s.beta_floor);
            for (auto &b : gd.beta_ul)
                b = std::max(b, s.beta_floor);
            e.groups.push_back(std::move(eg));
        }
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            ExpansionGroup &eg = e.groups[i];
            for (int k = 0; k < grp.num_dl(); ++k)
            {
                eg.gamma_dl.push_back(dl_sinr(inst, e.point, i, k));
                eg.rate_dl.push_back(dl_rate(inst, e.point, i, k));
            }
            double min_eig = 0.0;
            for (int l = 0; l < grp.num_ul(); ++l)
            {
                eg.gamma_ul.push_back(ul_sinr(inst, e.point, i, l));
                eg.rate_ul.push_back(ul_rate(inst, e.point, i, l));
                const CMat inner = ul_covariance(inst, e.point, i, l + 1);
                const CMat outer = ul_covariance(inst, e.point, i, l);
                CMat omega = inner.ldlt().solve(CMat::Identity(inst.Nr, inst.Nr)) -
                             outer.ldlt().solve(CMat::Identity(inst.Nr, inst.Nr));
                omega = 0.5 * (omega + omega.adjoint()).eval();
                Eigen::SelfAdjointEigenSolver<CMat> es(omega);
                min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
                const Vec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
                eg.omega_sqrt.push_back(es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint());
                eg.omega.push_back(std::move(omega));
            }
            eg.min_omega_eig = min_eig;
        }
        return e;
    }

    // ---------------------------------------------------------------------
    // scalar coefficient families

    ZetaCoeffs zeta_coeffs(double gamma, double t)
    {
        if (!(gamma > 0.0) || !(t > 0.0))
            throw domain_error("zeta_coeffs: need gamma > 0 and t > 0");
        const double z = std::log1p(gamma) / t;
        return {2.0 * z + gamma / (t * (gamma + 1.0)), gamma * gamma / (t * (gamma + 1.0)), z / t};
    }

    double zeta_bound(const ZetaCoeffs &c, double gamma, double t)
    {
        return c.A - c.B / gamma - c.C * t;
    }

    UlCoeffs ul_coeffs(double gamma, double rho_k, double alpha_k)
    {
        if (!(rho_k > 0.0))
            throw invalid_expansion("ul_coeffs: UL amplitude at the expansion point must be positive");
        if (!(alpha_k > 0.0) || gamma < 0.0)
            throw domain_error("ul_coeffs: need alpha > 0 and gamma >= 0");
        const double rate = std::log1p(gamma) / alpha_k;
        return {2.0 * rate - gamma / alpha_k, 2.0 * gamma / (rho_k * alpha_k), rate / alpha_k};
    }

    LogUpper log_upper_coeffs(double x_k)
    {
        if (x_k < 0.0)
            throw domain_error("log_upper_coeffs: need x >= 0");
        return {std::log1p(x_k) - x_k / (1.0 + x_k), 1.0 / (1.0 + x_k)};
    }

    double bilinear_upper(double beta, double alpha, double beta_k, double alpha_k)
    {
        return 0.5 * (beta * beta / (beta_k * alpha_k) + beta_k / (2.0 * alpha - alpha_k));
    }

    // ---------------------------------------------------------------------
    // surrogate values

    double dl_surrogate(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int k)
    {
        const ExpansionGroup &eg = e.groups[i];
        const double r0 = eg.re_hw[k];
        const ZetaCoeffs c = zeta_coeffs(eg.gamma_dl[k], e.point.groups[i].alpha);
        const double re = inst.groups[i].h[k].dot(pt.groups[i].w[k]).real();
        const double psi = r0 * (2.0 * re - r0);
        return c.A - c.B * dl_interference(inst, pt, i, k) / psi - c.C * pt.groups[i].alpha;
    }

    double ul_phi(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int l)
    {
        return std::real((ul_covariance(inst, pt, i, l) * e.groups[i].omega[l]).trace());
    }

    double ul_surrogate(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int l)
    {
        const GroupDesign &gk = e.point.groups[i];
        const UlCoeffs c = ul_coeffs(e.groups[i].gamma_ul[l], gk.rho[l], gk.alpha);
        return c.A + c.B * pt.groups[i].rho[l] - ul_phi(inst, e, pt, i, l) / gk.alpha - c.C * pt.groups[i].alpha;
    }

    namespace
    {
        double cross_re(const CMat &Q, const CVec &a, const CVec &b) { return std::real(a.dot(Q * b)); }

        double cross_an(const CMat &Q, const CMat &Va, const CMat &Vb)
        {
            if (Va.cols() == 0)
                return 0.0;
            return std::real((Va.adjoint() * Q * Vb).trace());
        }
    } // namespace

    double psi_bar_linear(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int k, int m)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gk = e.point.groups[i];
        const GroupDesign &gd = pt.groups[i];
        const CMat &Q = inst.Hbar[m];
        double s = cross_an(Q, gk.V, gd.V);
        for (int j = 0; j < grp.num_dl(); ++j)
            if (j != k)
                s += cross_re(Q, gk.w[j], gd.w[j]);
        for (int l = 0; l < grp.num_ul(); ++l)
            s += gk.rho[l] * gd.rho[l] * grp.gbar(m, l);
        return 2.0 * s - psi_bar(inst, e.point, i, k, m);
    }

    double chi_bar_linear(const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt, int i, int l, int m)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gk = e.point.groups[i];
        const GroupDesign &gd = pt.groups[i];
        const CMat &Q = inst.Hbar[m];
        double s = cross_an(Q, gk.V, gd.V);
        for (int k = 0; k < grp.num_dl(); ++k)
            s += cross_re(Q, gk.w[k], gd.w[k]);
        for (int j = 0; j < grp.num_ul(); ++j)
            if (j != l)
                s += gk.rho[j] * gd.rho[j] * grp.gbar(m, j);
        return 2.0 * s - chi_bar(inst, e.point, i, l, m);
    }

    double eve_rate_upper(double beta, double alpha, double beta_k, double alpha_k)
    {
        const LogUpper c = log_upper_coeffs(beta_k);
        return c.a / alpha + c.b * bilinear_upper(beta, alpha, beta_k, alpha_k);
    }

    namespace
    {
        double re_product(const GroupDesign &a, const GroupDesign &b)
        {
            double s = 0.0;
            for (std::size_t k = 0; k < a.w.size(); ++k)
                s += a.w[k].dot(b.w[k]).real();
            if (a.V.cols() > 0)
                s += (a.V.adjoint() * b.V).trace().real();
            return s;
        }
    } // namespace

    double bs_power_surrogate(const ExpansionPoint &e, const DesignPoint &pt)
    {
        const GroupDesign &g0 = pt.groups[0];
        const GroupDesign &g1 = pt.groups[1];
        const GroupDesign &k0 = e.point.groups[0];
        const double ak = e.point.groups[1].alpha;
        return group_tx_energy(g0) + group_tx_energy(g1) / g1.alpha - 2.0 / ak * re_product(k0, g0) +
               group_tx_energy(k0) * g1.alpha / (ak * ak);
    }

    double bs_power_two_group(const DesignPoint &pt)
    {
        const double a = pt.groups[1].alpha;
        return (1.0 - 1.0 / a) * group_tx_energy(pt.groups[0]) + group_tx_energy(pt.groups[1]) / a;
    }

    double ul_power_surrogate(const ExpansionPoint &e, const DesignPoint &pt, int l)
    {
        const double rho = pt.groups[0].rho[l];
        const double rk = e.point.groups[0].rho[l];
        const double ak = e.point.groups[1].alpha;
        return rho * rho - 2.0 * rk * rho / ak + rk * rk * pt.groups[1].alpha / (ak * ak);
    }

    double ul_power_two_group(const DesignPoint &pt, int l)
    {
        const double rho = pt.groups[0].rho[l];
        return (1.0 - 1.0 / pt.groups[1].alpha) * rho * rho;
    }

    // ---------------------------------------------------------------------
    // layout

    AffineExpr GroupVars::alpha_expr(double fixed) const
    {
        return alpha >= 0 ? AffineExpr::variable(alpha) : AffineExpr(fixed);
    }

    Layout allocate_layout(ConicProgram &p, const Instance &inst, bool eves)
    {
        Layout L;
        L.eves = eves;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            const std::string gi = std::to_string(i);
            GroupVars G;
            for (int k = 0; k < grp.num_dl(); ++k)
                G.w.push_back(conic::add_complex(p, "w" + gi + "_" + std::to_string(k), inst.Nt));
            if (grp.artificial_noise)
                G.V = conic::add_complex(p, "V" + gi, inst.Nt * inst.Nt);
            for (int l = 0; l < grp.num_ul(); ++l)
                G.rho.push_back(p.add_variable("rho" + gi + "_" + std::to_string(l)));
            if (inst.variable_time)
            {
                G.alpha = p.add_variable("alpha" + gi);
                G.inv_alpha = p.add_variable("inv_alpha" + gi);
                if (eves)
                    G.inv_affine = p.add_variable("inv_affine" + gi);
            }
            for (int k = 0; k < grp.num_dl(); ++k)
                G.dl_epi.push_back(p.add_variable("dl_epi" + gi + "_" + std::to_string(k)));
            for (int l = 0; l < grp.num_ul(); ++l)
                G.ul_epi.push_back(p.add_variable("ul_epi" + gi + "_" + std::to_string(l)));
            if (eves)
            {
                for (int k = 0; k < grp.num_dl(); ++k)
                {
                    G.beta_dl.push_back(p.add_variable("beta_dl" + gi + "_" + std::to_string(k)));
                    G.gamma_dl.push_back(p.add_variable("gamma_dl" + gi + "_" + std::to_string(k)));
                    if (inst.variable_time)
                        G.beta_dl_sq.push_back(p.add_variable("beta_dl_sq" + gi + "_" + std::to_string(k)));
                }
                for (int l = 0; l < grp.num_ul(); ++l)
                {
                    G.beta_ul.push_back(p.add_variable("beta_ul" + gi + "_" + std::to_string(l)));
                    G.gamma_ul.push_back(p.add_variable("gamma_ul" + gi + "_" + std::to_string(l)));
                    if (inst.variable_time)
                        G.beta_ul_sq.push_back(p.add_variable("beta_ul_sq" + gi + "_" + std::to_string(l)));
                }
            }
            L.groups.push_back(std::move(G));
        }
        L.eta = p.add_variable("eta");
        if (inst.variable_time)
            L.power_epi = p.add_variable("power_epi");
        return L;
    }

    namespace
    {
        double fixed_alpha(const Instance &inst, int i)
        {
            return inst.variable_time ? 0.0 : 1.0 / inst.tau_fixed[i];
        }

        double dl_scale(const ExpansionPoint &e, int i, int k) { return std::max(e.groups[i].gamma_dl[k], 1e-9); }
        double ul_scale(const ExpansionPoint &e, int i, int l) { return std::max(e.groups[i].gamma_ul[l], 1.0); }

        // All real coordinates of the group's transmit variables.
        std::vector<AffineExpr> energy_terms(const GroupVars &G, double scale = 1.0)
        {
            std::vector<AffineExpr> u;
            auto push = [&](const ComplexVar &v)
            {
                for (int j = 0; j < v.dim; ++j)
                {
                    u.push_back(AffineExpr::variable(v.re + j, scale));
                    u.push_back(AffineExpr::variable(v.im + j, scale));
                }
            };
            for (const auto &w : G.w)
                push(w);
            if (G.V.valid())
                push(G.V);
            return u;
        }

        // Re<x^k, x> over the group's beamformers and AN matrix.
        AffineExpr re_product_expr(const GroupVars &G, const GroupDesign &gk, int Nt)
        {
            AffineExpr e;
            for (std::size_t k = 0; k < G.w.size(); ++k)
                e += conic::re_inner(gk.w[k], G.w[k]);
            if (G.V.valid())
                for (int c = 0; c < Nt; ++c)
                    e += conic::re_inner(gk.V.col(c), G.V.column(c, Nt));
            return e;
        }

        // Re<Q x^k, x> restricted to the AN matrix.
        AffineExpr an_cross_expr(const GroupVars &G, const GroupDesign &gk, const CMat &Q, int Nt)
        {
            AffineExpr e;
            if (G.V.valid())
                for (int c = 0; c < Nt; ++c)
                    e += conic::re_inner(Q * gk.V.col(c), G.V.column(c, Nt));
            return e;
        }

        void append(std::vector<AffineExpr> &dst, std::vector<AffineExpr> src, double scale = 1.0)
        {
            for (auto &a : src)
                dst.push_back(a * scale);
        }
    } // namespace

    Vec layout_values(const Layout &L, const Instance &inst, const ExpansionPoint &e, const DesignPoint &pt)
    {
        // sized by the highest index in use
        int n = L.eta + 1;
        if (L.power_epi >= 0)
            n = std::max(n, L.power_epi + 1);
        Vec x = Vec::Zero(n);
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const GroupVars &G = L.groups[i];
            const GroupDesign &gd = pt.groups[i];
            const GroupDesign &gk = e.point.groups[i];
            const UserGroup &grp = inst.groups[i];
            for (int k = 0; k < grp.num_dl(); ++k)
                conic::embed(x, G.w[k], gd.w[k]);
            if (G.V.valid())
                conic::embed(x, G.V, gd.V.reshaped());
            for (int l = 0; l < grp.num_ul(); ++l)
                x[G.rho[l]] = gd.rho[l];
            if (G.alpha >= 0)
            {
                x[G.alpha] = gd.alpha;
                x[G.inv_alpha] = 1.0 / gd.alpha;
                if (G.inv_affine >= 0)
                    x[G.inv_affine] = 1.0 / (2.0 * gd.alpha - gk.alpha);
            }
            for (int k = 0; k < grp.num_dl(); ++k)
            {
                const double re = grp.h[k].dot(gd.w[k]).real();
                const double psi = e.groups[i].re_hw[k] * (2.0 * re - e.groups[i].re_hw[k]);
                x[G.dl_epi[k]] = dl_scale(e, i, k) * dl_interference(inst, pt, i, k) / psi;
            }
            for (int l = 0; l < grp.num_ul(); ++l)
            {
                const double trace = e.groups[i].omega[l].trace().real() * inst.noise;
                x[G.ul_epi[l]] = (ul_phi(inst, e, pt, i, l) - trace) / ul_scale(e, i, l);
            }
            for (std::size_t k = 0; k < G.beta_dl.size(); ++k)
            {
                x[G.beta_dl[k]] = gd.beta_dl[k];
                x[G.gamma_dl[k]] = gd.gamma_dl[k];
                if (!G.beta_dl_sq.empty())
                    x[G.beta_dl_sq[k]] = std::pow(gd.beta_dl[k] / gk.beta_dl[k], 2);
            }
            for (std::size_t l = 0; l < G.beta_ul.size(); ++l)
            {
                x[G.beta_ul[l]] = gd.beta_ul[l];
                x[G.gamma_ul[l]] = gd.gamma_ul[l];
                if (!G.beta_ul_sq.empty())
                    x[G.beta_ul_sq[l]] = std::pow(gd.beta_ul[l] / gk.beta_ul[l], 2);
            }
        }
        x[L.eta] = pt.eta;
        if (L.power_epi >= 0)
            x[L.power_epi] = group_tx_energy(pt.groups[1]) / pt.groups[1].alpha;
        return x;
    }

    DesignPoint layout_design(const Layout &L, const Instance &inst, const Vec &x)
    {
        DesignPoint pt = zero_design(inst);
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const GroupVars &G = L.groups[i];
            GroupDesign &gd = pt.groups[i];
            for (std::size_t k = 0; k < G.w.size(); ++k)
                gd.w[k] = conic::extract(x, G.w[k]);
            if (G.V.valid())
                gd.V = conic::extract(x, G.V).reshaped(inst.Nt, inst.Nt);
            for (std::size_t l = 0; l < G.rho.size(); ++l)
                gd.rho[l] = std::max(0.0, x[G.rho[l]]);
            if (G.alpha >= 0)
                gd.alpha = x[G.alpha];
            for (std::size_t k = 0; k < G.beta_dl.size(); ++k)
            {
                gd.beta_dl[k] = x[G.beta_dl[k]];
                gd.gamma_dl[k] = x[G.gamma_dl[k]];
            }
            for (std::size_t l = 0; l < G.beta_ul.size(); ++l)
            {
                gd.beta_ul[l] = x[G.beta_ul[l]];
                gd.gamma_ul[l] = x[G.gamma_ul[l]];
            }
        }
        pt.eta = x[L.eta];
        return pt;
    }

    // ---------------------------------------------------------------------
    // emission

    void add_dl_blocks(ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e, int i, int k,
                       const AffineExpr &target, const SurrogateSettings &s)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupVars &G = L.groups[i];
        const GroupDesign &gk = e.point.groups[i];
        const CVec &h = grp.h[k];
        const double r0 = e.groups[i].re_hw[k];
        const double scale = dl_scale(e, i, k);
        const ZetaCoeffs c = zeta_coeffs(e.groups[i].gamma_dl[k], gk.alpha);
        const std::string tag = std::to_string(i) + "_" + std::to_string(k);

        const AffineExpr re = conic::re_inner(h, G.w[k]);
        std::vector<AffineExpr> u;
        for (int j = 0; j < grp.num_dl(); ++j)
            if (j != k)
            {
                u.push_back(conic::re_inner(h, G.w[j]));
                u.push_back(conic::im_inner(h, G.w[j]));
            }
        if (G.V.valid())
            for (int col = 0; col < inst.Nt; ++col)
            {
                u.push_back(conic::re_inner(h, G.V.column(col, inst.Nt)));
                u.push_back(conic::im_inner(h, G.V.column(col, inst.Nt)));
            }
        for (int l = 0; l < grp.num_ul(); ++l)
            if (std::abs(grp.f(k, l)) > 0.0)
                u.push_back(AffineExpr::variable(G.rho[l], std::abs(grp.f(k, l))));
        u.push_back(AffineExpr(std::sqrt(inst.noise)));

        // phi / Psi <= epi / scale
        p.add_rsoc(u, AffineExpr::variable(G.dl_epi[k]), (re * 2.0 - r0) * (r0 / scale), "dl_epi" + tag);
        const double delta = s.trust_margin * h.norm() * gk.w[k].norm();
        p.add_ge(re * 2.0 - r0, AffineExpr(delta), "trust" + tag);
        p.add_ge(re, AffineExpr(0.0), "dl_phase" + tag);

        AffineExpr lhs = AffineExpr(c.A) - AffineExpr::variable(G.dl_epi[k], c.B / scale) -
                         G.alpha_expr(fixed_alpha(inst, i)) * c.C;
        AffineExpr rhs = target;
        if (L.eves)
            rhs += AffineExpr::variable(G.gamma_dl[k]);
        p.add_ge(lhs, rhs, "dl_rate" + tag);
    }

    void add_ul_blocks(ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e, int i, int l,
                       const AffineExpr &target)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupVars &G = L.groups[i];
        const GroupDesign &gk = e.point.groups[i];
        const ExpansionGroup &eg = e.groups[i];
        const CMat &S = eg.omega_sqrt[l];
        const double scale = ul_scale(e, i, l);
        const double inv = 1.0 / std::sqrt(scale);
        const UlCoeffs c = ul_coeffs(eg.gamma_ul[l], gk.rho[l], gk.alpha);
        const std::string tag = std::to_string(i) + "_" + std::to_string(l);

        std::vector<AffineExpr> u;
        for (int j = l; j < grp.num_ul(); ++j)
        {
            const double a = (S * grp.g[j]).norm();
            if (a > 0.0)
                u.push_back(AffineExpr::variable(G.rho[j], a * inv));
        }
        if (inst.sigma_si > 0.0)
        {
            const CMat R = std::sqrt(inst.sigma_si) * S * inst.G_si.adjoint();
            for (const auto &w : G.w)
                append(u, conic::real_rows(R, w), inv);
            if (G.V.valid())
                for (int col = 0; col < inst.Nt; ++col)
                    append(u, conic::real_rows(R, G.V.column(col, inst.Nt)), inv);
        }
        if (u.empty())
            u.push_back(AffineExpr(0.0));
        p.add_rsoc(u, AffineExpr::variable(G.ul_epi[l]), AffineExpr(1.0), "ul_epi" + tag);

        const double trace = eg.omega[l].trace().real() * inst.noise;
        AffineExpr lhs = AffineExpr(c.A - trace / gk.alpha) + AffineExpr::variable(G.rho[l], c.B) -
                         AffineExpr::variable(G.ul_epi[l], scale / gk.alpha) -
                         G.alpha_expr(fixed_alpha(inst, i)) * c.C;
        AffineExpr rhs = target;
        if (L.eves)
            rhs += AffineExpr::variable(G.gamma_ul[l]);
        p.add_ge(lhs, rhs, "ul_rate" + tag);
    }

    namespace
    {
        // a/alpha + b W(beta, alpha) <= Gamma, or its exact form when alpha is fixed.
        void add_gamma_row(ConicProgram &p, const Layout &L, const Instance &inst, int i, int beta_var, int sq_var,
                           int gamma_var, double beta_k, double alpha_k, const std::string &tag)
        {
            const GroupVars &G = L.groups[i];
            const LogUpper c = log_upper_coeffs(beta_k);
            p.add_ge(AffineExpr::variable(beta_var), AffineExpr(1e-9), "beta_pos" + tag);
            if (G.alpha < 0)
            {
                const double a = 1.0 / inst.tau_fixed[i];
                p.add_le(AffineExpr(c.a / a) + AffineExpr::variable(beta_var, c.b / a),
                         AffineExpr::variable(gamma_var), "gamma" + tag);
                return;
            }
            // (beta / beta_k)^2 <= sq
            p.add_rsoc({AffineExpr::variable(beta_var, 1.0 / beta_k)}, AffineExpr::variable(sq_var), AffineExpr(1.0),
                       "beta_sq" + tag);
            AffineExpr lhs = AffineExpr::variable(G.inv_alpha, c.a) +
                             AffineExpr::variable(sq_var, 0.5 * c.b * beta_k / alpha_k) +
                             AffineExpr::variable(G.inv_affine, 0.5 * c.b * beta_k);
            p.add_le(lhs, AffineExpr::variable(gamma_var), "gamma" + tag);
        }
    } // namespace

    void add_eve_dl_blocks(ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e, int i,
                           int k, const SurrogateSettings &)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupVars &G = L.groups[i];
        const GroupDesign &gk = e.point.groups[i];
        const std::string tag = std::to_string(i) + "_" + std::to_string(k);
        for (int m = 0; m < inst.M; ++m)
        {
            const CMat &Q = inst.Hbar[m];
            const double margin = outage_margin(inst, grp.eps_dl[k], m);
            const double base = psi_bar(inst, e.point, i, k, m);
            const double s0 = base + margin;
            AffineExpr lin = an_cross_expr(G, gk, Q, inst.Nt);
            for (int j = 0; j < grp.num_dl(); ++j)
                if (j != k)
                    lin += conic::re_inner(Q * gk.w[j], G.w[j]);
            for (int l = 0; l < grp.num_ul(); ++l)
                lin += AffineExpr::variable(G.rho[l], gk.rho[l] * grp.gbar(m, l));
            lin = lin * 2.0 - base;

            std::vector<AffineExpr> u;
            append(u, conic::real_rows(conic::hermitian_factor(Q), G.w[k]), 1.0 / std::sqrt(s0));
            p.add_rsoc(u, AffineExpr::variable(G.beta_dl[k]), (lin + margin) * (1.0 / s0),
                       "eve_dl" + tag + "_" + std::to_string(m));
        }
        add_gamma_row(p, L, inst, i, G.beta_dl[k], G.beta_dl_sq.empty() ? -1 : G.beta_dl_sq[k], G.gamma_dl[k],
                      gk.beta_dl[k], gk.alpha, "_dl" + tag);
    }

    void add_eve_ul_blocks(ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e, int i,
                           int l, const SurrogateSettings &)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupVars &G = L.groups[i];
        const GroupDesign &gk = e.point.groups[i];
        const std::string tag = std::to_string(i) + "_" + std::to_string(l);
        for (int m = 0; m < inst.M; ++m)
        {
            const CMat &Q = inst.Hbar[m];
            const double margin = outage_margin(inst, grp.eps_ul[l], m);
            const double base = chi_bar(inst, e.point, i, l, m);
            const double s0 = base + margin;
            AffineExpr lin = an_cross_expr(G, gk, Q, inst.Nt);
            for (int k = 0; k < grp.num_dl(); ++k)
                lin += conic::re_inner(Q * gk.w[k], G.w[k]);
            for (int j = 0; j < grp.num_ul(); ++j)
                if (j != l)
                    lin += AffineExpr::variable(G.rho[j], gk.rho[j] * grp.gbar(m, j));
            lin = lin * 2.0 - base;

            const double a = std::sqrt(grp.gbar(m, l) / s0);
            p.add_rsoc({AffineExpr::variable(G.rho[l], a)}, AffineExpr::variable(G.beta_ul[l]),
                       (lin + margin) * (1.0 / s0), "eve_ul" + tag + "_" + std::to_string(m));
        }
        add_gamma_row(p, L, inst, i, G.beta_ul[l], G.beta_ul_sq.empty() ? -1 : G.beta_ul_sq[l], G.gamma_ul[l],
                      gk.beta_ul[l], gk.alpha, "_ul" + tag);
    }

    void add_power_blocks(ConicProgram &p, const Layout &L, const Instance &inst, const ExpansionPoint &e)
    {
        for (int i = 0; i < inst.num_groups(); ++i)
            for (std::size_t l = 0; l < L.groups[i].rho.size(); ++l)
                p.add_ge(AffineExpr::variable(L.groups[i].rho[l]), AffineExpr(0.0), "rho_pos");

        if (!inst.variable_time)
        {
            std::vector<AffineExpr> u;
            for (int i = 0; i < inst.num_groups(); ++i)
            {
                const double tau = inst.tau_fixed[i];
                append(u, energy_terms(L.groups[i], std::sqrt(tau)));
                for (std::size_t l = 0; l < L.groups[i].rho.size(); ++l)
                    p.add_le(AffineExpr::variable(L.groups[i].rho[l]),
                             AffineExpr(std::sqrt(inst.groups[i].p_ul_max[l] / tau)), "ul_power");
            }
            if (u.empty())
                u.push_back(AffineExpr(0.0));
            p.add_rsoc(u, AffineExpr(1.0), AffineExpr(inst.P_bs), "bs_power");
            return;
        }

        if (inst.num_groups() != 2)
            throw invariant_violation("add_power_blocks: variable time split needs exactly two groups");
        const GroupVars &G0 = L.groups[0];
        const GroupVars &G1 = L.groups[1];
        const GroupDesign &k0 = e.point.groups[0];
        const double ak = e.point.groups[1].alpha;
        const AffineExpr a1 = AffineExpr::variable(G1.alpha);

        for (int i = 0; i < 2; ++i)
        {
            const GroupVars &G = L.groups[i];
            p.add_rsoc({AffineExpr(1.0)}, AffineExpr::variable(G.inv_alpha), AffineExpr::variable(G.alpha),
                       "inv_alpha" + std::to_string(i));
            if (G.inv_affine >= 0)
                p.add_rsoc({AffineExpr(1.0)}, AffineExpr::variable(G.inv_affine),
                           AffineExpr::variable(G.alpha, 2.0) - e.point.groups[i].alpha,
                           "inv_affine" + std::to_string(i));
        }
        p.add_le(AffineExpr::variable(G0.inv_alpha) + AffineExpr::variable(G1.inv_alpha), AffineExpr(1.0),
                 "time_split");

        // group-1 energy over alpha_2
        {
            auto u = energy_terms(G1);
            if (u.empty())
                u.push_back(AffineExpr(0.0));
            p.add_rsoc(u, AffineExpr::variable(L.power_epi), a1, "power_epi");
        }
        {
            auto u = energy_terms(G0);
            if (u.empty())
                u.push_back(AffineExpr(0.0));
            AffineExpr rhs = AffineExpr(inst.P_bs) - AffineExpr::variable(L.power_epi) +
                             re_product_expr(G0, k0, inst.Nt) * (2.0 / ak) - a1 * (group_tx_energy(k0) / (ak * ak));
            p.add_rsoc(u, AffineExpr(1.0), rhs, "bs_power");
        }
        for (std::size_t l = 0; l < G0.rho.size(); ++l)
        {
            const double rk = k0.rho[l];
            AffineExpr rhs = AffineExpr(inst.groups[0].p_ul_max[l]) +
                             AffineExpr::variable(G0.rho[l], 2.0 * rk / ak) - a1 * (rk * rk / (ak * ak));
            p.add_rsoc({AffineExpr::variable(G0.rho[l])}, AffineExpr(1.0), rhs, "ul_power0_" + std::to_string(l));
        }
        for (std::size_t l = 0; l < G1.rho.size(); ++l)
            p.add_rsoc({AffineExpr::variable(G1.rho[l])}, AffineExpr(inst.groups[1].p_ul_max[l]), a1,
                       "ul_power1_" + std::to_string(l));
    }

} // namespace fdsec
