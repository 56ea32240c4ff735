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

#include "fdsec/rates.hpp"

#include <algorithm>
#include <limits>

namespace fdsec
{
    DesignPoint zero_design(const Instance &inst)
    {
        DesignPoint pt;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            GroupDesign gd;
            gd.w.assign(grp.num_dl(), CVec::Zero(inst.Nt));
            gd.V = CMat::Zero(inst.Nt, grp.artificial_noise ? inst.Nt : 0);
            gd.rho.assign(grp.num_ul(), 0.0);
            gd.alpha = inst.variable_time ? 2.0 : 1.0 / inst.tau_fixed[i];
            gd.beta_dl.assign(grp.num_dl(), 0.0);
            gd.beta_ul.assign(grp.num_ul(), 0.0);
            gd.gamma_dl.assign(grp.num_dl(), 0.0);
            gd.gamma_ul.assign(grp.num_ul(), 0.0);
            pt.groups.push_back(std::move(gd));
        }
        return pt;
    }

    double dl_interference(const Instance &inst, const DesignPoint &pt, int i, int k)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gd = pt.groups[i];
        const CVec &h = grp.h[k];
        double phi = inst.noise;
        for (int j = 0; j < grp.num_dl(); ++j)
            if (j != k)
                phi += std::norm(h.dot(gd.w[j]));
        if (gd.V.cols() > 0)
            phi += (h.adjoint() * gd.V).squaredNorm();
        for (int l = 0; l < grp.num_ul(); ++l)
            phi += gd.rho[l] * gd.rho[l] * std::norm(grp.f(k, l));
        return phi;
    }

    double dl_sinr(const Instance &inst, const DesignPoint &pt, int i, int k)
    {
        const cplx s = inst.groups[i].h[k].dot(pt.groups[i].w[k]);
        return std::norm(s) / dl_interference(inst, pt, i, k);
    }

    double dl_rate(const Instance &inst, const DesignPoint &pt, int i, int k)
    {
        return pt.groups[i].tau() * std::log1p(dl_sinr(inst, pt, i, k));
    }

    namespace
    {
        // sigma_SI G^H (sum w w^H + V V^H) G + noise I
        CMat si_plus_noise(const Instance &inst, const GroupDesign &gd)
        {
            CMat cov = CMat::Identity(inst.Nr, inst.Nr) * inst.noise;
            if (inst.sigma_si > 0.0)
            {
                const CMat Gh = inst.G_si.adjoint();
                for (const auto &w : gd.w)
                {
                    const CVec a = Gh * w;
                    cov.noalias() += inst.sigma_si * a * a.adjoint();
                }
                if (gd.V.cols() > 0)
                {
                    const CMat a = Gh * gd.V;
                    cov.noalias() += inst.sigma_si * a * a.adjoint();
                }
            }
            return cov;
        }
    } // namespace

    CMat ul_covariance(const Instance &inst, const DesignPoint &pt, int i, int first)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gd = pt.groups[i];
        CMat cov = si_plus_noise(inst, gd);
        for (int j = std::max(first, 0); j < grp.num_ul(); ++j)
            cov.noalias() += gd.rho[j] * gd.rho[j] * grp.g[j] * grp.g[j].adjoint();
        return cov;
    }

    double ul_sinr(const Instance &inst, const DesignPoint &pt, int i, int l)
    {
        const CMat phi = ul_covariance(inst, pt, i, l + 1);
        const CVec &g = inst.groups[i].g[l];
        const CVec x = phi.ldlt().solve(g);
        const double rho = pt.groups[i].rho[l];
        return rho * rho * std::max(0.0, g.dot(x).real());
    }

    double ul_rate(const Instance &inst, const DesignPoint &pt, int i, int l)
    {
        return pt.groups[i].tau() * std::log1p(ul_sinr(inst, pt, i, l));
    }

    double ul_sum_capacity(const Instance &inst, const DesignPoint &pt, int i)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gd = pt.groups[i];
        const CMat noise = si_plus_noise(inst, gd);
        CMat signal = CMat::Zero(inst.Nr, inst.Nr);
        for (int l = 0; l < grp.num_ul(); ++l)
            signal.noalias() += gd.rho[l] * gd.rho[l] * grp.g[l] * grp.g[l].adjoint();
        // ln det(N + S) - ln det(N) via Cholesky factors
        Eigen::LLT<CMat> a(noise + signal);
        Eigen::LLT<CMat> b(noise);
        double ld = 0.0;
        for (int r = 0; r < inst.Nr; ++r)
            ld += 2.0 * (std::log(std::real(a.matrixL()(r, r))) - std::log(std::real(b.matrixL()(r, r))));
        return gd.tau() * ld;
    }

    EveRates eve_rates(const Instance &inst, const DesignPoint &pt, const EveChannels &eve, int m, int i)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gd = pt.groups[i];
        const CMat Hh = eve.H.adjoint();
        const double noise = inst.Ne[m] * inst.noise;

        std::vector<double> leak(grp.num_dl());
        double leak_total = 0.0;
        for (int k = 0; k < grp.num_dl(); ++k)
        {
            leak[k] = (Hh * gd.w[k]).squaredNorm();
            leak_total += leak[k];
        }
        const double an = gd.V.cols() > 0 ? (Hh * gd.V).squaredNorm() : 0.0;
        std::vector<double> ul(grp.num_ul());
        double ul_total = 0.0;
        for (int l = 0; l < grp.num_ul(); ++l)
        {
            ul[l] = gd.rho[l] * gd.rho[l] * eve.g[i][l].squaredNorm();
            ul_total += ul[l];
        }

        EveRates r;
        for (int k = 0; k < grp.num_dl(); ++k)
        {
            const double psi = (leak_total - leak[k]) + an + ul_total + noise;
            r.dl.push_back(gd.tau() * std::log1p(leak[k] / psi));
        }
        for (int l = 0; l < grp.num_ul(); ++l)
        {
            const double chi = leak_total + an + (ul_total - ul[l]) + noise;
            r.ul.push_back(gd.tau() * std::log1p(ul[l] / chi));
        }
        return r;
    }

    namespace
    {
        double quad(const CMat &Q, const CVec &w) { return std::real(w.dot(Q * w)); }

        double an_leak_bar(const CMat &Hbar, const CMat &V)
        {
            if (V.cols() == 0)
                return 0.0;
            return std::real((V.adjoint() * Hbar * V).trace());
        }
    } // namespace

    double psi_bar(const Instance &inst, const DesignPoint &pt, int i, int k, int m)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gd = pt.groups[i];
        double s = an_leak_bar(inst.Hbar[m], gd.V);
        for (int j = 0; j < grp.num_dl(); ++j)
            if (j != k)
                s += quad(inst.Hbar[m], gd.w[j]);
        for (int l = 0; l < grp.num_ul(); ++l)
            s += gd.rho[l] * gd.rho[l] * grp.gbar(m, l);
        return s;
    }

    double chi_bar(const Instance &inst, const DesignPoint &pt, int i, int l, int m)
    {
        const UserGroup &grp = inst.groups[i];
        const GroupDesign &gd = pt.groups[i];
        double s = an_leak_bar(inst.Hbar[m], gd.V);
        for (int k = 0; k < grp.num_dl(); ++k)
            s += quad(inst.Hbar[m], gd.w[k]);
        for (int j = 0; j < grp.num_ul(); ++j)
            if (j != l)
                s += gd.rho[j] * gd.rho[j] * grp.gbar(m, j);
        return s;
    }

    double eve_dl_signal(const Instance &inst, const DesignPoint &pt, int i, int k, int m)
    {
        return quad(inst.Hbar[m], pt.groups[i].w[k]);
    }

    double eve_ul_signal(const Instance &inst, const DesignPoint &pt, int i, int l, int m)
    {
        const double rho = pt.groups[i].rho[l];
        return rho * rho * inst.groups[i].gbar(m, l);
    }

    double outage_margin(const Instance &inst, double eps, int m)
    {
        return (1.0 - std::pow(eps, 1.0 / inst.M)) * inst.Ne[m] * inst.noise;
    }

    namespace
    {
        double lemma_slack(double signal, double interference, double margin, double alpha_gamma)
        {
            const double denom = std::expm1(alpha_gamma);
            const double rhs = interference + margin;
            if (denom <= 0.0)
                return signal > 0.0 ? -std::numeric_limits<double>::infinity() : rhs;
            return rhs - signal / denom;
        }
    } // namespace

    double lemma_dl_slack(const Instance &inst, const DesignPoint &pt, int i, int k, int m)
    {
        const GroupDesign &gd = pt.groups[i];
        return lemma_slack(eve_dl_signal(inst, pt, i, k, m), psi_bar(inst, pt, i, k, m),
                           outage_margin(inst, inst.groups[i].eps_dl[k], m), gd.alpha * gd.gamma_dl[k]);
    }

    double lemma_ul_slack(const Instance &inst, const DesignPoint &pt, int i, int l, int m)
    {
        const GroupDesign &gd = pt.groups[i];
        return lemma_slack(eve_ul_signal(inst, pt, i, l, m), chi_bar(inst, pt, i, l, m),
                           outage_margin(inst, inst.groups[i].eps_ul[l], m), gd.alpha * gd.gamma_ul[l]);
    }

    double group_tx_energy(const GroupDesign &g)
    {
        double e = g.V.squaredNorm();
        for (const auto &w : g.w)
            e += w.squaredNorm();
        return e;
    }

    double bs_power(const DesignPoint &pt)
    {
        double p = 0.0;
        for (const auto &g : pt.groups)
            p += g.tau() * group_tx_energy(g);
        return p;
    }

    double ul_power(const DesignPoint &pt, int i, int l)
    {
        const GroupDesign &g = pt.groups[i];
        return g.tau() * g.rho[l] * g.rho[l];
    }

    namespace
    {
        RateReport own_rates(const Instance &inst, const DesignPoint &pt)
        {
            RateReport r;
            const int G = inst.num_groups();
            r.dl_rate.resize(G);
            r.ul_rate.resize(G);
            r.ul_power.resize(G);
            for (int i = 0; i < G; ++i)
            {
                for (int k = 0; k < inst.groups[i].num_dl(); ++k)
                    r.dl_rate[i].push_back(dl_rate(inst, pt, i, k));
                for (int l = 0; l < inst.groups[i].num_ul(); ++l)
                {
                    r.ul_rate[i].push_back(ul_rate(inst, pt, i, l));
                    r.ul_power[i].push_back(ul_power(pt, i, l));
                }
            }
            r.bs_power = bs_power(pt);
            return r;
        }

        void finish(RateReport &r)
        {
            const std::size_t G = r.dl_rate.size();
            r.secrecy_dl.resize(G);
            r.secrecy_ul.resize(G);
            double mn = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < G; ++i)
            {
                r.secrecy_dl[i].clear();
                r.secrecy_ul[i].clear();
                for (std::size_t k = 0; k < r.dl_rate[i].size(); ++k)
                {
                    r.secrecy_dl[i].push_back(std::max(0.0, r.dl_rate[i][k] - r.eve_dl_rate[i][k]));
                    mn = std::min(mn, r.secrecy_dl[i].back());
                }
                for (std::size_t l = 0; l < r.ul_rate[i].size(); ++l)
                {
                    r.secrecy_ul[i].push_back(std::max(0.0, r.ul_rate[i][l] - r.eve_ul_rate[i][l]));
                    mn = std::min(mn, r.secrecy_ul[i].back());
                }
            }
            r.min_secrecy = std::isfinite(mn) ? mn : 0.0;
        }
    } // namespace

    RateReport secrecy_rates(const Instance &inst, const DesignPoint &pt, const std::vector<EveChannels> &eves)
    {
        RateReport r = own_rates(inst, pt);
        const int G = inst.num_groups();
        r.eve_dl_rate.resize(G);
        r.eve_ul_rate.resize(G);
        for (int i = 0; i < G; ++i)
        {
            r.eve_dl_rate[i].assign(inst.groups[i].num_dl(), 0.0);
            r.eve_ul_rate[i].assign(inst.groups[i].num_ul(), 0.0);
            for (std::size_t m = 0; m < eves.size(); ++m)
            {
                const EveRates e = eve_rates(inst, pt, eves[m], static_cast<int>(m), i);
                for (std::size_t k = 0; k < e.dl.size(); ++k)
                    r.eve_dl_rate[i][k] = std::max(r.eve_dl_rate[i][k], e.dl[k]);
                for (std::size_t l = 0; l < e.ul.size(); ++l)
                    r.eve_ul_rate[i][l] = std::max(r.eve_ul_rate[i][l], e.ul[l]);
            }
        }
        finish(r);
        return r;
    }

    RateReport secrecy_rates(const Instance &inst, const DesignPoint &pt)
    {
        RateReport r = own_rates(inst, pt);
        const int G = inst.num_groups();
        r.eve_dl_rate.resize(G);
        r.eve_ul_rate.resize(G);
        for (int i = 0; i < G; ++i)
        {
            r.eve_dl_rate[i] = pt.groups[i].gamma_dl;
            r.eve_ul_rate[i] = pt.groups[i].gamma_ul;
        }
        finish(r);
        return r;
    }

} // namespace fdsec
