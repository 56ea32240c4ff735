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

#include <doctest.h>

#include "fdsec/rates.hpp"
#include "support.hpp"

using namespace fdsec;
using namespace fdsec::testing;

namespace
{
    // One group with unit noise and unit-variance random channels.
    Instance tiny(int Nt, int Nr, int nd, int nu, int M, int Ne, Rng &rng, double sigma_si = 0.0)
    {
        Instance inst;
        inst.Nt = Nt;
        inst.Nr = Nr;
        inst.M = M;
        inst.Ne.assign(M, Ne);
        inst.noise = 1.0;
        inst.P_bs = 1.0;
        inst.sigma_si = sigma_si;
        inst.G_si = complex_gaussian_matrix(Nt, Nr, 1.0, rng);
        for (int m = 0; m < M; ++m)
            inst.Hbar.push_back(CMat::Identity(Nt, Nt) * (Ne * uniform(rng, 0.1, 1.0)));
        UserGroup g;
        for (int k = 0; k < nd; ++k)
        {
            g.h.push_back(complex_gaussian(Nt, 1.0, rng));
            g.eps_dl.push_back(0.99);
            g.dl_id.push_back(k);
        }
        for (int l = 0; l < nu; ++l)
        {
            g.g.push_back(complex_gaussian(Nr, 1.0, rng));
            g.eps_ul.push_back(0.99);
            g.p_ul_max.push_back(1.0);
            g.ul_id.push_back(l);
        }
        g.f = complex_gaussian_matrix(nd, nu, 1.0, rng);
        g.gbar = Mat::Constant(M, nu, Ne * 0.5);
        inst.groups.push_back(g);
        inst.variable_time = false;
        inst.tau_fixed = {1.0};
        return inst;
    }

    DesignPoint tiny_design(const Instance &inst, Rng &rng, double alpha = 1.0)
    {
        DesignPoint pt = zero_design(inst);
        GroupDesign &gd = pt.groups[0];
        for (auto &w : gd.w)
            w = complex_gaussian(inst.Nt, 1.0, rng);
        gd.V = complex_gaussian_matrix(inst.Nt, inst.Nt, 0.3, rng);
        for (auto &r : gd.rho)
            r = uniform(rng, 0.2, 2.0);
        gd.alpha = alpha;
        return pt;
    }
} // namespace

TEST_CASE("DL rate at unit SNR")
{
    Rng rng(1);
    Instance inst = tiny(3, 2, 1, 0, 1, 1, rng);
    DesignPoint pt = zero_design(inst);
    pt.groups[0].V.setZero();
    const CVec &h = inst.groups[0].h[0];
    pt.groups[0].w[0] = h / h.squaredNorm(); // |h^H w|^2 = 1 = noise
    pt.groups[0].alpha = 1.0;
    CHECK(dl_rate(inst, pt, 0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    pt.groups[0].alpha = 2.0;
    CHECK(dl_rate(inst, pt, 0, 0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("DL interference term summed by hand")
{
    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance inst = tiny(4, 3, 2, 2, 1, 2, rng);
        const DesignPoint pt = tiny_design(inst, rng, 1.7);
        const UserGroup &g = inst.groups[0];
        const GroupDesign &d = pt.groups[0];
        for (int k = 0; k < 2; ++k)
        {
            double phi = 1.0;
            const int j = 1 - k;
            cplx s(0.0, 0.0);
            for (int n = 0; n < inst.Nt; ++n)
                s += std::conj(g.h[k][n]) * d.w[j][n];
            phi += std::norm(s);
            for (int c = 0; c < inst.Nt; ++c)
            {
                cplx a(0.0, 0.0);
                for (int n = 0; n < inst.Nt; ++n)
                    a += std::conj(g.h[k][n]) * d.V(n, c);
                phi += std::norm(a);
            }
            for (int l = 0; l < 2; ++l)
                phi += d.rho[l] * d.rho[l] * std::norm(g.f(k, l));
            cplx sig(0.0, 0.0);
            for (int n = 0; n < inst.Nt; ++n)
                sig += std::conj(g.h[k][n]) * d.w[k][n];
            CHECK(dl_interference(inst, pt, 0, k) == doctest::Approx(phi).epsilon(1e-12));
            CHECK(dl_rate(inst, pt, 0, k) == doctest::Approx(std::log1p(std::norm(sig) / phi) / 1.7).epsilon(1e-12));
        }
    }
}

TEST_CASE("UL matched filter on white noise")
{
    Rng rng(3);
    Instance inst = tiny(2, 4, 0, 1, 1, 1, rng);
    DesignPoint pt = zero_design(inst);
    pt.groups[0].rho[0] = 1.0 / inst.groups[0].g[0].norm();
    pt.groups[0].alpha = 1.0;
    CHECK(ul_rate(inst, pt, 0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
    pt.groups[0].alpha = 4.0;
    CHECK(ul_rate(inst, pt, 0, 0) == doctest::Approx(0.25 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("UL SINR equals the output SINR of the explicit MMSE filter")
{
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance inst = tiny(3, 4, 2, 3, 1, 2, rng, 0.3);
        const DesignPoint pt = tiny_design(inst, rng);
        const GroupDesign &d = pt.groups[0];
        for (int l = 0; l < 3; ++l)
        {
            // interference from users decoded later, residual SI and noise
            CMat Phi = CMat::Identity(inst.Nr, inst.Nr);
            for (int j = l + 1; j < 3; ++j)
                Phi += d.rho[j] * d.rho[j] * inst.groups[0].g[j] * inst.groups[0].g[j].adjoint();
            CMat tx = d.V * d.V.adjoint();
            for (const auto &w : d.w)
                tx += w * w.adjoint();
            Phi += inst.sigma_si * inst.G_si.adjoint() * tx * inst.G_si;
            const CVec &g = inst.groups[0].g[l];
            const CVec u = Phi.inverse() * g;
            const double sinr = d.rho[l] * d.rho[l] * std::norm(u.dot(g)) / u.dot(Phi * u).real();
            CHECK(ul_sinr(inst, pt, 0, l) == doctest::Approx(sinr).epsilon(1e-10));
        }
    }
}

TEST_CASE("UL per-user rates sum to the log-det capacity")
{
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep)
    {
        const Instance inst = tiny(1 + rep % 5, 1 + rep % 4, 2, 1 + rep % 4, 1, 2, rng, rep % 2 ? 0.2 : 0.0);
        const DesignPoint pt = tiny_design(inst, rng, uniform(rng, 1.0, 3.0));
        const GroupDesign &d = pt.groups[0];
        CMat N = CMat::Identity(inst.Nr, inst.Nr);
        CMat tx = d.V * d.V.adjoint();
        for (const auto &w : d.w)
            tx += w * w.adjoint();
        N += inst.sigma_si * inst.G_si.adjoint() * tx * inst.G_si;
        CMat S = CMat::Zero(inst.Nr, inst.Nr);
        for (int l = 0; l < inst.groups[0].num_ul(); ++l)
            S += d.rho[l] * d.rho[l] * inst.groups[0].g[l] * inst.groups[0].g[l].adjoint();
        // ln det(I + N^{-1/2} S N^{-1/2}) from the eigenvalues of the whitened signal
        Eigen::SelfAdjointEigenSolver<CMat> en(N);
        const CMat Nih = en.eigenvectors() * en.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                         en.eigenvectors().adjoint();
        Eigen::SelfAdjointEigenSolver<CMat> es(Nih * S * Nih);
        double logdet = 0.0;
        for (int r = 0; r < inst.Nr; ++r)
            logdet += std::log1p(std::max(0.0, es.eigenvalues()[r]));
        logdet *= d.tau();
        double sum = 0.0;
        for (int l = 0; l < inst.groups[0].num_ul(); ++l)
            sum += ul_rate(inst, pt, 0, l);
        REQUIRE(sum == doctest::Approx(logdet).epsilon(1e-9));
        REQUIRE(ul_sum_capacity(inst, pt, 0) == doctest::Approx(logdet).epsilon(1e-9));
    }
}

TEST_CASE("UL rates do not increase with residual SI")
{
    Rng rng(6);
    Instance inst = tiny(3, 3, 2, 2, 1, 2, rng);
    const DesignPoint pt = tiny_design(inst, rng);
    std::vector<double> prev(2, 1e300);
    for (double s : {0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.99})
    {
        inst.sigma_si = s;
        for (int l = 0; l < 2; ++l)
        {
            const double r = ul_rate(inst, pt, 0, l);
            CHECK(r <= prev[l] + 1e-15);
            prev[l] = r;
        }
    }
}

TEST_CASE("rates are linear in the time fraction")
{
    Rng rng(7);
    const Instance inst = tiny(3, 3, 2, 2, 1, 2, rng, 0.1);
    DesignPoint a = tiny_design(inst, rng, 1.0);
    DesignPoint b = a;
    b.groups[0].alpha = 3.0;
    for (int k = 0; k < 2; ++k)
    {
        CHECK(dl_rate(inst, b, 0, k) == doctest::Approx(dl_rate(inst, a, 0, k) / 3.0).epsilon(1e-14));
        CHECK(ul_rate(inst, b, 0, k) == doctest::Approx(ul_rate(inst, a, 0, k) / 3.0).epsilon(1e-14));
        CHECK(dl_rate(inst, a, 0, k) >= 0.0);
        CHECK(ul_rate(inst, a, 0, k) >= 0.0);
    }
}

TEST_CASE("Eve rates")
{
    Rng rng(8);
    SUBCASE("zero channels leak nothing")
    {
        const Instance inst = tiny(3, 3, 2, 2, 1, 2, rng);
        const DesignPoint pt = tiny_design(inst, rng);
        EveChannels eve{CMat::Zero(3, 2), {{CVec::Zero(2), CVec::Zero(2)}}};
        const EveRates r = eve_rates(inst, pt, eve, 0, 0);
        for (double v : r.dl)
            CHECK(v == 0.0);
        for (double v : r.ul)
            CHECK(v == 0.0);
        const RateReport rep = secrecy_rates(inst, pt, {eve});
        CHECK(rep.secrecy_dl[0][1] == doctest::Approx(dl_rate(inst, pt, 0, 1)));
        CHECK(rep.secrecy_ul[0][0] == doctest::Approx(ul_rate(inst, pt, 0, 0)));
    }
    SUBCASE("scalar Eve expanded by hand")
    {
        const Instance inst = tiny(1, 1, 1, 1, 1, 1, rng);
        DesignPoint pt = tiny_design(inst, rng, 2.0);
        const cplx w = pt.groups[0].w[0][0], v = pt.groups[0].V(0, 0);
        const double rho = pt.groups[0].rho[0];
        const cplx H(0.7, -0.2), gm(0.3, 0.4);
        EveChannels eve{CMat::Constant(1, 1, H), {{CVec::Constant(1, gm)}}};
        const double leak = std::norm(H) * std::norm(w), an = std::norm(H) * std::norm(v);
        const double ul = rho * rho * std::norm(gm);
        const EveRates r = eve_rates(inst, pt, eve, 0, 0);
        CHECK(r.dl[0] == doctest::Approx(0.5 * std::log(1.0 + leak / (an + ul + 1.0))).epsilon(1e-13));
        CHECK(r.ul[0] == doctest::Approx(0.5 * std::log(1.0 + ul / (leak + an + 1.0))).epsilon(1e-13));
    }
    SUBCASE("Eve DL SINR grows with the beam norm")
    {
        const Instance inst = tiny(3, 3, 2, 2, 1, 2, rng);
        const DesignPoint pt = tiny_design(inst, rng);
        EveChannels eve{complex_gaussian_matrix(3, 2, 1.0, rng),
                        {{complex_gaussian(2, 1.0, rng), complex_gaussian(2, 1.0, rng)}}};
        double prev = -1.0;
        for (double c : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0})
        {
            DesignPoint q = pt;
            q.groups[0].w[0] *= c;
            const double r = eve_rates(inst, q, eve, 0, 0).dl[0];
            CHECK(r >= prev);
            prev = r;
        }
    }
    SUBCASE("secrecy is clipped and takes the worst Eve")
    {
        const Instance inst = tiny(3, 3, 2, 2, 2, 2, rng);
        const DesignPoint pt = tiny_design(inst, rng);
        std::vector<EveChannels> eves;
        for (int m = 0; m < 2; ++m)
            eves.push_back({complex_gaussian_matrix(3, 2, m ? 50.0 : 0.01, rng),
                            {{complex_gaussian(2, 1.0, rng), complex_gaussian(2, 1.0, rng)}}});
        const RateReport rep = secrecy_rates(inst, pt, eves);
        for (int k = 0; k < 2; ++k)
        {
            const double e0 = eve_rates(inst, pt, eves[0], 0, 0).dl[k];
            const double e1 = eve_rates(inst, pt, eves[1], 1, 0).dl[k];
            CHECK(rep.eve_dl_rate[0][k] == std::max(e0, e1));
            CHECK(rep.secrecy_dl[0][k] == std::max(0.0, dl_rate(inst, pt, 0, k) - std::max(e0, e1)));
            CHECK(rep.secrecy_dl[0][k] >= 0.0);
        }
        DesignPoint capped = pt;
        capped.groups[0].gamma_dl = {1e3, 0.0};
        capped.groups[0].gamma_ul = {0.0, 0.0};
        const RateReport byg = secrecy_rates(inst, capped);
        CHECK(byg.secrecy_dl[0][0] == 0.0);
        CHECK(byg.secrecy_dl[0][1] == doctest::Approx(dl_rate(inst, pt, 0, 1)));
        CHECK(byg.min_secrecy == 0.0);
    }
}

TEST_CASE("power bookkeeping")
{
    const Instance inst = seeded_instance(3);
    Rng rng(9);
    const DesignPoint pt = random_design(inst, rng);
    double p = 0.0;
    for (const auto &g : pt.groups)
    {
        double e = g.V.squaredNorm();
        for (const auto &w : g.w)
            e += w.squaredNorm();
        p += e / g.alpha;
    }
    CHECK(bs_power(pt) == doctest::Approx(p).epsilon(1e-14));
    CHECK(ul_power(pt, 1, 0) == doctest::Approx(pt.groups[1].rho[0] * pt.groups[1].rho[0] / pt.groups[1].alpha));
    const RateReport rep = secrecy_rates(inst, pt);
    CHECK(rep.bs_power == bs_power(pt));
    CHECK(rep.ul_power[1][0] == ul_power(pt, 1, 0));
}

TEST_CASE("outage margin and lemma slack")
{
    Rng rng(10);
    Instance inst = tiny(3, 3, 1, 1, 2, 2, rng);
    CHECK(outage_margin(inst, 0.99, 0) == doctest::Approx((1.0 - std::sqrt(0.99)) * 2.0).epsilon(1e-14));
    DesignPoint pt = tiny_design(inst, rng, 2.0);
    pt.groups[0].gamma_dl[0] = 1.0;
    const double sig = eve_dl_signal(inst, pt, 0, 0, 1);
    CHECK(sig == doctest::Approx(pt.groups[0].w[0].squaredNorm() * inst.Hbar[1](0, 0).real()));
    const double expect = psi_bar(inst, pt, 0, 0, 1) + outage_margin(inst, 0.99, 1) - sig / std::expm1(2.0);
    CHECK(lemma_dl_slack(inst, pt, 0, 0, 1) == doctest::Approx(expect).epsilon(1e-13));
}
