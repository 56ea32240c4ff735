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

#include "fdsec/outage.hpp"
#include "support.hpp"

using namespace fdsec;
using namespace fdsec::testing;

namespace
{
    // Nt = Ne = 1, one DL user and optionally one UL user, no AN, one Eve.
    // The Eve sees |H|^2 ~ Exp(a) and rho^2 |g|^2 ~ Exp(b).
    Instance scalar_instance(double a, double b_gain, int M = 1)
    {
        Instance inst;
        inst.Nt = 1;
        inst.Nr = 1;
        inst.M = M;
        inst.Ne.assign(M, 1);
        inst.noise = 1.0;
        inst.P_bs = 1.0;
        inst.G_si = CMat::Zero(1, 1);
        for (int m = 0; m < M; ++m)
            inst.Hbar.push_back(CMat::Constant(1, 1, a));
        UserGroup g;
        g.h.push_back(CVec::Ones(1));
        g.eps_dl.push_back(0.99);
        g.dl_id.push_back(0);
        if (b_gain > 0.0)
        {
            g.g.push_back(CVec::Ones(1));
            g.eps_ul.push_back(0.99);
            g.p_ul_max.push_back(1.0);
            g.ul_id.push_back(0);
        }
        g.f = CMat::Zero(1, g.g.size());
        g.gbar = Mat::Constant(M, g.g.size(), b_gain);
        g.artificial_noise = false;
        inst.groups.push_back(g);
        inst.variable_time = false;
        inst.tau_fixed = {1.0};
        return inst;
    }

    DesignPoint scalar_design(const Instance &inst, double gamma)
    {
        DesignPoint pt = zero_design(inst);
        pt.groups[0].w[0] = CVec::Ones(1);
        pt.groups[0].alpha = 1.0;
        pt.groups[0].gamma_dl = {gamma};
        if (!pt.groups[0].rho.empty())
        {
            pt.groups[0].rho[0] = 1.0;
            pt.groups[0].gamma_ul = {1e9};
        }
        return pt;
    }
} // namespace

TEST_CASE("Wilson score interval")
{
    const WilsonInterval a = wilson_interval(5, 10);
    CHECK(a.estimate == 0.5);
    CHECK(a.low == doctest::Approx(0.23659309).epsilon(1e-6));
    CHECK(a.high == doctest::Approx(0.76340691).epsilon(1e-6));
    const WilsonInterval z = wilson_interval(0, 10);
    CHECK(z.low == 0.0);
    CHECK(z.high == doctest::Approx(0.27753279).epsilon(1e-6));
    for (long s : {0L, 1L, 37L, 9900L, 10000L})
    {
        const WilsonInterval w = wilson_interval(s, 10000);
        CHECK(w.low <= w.estimate);
        CHECK(w.estimate <= w.high);
        CHECK(w.low >= 0.0);
        CHECK(w.high <= 1.0);
    }
}

TEST_CASE("sampled Eve channels match the stored second moments")
{
    const Instance inst = seeded_instance(3);
    Rng rng(17);
    const int n = 10000;
    CMat cov = CMat::Zero(inst.Nt, inst.Nt);
    double g2 = 0.0;
    for (int s = 0; s < n; ++s)
    {
        const EveChannels e = sample_eve(inst, 1, rng);
        cov += e.H * e.H.adjoint();
        g2 += e.g[0][1].squaredNorm();
    }
    cov /= n;
    CHECK((cov - inst.Hbar[1]).norm() <= 0.05 * inst.Hbar[1].norm());
    CHECK(g2 / n == doctest::Approx(inst.groups[0].gbar(1, 1)).epsilon(0.05));
}

TEST_CASE("extreme rate caps")
{
    const Instance inst = seeded_instance(4);
    Rng rng(4);
    DesignPoint pt = random_design(inst, rng);
    for (auto &g : pt.groups)
    {
        std::fill(g.gamma_dl.begin(), g.gamma_dl.end(), 1e9);
        std::fill(g.gamma_ul.begin(), g.gamma_ul.end(), 1e9);
    }
    Rng mc(1);
    const OutageReport all = empirical_outage(inst, pt, 1000, mc);
    CHECK(all.all_pass);
    for (const auto &c : all.checks)
        CHECK(c.probability.estimate == 1.0);

    for (auto &g : pt.groups)
    {
        std::fill(g.gamma_dl.begin(), g.gamma_dl.end(), 0.0);
        std::fill(g.gamma_ul.begin(), g.gamma_ul.end(), 0.0);
    }
    const OutageReport none = empirical_outage(inst, pt, 1000, mc);
    CHECK(!none.all_pass);
    for (const auto &c : none.checks)
        CHECK(c.probability.estimate == 0.0);
}

TEST_CASE("scalar outage against the exponential-ratio CDF")
{
    // P(X <= t (Y + 1)) with X ~ Exp(a), Y ~ Exp(b) is 1 - exp(-t/a) / (1 + t b / a)
    const double a = 4.0, b = 2.5;
    const Instance inst = scalar_instance(a, b);
    for (double gamma : {0.3, 1.0, 2.0})
    {
        const double t = std::expm1(gamma);
        const double exact = 1.0 - std::exp(-t / a) / (1.0 + t * b / a);
        Rng rng(100 + static_cast<int>(10 * gamma));
        const OutageReport rep = empirical_outage(inst, scalar_design(inst, gamma), 20000, rng);
        const OutageCheck &c = rep.checks[0];
        REQUIRE(!c.uplink);
        CHECK(c.probability.low - 1e-3 <= exact);
        CHECK(exact <= c.probability.high + 1e-3);
    }
    // without interference the CDF is 1 - exp(-t / a)
    const Instance quiet = scalar_instance(a, 0.0);
    Rng rng(7);
    const OutageReport rep = empirical_outage(quiet, scalar_design(quiet, 1.0), 20000, rng);
    const double exact = 1.0 - std::exp(-std::expm1(1.0) / a);
    CHECK(std::abs(rep.checks[0].probability.estimate - exact) <= 3.0 * rep.checks[0].probability.half_width());
}

TEST_CASE("Markov chain holds when the Eve sees only noise")
{
    for (int M : {1, 2})
    {
        const Instance inst = scalar_instance(3.0, 0.0, M);
        const double margin = outage_margin(inst, 0.99, 0);
        // Gamma chosen so the deterministic outage row is tight
        const double signal = inst.Hbar[0](0, 0).real();
        const double gamma = std::log1p(signal / margin);
        const DesignPoint pt = scalar_design(inst, gamma);
        CHECK(lemma_dl_slack(inst, pt, 0, 0, 0) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
        Rng rng(11);
        const auto checks = markov_bound_check(inst, pt, 20000, rng);
        for (const auto &c : checks)
        {
            CHECK(c.premise_holds);
            CHECK(c.bound == doctest::Approx(1.0 - std::pow(0.99, 1.0 / M)).epsilon(1e-9));
            CHECK(c.holds);
        }
    }
    // zero beam: both the bound and the exceedance vanish
    const Instance inst = scalar_instance(3.0, 0.0);
    DesignPoint pt = scalar_design(inst, 0.5);
    pt.groups[0].w[0].setZero();
    Rng rng(12);
    for (const auto &c : markov_bound_check(inst, pt, 2000, rng))
    {
        CHECK(c.bound == 0.0);
        CHECK(c.exceed.estimate == 0.0);
        CHECK(c.holds);
    }
}

TEST_CASE("interference makes the Markov premise fail")
{
    const Instance inst = scalar_instance(3.0, 2.0);
    Rng rng(13);
    for (const auto &c : markov_bound_check(inst, scalar_design(inst, 0.5), 1000, rng))
        CHECK(!c.premise_holds);
}

TEST_CASE("per-Eve level eps^(1/M) rises with the Eve count")
{
    // each Eve must be held with probability eps^(1/M), so the noise share shrinks
    const Instance one = scalar_instance(1.0, 0.0, 1), two = scalar_instance(1.0, 0.0, 2);
    CHECK(outage_margin(two, 0.99, 0) < outage_margin(one, 0.99, 0));
    CHECK(outage_margin(two, 0.99, 0) == doctest::Approx(1.0 - std::sqrt(0.99)));
    CHECK(outage_margin(one, 0.99, 0) == doctest::Approx(0.01));
}

TEST_CASE("outage runs are reproducible for a seed")
{
    const Instance inst = seeded_instance(5);
    Rng d(5);
    const DesignPoint pt = random_design(inst, d);
    Rng a(3), b(3);
    const OutageReport ra = empirical_outage(inst, pt, 500, a), rb = empirical_outage(inst, pt, 500, b);
    REQUIRE(ra.checks.size() == rb.checks.size());
    for (std::size_t c = 0; c < ra.checks.size(); ++c)
        CHECK(ra.checks[c].probability.estimate == rb.checks[c].probability.estimate);
}
