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

#include "fdsec/path_following.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

namespace fdsec
{
    using conic::AffineExpr;

    void SolverOptions::validate() const
    {
        if (max_iters < 1)
            throw invariant_violation("SolverOptions: max_iters must be >= 1");
        if (!(rel_tol > 0.0))
            throw invariant_violation("SolverOptions: rel_tol must be positive");
        if (!(eta_min > 0.0))
            throw invariant_violation("SolverOptions: eta_min must be positive");
        if (qos_ul_bps && *qos_ul_bps < 0.0)
            throw invariant_violation("SolverOptions: UL rate target must be >= 0");
    }

    // ---------------------------------------------------------------------
    // audits

    FeasibilityCheck check_feasibility(const Instance &inst, const DesignPoint &pt)
    {
        FeasibilityCheck f;
        f.bs_power = bs_power(pt);
        f.bs_power_rel_excess = std::max(0.0, f.bs_power / inst.P_bs - 1.0);
        f.min_rho = std::numeric_limits<double>::infinity();
        f.min_alpha = std::numeric_limits<double>::infinity();
        f.min_lemma_rel_slack = std::numeric_limits<double>::infinity();
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            const GroupDesign &gd = pt.groups[i];
            f.tau_sum += gd.tau();
            f.min_alpha = std::min(f.min_alpha, gd.alpha);
            for (int l = 0; l < grp.num_ul(); ++l)
            {
                f.min_rho = std::min(f.min_rho, gd.rho[l]);
                f.ul_power_rel_excess =
                    std::max(f.ul_power_rel_excess, ul_power(pt, i, l) / grp.p_ul_max[l] - 1.0);
            }
            for (int m = 0; m < inst.M; ++m)
            {
                for (int k = 0; k < grp.num_dl(); ++k)
                {
                    const double rhs = psi_bar(inst, pt, i, k, m) + outage_margin(inst, grp.eps_dl[k], m);
                    f.min_lemma_rel_slack = std::min(f.min_lemma_rel_slack, lemma_dl_slack(inst, pt, i, k, m) / rhs);
                }
                for (int l = 0; l < grp.num_ul(); ++l)
                {
                    const double rhs = chi_bar(inst, pt, i, l, m) + outage_margin(inst, grp.eps_ul[l], m);
                    f.min_lemma_rel_slack = std::min(f.min_lemma_rel_slack, lemma_ul_slack(inst, pt, i, l, m) / rhs);
                }
            }
        }
        if (!std::isfinite(f.min_rho))
            f.min_rho = 0.0;
        // +inf means there was no outage row; -inf (a zero cap with leakage) must stay
        if (f.min_lemma_rel_slack == std::numeric_limits<double>::infinity())
            f.min_lemma_rel_slack = 0.0;
        f.tau_slack = 1.0 - f.tau_sum;
        f.ok = f.bs_power_rel_excess <= 1e-6 && f.ul_power_rel_excess <= 1e-6 && f.min_rho >= 0.0 &&
               f.tau_sum <= 1.0 + 1e-9 && f.min_lemma_rel_slack >= -1e-6 &&
               (!inst.variable_time || f.min_alpha > 1.0);
        return f;
    }

    RecoveredTimes recover_solution(const Instance &inst, const DesignPoint &pt)
    {
        RecoveredTimes r;
        for (const auto &g : pt.groups)
        {
            if (inst.variable_time && !(g.alpha > 1.0))
                throw invariant_violation("recover_solution: alpha must exceed 1");
            if (!(g.alpha > 0.0))
                throw invariant_violation("recover_solution: alpha must be positive");
            r.tau.push_back(1.0 / g.alpha);
            r.tau_sum += r.tau.back();
        }
        r.slack = 1.0 - r.tau_sum;
        return r;
    }

    // ---------------------------------------------------------------------
    // starting point

    DesignPoint seed_point(const Instance &inst)
    {
        DesignPoint pt = zero_design(inst);
        double tau_tx = 0.0;
        for (int i = 0; i < inst.num_groups(); ++i)
            if (inst.groups[i].num_dl() > 0 || inst.groups[i].artificial_noise)
                tau_tx += pt.groups[i].tau();
        const double budget = tau_tx > 0.0 ? inst.P_bs / tau_tx : 0.0;
        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            GroupDesign &gd = pt.groups[i];
            const int K = grp.num_dl();
            for (int k = 0; k < K; ++k)
                gd.w[k] = std::sqrt(0.8 * budget / K) * grp.h[k] / grp.h[k].norm();
            if (grp.artificial_noise)
                gd.V = CMat::Identity(inst.Nt, inst.Nt) * std::sqrt(0.05 * budget / inst.Nt);
            for (int l = 0; l < grp.num_ul(); ++l)
                gd.rho[l] = std::sqrt(0.8 * grp.p_ul_max[l] / gd.tau());
        }
        return pt;
    }

    namespace
    {
        using Clock = std::chrono::steady_clock;

        double elapsed_ms(Clock::time_point t0)
        {
            return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        }

        // Pulls 1/alpha_1 + 1/alpha_2 back to <= 1 after solver round-off.
        void polish_times(const Instance &inst, DesignPoint &pt)
        {
            if (!inst.variable_time)
                return;
            double s = 0.0;
            for (const auto &g : pt.groups)
                s += 1.0 / g.alpha;
            if (s > 1.0)
                for (auto &g : pt.groups)
                    g.alpha *= s;
        }

        double max_tightness(const Instance &inst, const ExpansionPoint &e)
        {
            double t = 0.0;
            for (int i = 0; i < inst.num_groups(); ++i)
            {
                for (int k = 0; k < inst.groups[i].num_dl(); ++k)
                    t = std::max(t, std::abs(dl_surrogate(inst, e, e.point, i, k) - e.groups[i].rate_dl[k]));
                for (int l = 0; l < inst.groups[i].num_ul(); ++l)
                    t = std::max(t, std::abs(ul_surrogate(inst, e, e.point, i, l) - e.groups[i].rate_ul[l]));
            }
            return t;
        }

        double min_over(const Instance &inst, const DesignPoint &pt, bool dl, bool ul, double rbar)
        {
            double v = std::numeric_limits<double>::infinity();
            for (int i = 0; i < inst.num_groups(); ++i)
            {
                const GroupDesign &gd = pt.groups[i];
                if (dl)
                    for (int k = 0; k < inst.groups[i].num_dl(); ++k)
                        v = std::min(v, dl_rate(inst, pt, i, k) - gd.gamma_dl[k]);
                if (ul)
                    for (int l = 0; l < inst.groups[i].num_ul(); ++l)
                        v = std::min(v, ul_rate(inst, pt, i, l) - gd.gamma_ul[l] - rbar);
            }
            return v;
        }

        struct StepResult
        {
            bool accepted = false;
            DesignPoint point;
            double objective = 0.0;
        };

        StepResult step(const Instance &inst, const ExpansionPoint &e, const SolverOptions &opts, Objective obj,
                        bool eves, IterationRecord &rec)
        {
            const auto t0 = Clock::now();
            Subproblem sp = build_subproblem(inst, e, opts, obj, eves);
            Vec x0 = layout_values(sp.layout, inst, e, e.point);
            x0.conservativeResize(sp.program.num_variables());
            if (sp.objective_var != sp.layout.eta)
            {
                const double rbar = opts.qos_ul_bps ? bits_to_nats(*opts.qos_ul_bps) : 0.0;
                x0[sp.objective_var] = min_over(inst, e.point, false, true, rbar);
                x0[sp.layout.eta] = std::max(e.point.eta, -1e3);
            }
            rec.self_violation = sp.program.max_violation(x0);
            rec.tightness = max_tightness(inst, e);

            const conic::Solution sol = conic::solve(sp.program, opts.conic);
            rec.status = sol.status;
            rec.solver_iters = sol.iterations;
            rec.ms = opts.record_timing ? elapsed_ms(t0) : 0.0;

            StepResult r;
            if (sol.x.size() != sp.program.num_variables())
                return r;
            rec.violation = sp.program.max_violation(sol.x);
            const bool usable = sol.status == conic::Status::optimal ||
                                (sol.status == conic::Status::numerical_limit && rec.violation <= opts.accept_violation);
            if (!usable)
                return r;
            r.accepted = true;
            r.point = layout_design(sp.layout, inst, sol.x);
            polish_times(inst, r.point);
            r.objective = sol.x[sp.objective_var];
            rec.eta = r.objective;
            return r;
        }

        // beta tight in the outage cones, Gamma tight in the log bound.
        void set_eve_slacks(const Instance &inst, DesignPoint &pt, const SurrogateSettings &s)
        {
            for (int i = 0; i < inst.num_groups(); ++i)
            {
                const UserGroup &grp = inst.groups[i];
                GroupDesign &gd = pt.groups[i];
                for (int k = 0; k < grp.num_dl(); ++k)
                {
                    double beta = s.beta_floor;
                    for (int m = 0; m < inst.M; ++m)
                        beta = std::max(beta, eve_dl_signal(inst, pt, i, k, m) /
                                                  (psi_bar(inst, pt, i, k, m) + outage_margin(inst, grp.eps_dl[k], m)));
                    gd.beta_dl[k] = beta;
                    gd.gamma_dl[k] = std::log1p(beta) / gd.alpha;
                }
                for (int l = 0; l < grp.num_ul(); ++l)
                {
                    double beta = s.beta_floor;
                    for (int m = 0; m < inst.M; ++m)
                        beta = std::max(beta, eve_ul_signal(inst, pt, i, l, m) /
                                                  (chi_bar(inst, pt, i, l, m) + outage_margin(inst, grp.eps_ul[l], m)));
                    gd.beta_ul[l] = beta;
                    gd.gamma_ul[l] = std::log1p(beta) / gd.alpha;
                }
            }
        }
    } // namespace

    ExpansionPoint initialize(const Instance &inst, const SolverOptions &opts, int *rounds)
    {
        opts.validate();
        DesignPoint pt = seed_point(inst);
        ExpansionPoint e = make_expansion(inst, pt, opts.surrogate);
        e.point.eta = -std::numeric_limits<double>::infinity();
        double eta = -std::numeric_limits<double>::infinity();
        int r = 0;
        while (r < opts.init_max_rounds && !(eta >= opts.eta_min))
        {
            ++r;
            IterationRecord rec;
            e.point.eta = min_over(inst, e.point, true, true, 0.0);
            StepResult s = step(inst, e, opts, Objective::maxmin, false, rec);
            if (!s.accepted)
                throw initialization_failure("Eve-free warm-up subproblem failed (" +
                                                 std::string(conic::to_string(rec.status)) + ")",
                                             e.point);
            eta = s.objective;
            e = make_expansion(inst, s.point, opts.surrogate);
        }
        if (rounds)
            *rounds = r;
        if (!(eta >= opts.eta_min))
            throw initialization_failure("warm-up did not reach eta_min", e.point);

        DesignPoint start = e.point;
        set_eve_slacks(inst, start, opts.surrogate);
        start.eta = min_over(inst, start, true, true, 0.0);
        return make_expansion(inst, start, opts.surrogate);
    }

    Subproblem build_subproblem(const Instance &inst, const ExpansionPoint &e, const SolverOptions &opts,
                                Objective obj, bool eves)
    {
        Subproblem sp;
        conic::ConicProgram &p = sp.program;
        sp.layout = allocate_layout(p, inst, eves);
        const Layout &L = sp.layout;
        const double rbar = opts.qos_ul_bps ? bits_to_nats(*opts.qos_ul_bps) : 0.0;
        const AffineExpr eta = AffineExpr::variable(L.eta);

        sp.objective_var = L.eta;
        if (obj == Objective::qos_find)
        {
            sp.objective_var = p.add_variable("qos_slack");
            // eta only feeds the DL rows here; keep it bounded
            p.add_ge(eta, AffineExpr(-1e3), "eta_floor");
        }

        for (int i = 0; i < inst.num_groups(); ++i)
        {
            const UserGroup &grp = inst.groups[i];
            for (int k = 0; k < grp.num_dl(); ++k)
            {
                add_dl_blocks(p, L, inst, e, i, k, eta, opts.surrogate);
                if (eves)
                    add_eve_dl_blocks(p, L, inst, e, i, k, opts.surrogate);
            }
            for (int l = 0; l < grp.num_ul(); ++l)
            {
                AffineExpr target = eta;
                if (obj == Objective::qos_find)
                    target = AffineExpr(rbar) + AffineExpr::variable(sp.objective_var);
                else if (obj == Objective::qos_dl)
                    target = AffineExpr(rbar);
                add_ul_blocks(p, L, inst, e, i, l, target);
                if (eves)
                    add_eve_ul_blocks(p, L, inst, e, i, l, opts.surrogate);
            }
        }
        add_power_blocks(p, L, inst, e);
        p.set_objective(AffineExpr::variable(sp.objective_var));
        return sp;
    }

    namespace
    {
        void finish_report(const Instance &inst, const SolverOptions &opts, SolveReport &rep)
        {
            const bool qos = opts.qos_ul_bps.has_value();
            rep.rates = secrecy_rates(inst, rep.design);
            double mn = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rep.rates.secrecy_dl.size(); ++i)
            {
                for (double v : rep.rates.secrecy_dl[i])
                    mn = std::min(mn, v);
                if (!qos)
                    for (double v : rep.rates.secrecy_ul[i])
                        mn = std::min(mn, v);
            }
            rep.maxmin_secrecy = std::isfinite(mn) ? mn : 0.0;
            if (qos)
            {
                const double rbar = bits_to_nats(*opts.qos_ul_bps);
                for (const auto &row : rep.rates.secrecy_ul)
                    for (double v : row)
                        if (v < rbar - 1e-6)
                            rep.qos_feasible = false;
            }
            rep.feasibility = check_feasibility(inst, rep.design);
            if (opts.outage_samples > 0)
            {
                Rng rng(opts.outage_seed);
                rep.outage = empirical_outage(inst, rep.design, opts.outage_samples, rng);
            }
        }
    } // namespace

    SolveReport run(const Instance &inst, const SolverOptions &opts)
    {
        opts.validate();
        const auto t0 = Clock::now();
        SolveReport rep;
        ExpansionPoint e;
        try
        {
            e = initialize(inst, opts, &rep.init_rounds);
        }
        catch (const initialization_failure &f)
        {
            rep.message = std::string("initialization failed: ") + f.what();
            rep.design = f.best_point;
            rep.qos_feasible = false;
            finish_report(inst, opts, rep);
            rep.ok = false;
            rep.total_ms = opts.record_timing ? elapsed_ms(t0) : 0.0;
            return rep;
        }
        catch (const invalid_expansion &f)
        {
            rep.message = std::string("initialization failed: ") + f.what();
            rep.design = seed_point(inst);
            rep.qos_feasible = false;
            finish_report(inst, opts, rep);
            rep.ok = false;
            rep.total_ms = opts.record_timing ? elapsed_ms(t0) : 0.0;
            return rep;
        }
        rep.init_eta = e.point.eta;
        rep.min_omega_eig = 0.0;

        Objective obj = Objective::maxmin;
        int iter = 0;
        std::string failure;

        if (opts.qos_ul_bps)
        {
            const double rbar = bits_to_nats(*opts.qos_ul_bps);
            double s = min_over(inst, e.point, false, true, rbar);
            double prev = s;
            while (s < 0.0 && iter < opts.max_iters)
            {
                IterationRecord rec;
                rec.iter = iter++;
                StepResult r = step(inst, e, opts, Objective::qos_find, true, rec);
                if (!r.accepted)
                {
                    failure = std::string("UL-target search subproblem ") + conic::to_string(rec.status);
                    break;
                }
                rep.trace.push_back(rec);
                s = r.objective;
                r.point.eta = min_over(inst, r.point, true, false, 0.0);
                e = make_expansion(inst, r.point, opts.surrogate);
                if (s < 0.0 && std::abs(s - prev) <= opts.rel_tol * std::max(1.0, std::abs(prev)))
                    break;
                prev = s;
            }
            if (s < 0.0)
            {
                rep.qos_feasible = false;
                rep.message = failure.empty() ? "UL secrecy target not reachable" : failure;
                rep.design = e.point;
                finish_report(inst, opts, rep);
                rep.qos_feasible = false;
                rep.ok = false;
                rep.total_ms = opts.record_timing ? elapsed_ms(t0) : 0.0;
                return rep;
            }
            e.point.eta = min_over(inst, e.point, true, false, 0.0);
            obj = Objective::qos_dl;
        }

        double eta_prev = e.point.eta;
        DesignPoint best = e.point;
        int main_iters = 0;
        while (main_iters < opts.max_iters)
        {
            IterationRecord rec;
            rec.iter = iter++;
            ++main_iters;
            StepResult r = step(inst, e, opts, obj, true, rec);
            rep.min_omega_eig = std::min(rep.min_omega_eig, [&]
                                         {
                                             double v = 0.0;
                                             for (const auto &g : e.groups)
                                                 v = std::min(v, g.min_omega_eig);
                                             return v; }());
            if (!r.accepted)
            {
                rec.eta = eta_prev;
                rep.trace.push_back(rec);
                failure = std::string("subproblem ") + conic::to_string(rec.status) + " at iteration " +
                          std::to_string(rec.iter);
                break;
            }
            rep.trace.push_back(rec);
            r.point.eta = r.objective;
            best = r.point;
            e = make_expansion(inst, r.point, opts.surrogate);
            const bool done = std::abs(r.objective - eta_prev) <= opts.rel_tol * std::max(1.0, std::abs(eta_prev));
            eta_prev = r.objective;
            if (done)
            {
                rep.converged = true;
                break;
            }
        }

        rep.design = best;
        finish_report(inst, opts, rep);
        rep.ok = rep.feasibility.ok && (!opts.qos_ul_bps || rep.qos_feasible);
        if (!failure.empty())
            rep.message = failure;
        else if (!rep.converged)
            rep.message = "iteration limit reached";
        else
            rep.message = "converged";
        rep.total_ms = opts.record_timing ? elapsed_ms(t0) : 0.0;
        return rep;
    }

} // namespace fdsec
