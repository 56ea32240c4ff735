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
// Path-following successive convex approximation for the max-min secrecy
// rate: every iteration solves one conic program built from the
// surrogates at the previous iterate.

#ifndef FDSEC_PATH_FOLLOWING_HPP
#define FDSEC_PATH_FOLLOWING_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdsec/conic.hpp"
#include "fdsec/instance.hpp"
#include "fdsec/outage.hpp"
#include "fdsec/rates.hpp"
#include "fdsec/surrogates.hpp"

namespace fdsec
{
    struct SolverOptions
    {
        int max_iters = 50;
        double rel_tol = 1e-4;
        /// Target of the Eve-free warm-up (nats).
        double eta_min = 0.05;
        int init_max_rounds = 20;
        SurrogateSettings surrogate;
        conic::SolverSettings conic;
        /// Minimum UL secrecy rate (bps/Hz); switches to the DL max-min variant.
        std::optional<double> qos_ul_bps;
        /// Monte Carlo draws for the final outage check; 0 skips it.
        long outage_samples = 10000;
        std::uint64_t outage_seed = 1;
        /// Accept numerical-limit subproblem solutions up to this violation.
        double accept_violation = 1e-6;
        bool record_timing = true;

        void validate() const;
    };

    struct IterationRecord
    {
        int iter = 0;
        double eta = 0.0;
        conic::Status status = conic::Status::optimal;
        /// Largest constraint violation of the subproblem solution.
        double violation = 0.0;
        /// Largest violation of the expansion point in its own subproblem.
        double self_violation = 0.0;
        /// Largest |surrogate - exact| at the expansion point.
        double tightness = 0.0;
        double ms = 0.0;
        int solver_iters = 0;
    };

    using IterationTrace = std::vector<IterationRecord>;

    /// Raised when no starting point reaching eta_min is found.
    class initialization_failure : public std::runtime_error
    {
    public:
        initialization_failure(const std::string &what, DesignPoint best)
            : std::runtime_error(what), best_point(std::move(best)) {}
        DesignPoint best_point;
    };

    /// Exact-constraint audit of a design.
    struct FeasibilityCheck
    {
        double bs_power = 0.0;
        double bs_power_rel_excess = 0.0; ///< max(0, power / budget - 1)
        double ul_power_rel_excess = 0.0;
        double min_rho = 0.0;
        double tau_sum = 0.0;
        double tau_slack = 0.0;            ///< 1 - tau_sum
        double min_alpha = 0.0;
        /// Smallest outage-constraint slack relative to its right-hand side.
        double min_lemma_rel_slack = 0.0;
        bool ok = false;
    };

    FeasibilityCheck check_feasibility(const Instance &inst, const DesignPoint &pt);

    struct RecoveredTimes
    {
        std::vector<double> tau;
        double tau_sum = 0.0;
        double slack = 0.0;
    };

    /// tau_i = 1 / alpha_i; throws invariant_violation if some alpha <= 1
    /// in a two-group time split.
    RecoveredTimes recover_solution(const Instance &inst, const DesignPoint &pt);

    struct SolveReport
    {
        bool ok = false;
        std::string message;
        DesignPoint design;
        IterationTrace trace;
        int init_rounds = 0;
        double init_eta = 0.0;
        bool converged = false;
        RateReport rates;             ///< Gamma caps standing in for Eve rates
        double maxmin_secrecy = 0.0;  ///< nats; DL users only in the QoS variant
        bool qos_feasible = true;
        FeasibilityCheck feasibility;
        std::optional<OutageReport> outage;
        double min_omega_eig = 0.0;
        double total_ms = 0.0;
    };

    /// Seed point used before the Eve-free warm-up.
    DesignPoint seed_point(const Instance &inst);

    /// Eve-free warm-up followed by setting beta and Gamma tight.
    ExpansionPoint initialize(const Instance &inst, const SolverOptions &opts, int *rounds = nullptr);

    enum class Objective
    {
        maxmin,   ///< maximize eta over every user
        qos_find, ///< maximize s with UL rows >= rbar + s
        qos_dl    ///< maximize eta over DL users with UL rows >= rbar
    };

    struct Subproblem
    {
        conic::ConicProgram program;
        Layout layout;
        int objective_var = -1;
    };

    Subproblem build_subproblem(const Instance &inst, const ExpansionPoint &e, const SolverOptions &opts,
                                Objective obj = Objective::maxmin, bool eves = true);

    SolveReport run(const Instance &inst, const SolverOptions &opts);

} // namespace fdsec

#endif
