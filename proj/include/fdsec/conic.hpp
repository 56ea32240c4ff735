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
// Real-valued conic programs with linear, second-order and rotated
// second-order cone blocks, plus the complex-to-real embedding used to
// express beamformer quadratics in them.

#ifndef FDSEC_CONIC_HPP
#define FDSEC_CONIC_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fdsec/types.hpp"

namespace fdsec::conic
{
    /// Affine function  sum_j coef_j * x[var_j] + constant.
    class AffineExpr
    {
    public:
        struct Term
        {
            int var;
            double coef;
        };

        AffineExpr() = default;
        AffineExpr(double constant) : constant_(constant) {}

        static AffineExpr variable(int index, double coef = 1.0);

        const std::vector<Term> &terms() const { return terms_; }
        double constant() const { return constant_; }

        double evaluate(const Vec &x) const;
        /// Merges duplicate variables and drops exact zeros.
        AffineExpr compressed() const;

        AffineExpr &add_term(int var, double coef);
        AffineExpr &operator+=(const AffineExpr &o);
        AffineExpr &operator-=(const AffineExpr &o);
        AffineExpr &operator*=(double s);

        friend AffineExpr operator+(AffineExpr a, const AffineExpr &b) { return a += b; }
        friend AffineExpr operator-(AffineExpr a, const AffineExpr &b) { return a -= b; }
        friend AffineExpr operator*(AffineExpr a, double s) { return a *= s; }
        friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }
        friend AffineExpr operator-(AffineExpr a) { return a *= -1.0; }

    private:
        std::vector<Term> terms_;
        double constant_ = 0.0;
    };

    /// expr <= 0
    struct LinearLe
    {
        AffineExpr expr;
    };

    /// expr == 0
    struct Equality
    {
        AffineExpr expr;
    };

    /// ||u|| <= t
    struct Soc
    {
        std::vector<AffineExpr> u;
        AffineExpr t;
    };

    /// ||u||^2 <= y * z,  y >= 0,  z >= 0
    struct Rsoc
    {
        std::vector<AffineExpr> u;
        AffineExpr y;
        AffineExpr z;
    };

    using BlockBody = std::variant<LinearLe, Equality, Soc, Rsoc>;

    struct Block
    {
        BlockBody body;
        std::string label;
    };

    class ConicProgram
    {
    public:
        int add_variable(std::string name);
        /// Allocates `count` consecutive variables; returns the first index.
        int add_variables(const std::string &name, int count);

        int num_variables() const { return static_cast<int>(names_.size()); }
        const std::string &variable_name(int i) const { return names_.at(i); }

        /// The objective is maximized.
        void set_objective(AffineExpr objective) { objective_ = std::move(objective); }
        const AffineExpr &objective() const { return objective_; }

        void add_le(const AffineExpr &lhs, const AffineExpr &rhs, std::string label = {});
        void add_ge(const AffineExpr &lhs, const AffineExpr &rhs, std::string label = {});
        void add_eq(const AffineExpr &lhs, const AffineExpr &rhs, std::string label = {});
        void add_soc(std::vector<AffineExpr> u, AffineExpr t, std::string label = {});
        void add_rsoc(std::vector<AffineExpr> u, AffineExpr y, AffineExpr z, std::string label = {});

        const std::vector<Block> &blocks() const { return blocks_; }

        /// Returns a copy without block `index`.
        ConicProgram without_block(std::size_t index) const;

        /// Scaled violation of one block at x; zero when satisfied.
        double block_violation(std::size_t index, const Vec &x) const;
        /// Largest block_violation over all blocks.
        double max_violation(const Vec &x) const;

    private:
        std::vector<std::string> names_;
        AffineExpr objective_;
        std::vector<Block> blocks_;
    };

    /// One line per block, variables printed by name.
    std::string dump(const ConicProgram &p);

    enum class Status
    {
        optimal,
        infeasible,
        unbounded,
        numerical_limit
    };

    const char *to_string(Status s);

    struct Solution
    {
        Status status = Status::numerical_limit;
        Vec x;
        double objective = 0.0;
        double primal_residual = 0.0;
        double dual_residual = 0.0;
        double gap = 0.0;
        int iterations = 0;
    };

    struct SolverSettings
    {
        double tol = 1e-8;
        int max_iters = 120;
        bool verbose = false;
    };

    /// Primal-dual interior-point solve of a conic program.
    Solution solve(const ConicProgram &p, const SolverSettings &settings = {});
    inline Solution solve(const ConicProgram &p, double tol)
    {
        SolverSettings s;
        s.tol = tol;
        return solve(p, s);
    }

    // ---------------------------------------------------------------------
    // complex embedding

    /// Complex vector variable stored as separate real and imaginary runs.
    struct ComplexVar
    {
        int re = -1;
        int im = -1;
        int dim = 0;

        bool valid() const { return dim > 0; }
        /// Column `j` of a column-major rows x cols matrix variable.
        ComplexVar column(int j, int rows) const { return {re + j * rows, im + j * rows, rows}; }
    };

    ComplexVar add_complex(ConicProgram &p, const std::string &name, int dim);

    /// Re{a^H w}
    AffineExpr re_inner(const CVec &a, const ComplexVar &w);
    /// Im{a^H w}
    AffineExpr im_inner(const CVec &a, const ComplexVar &w);
    /// Real and imaginary parts of R w stacked, so ||R w||^2 is their squared norm.
    std::vector<AffineExpr> real_rows(const CMat &r, const ComplexVar &w);
    /// R with R^H R = Q for Hermitian positive semidefinite Q.
    CMat hermitian_factor(const CMat &q);

    CVec extract(const Vec &x, const ComplexVar &w);
    void embed(Vec &x, const ComplexVar &w, const CVec &value);

} // namespace fdsec::conic

#endif
