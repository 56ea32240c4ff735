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
// Homogeneous self-dual primal-dual interior-point method for
//
//     minimize c'x   s.t.  G x + s = h,  A x = b,  s in K
//
// where K is a product of a nonnegative orthant and second-order cones.
// Nesterov-Todd scaling, Mehrotra predictor-corrector, and the Newton
// systems are reduced to normal equations in x (plus the equality rows).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/Sparse>

#include "fdsec/conic.hpp"

namespace fdsec::conic
{
    namespace
    {
        using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
        using Triplet = Eigen::Triplet<double>;

        struct SocBlock
        {
            int offset = 0;
            int dim = 0;
            std::vector<int> cols; // columns of G touched by this block
        };

        struct StandardForm
        {
            int n = 0;
            int p = 0;
            int l = 0; // orthant rows come first
            int m = 0;
            std::vector<SocBlock> socs;
            std::vector<Triplet> g_trip;
            std::vector<Triplet> a_trip;
            Vec h, b, c;
            double objective_offset = 0.0;
        };

        void push_row(std::vector<Triplet> &trip, int row, const AffineExpr &e, double sign)
        {
            for (const auto &t : e.terms())
                trip.emplace_back(row, t.var, sign * t.coef);
        }

        // Converts the block list to  G x + s = h,  A x = b.
        StandardForm to_standard_form(const ConicProgram &prog)
        {
            StandardForm f;
            f.n = prog.num_variables();
            std::vector<double> h, b;

            int row = 0;
            for (const auto &blk : prog.blocks())
            {
                if (const auto *lin = std::get_if<LinearLe>(&blk.body))
                {
                    // a'x + e <= 0  ->  a'x + s = -e
                    push_row(f.g_trip, row++, lin->expr, 1.0);
                    h.push_back(-lin->expr.constant());
                }
            }
            f.l = row;

            int eq_row = 0;
            for (const auto &blk : prog.blocks())
            {
                if (const auto *eq = std::get_if<Equality>(&blk.body))
                {
                    push_row(f.a_trip, eq_row++, eq->expr, 1.0);
                    b.push_back(-eq->expr.constant());
                }
                else if (const auto *soc = std::get_if<Soc>(&blk.body))
                {
                    // s = (t, u) = h - G x
                    SocBlock sb;
                    sb.offset = row;
                    sb.dim = 1 + static_cast<int>(soc->u.size());
                    push_row(f.g_trip, row++, soc->t, -1.0);
                    h.push_back(soc->t.constant());
                    for (const auto &u : soc->u)
                    {
                        push_row(f.g_trip, row++, u, -1.0);
                        h.push_back(u.constant());
                    }
                    f.socs.push_back(sb);
                }
                else if (const auto *rs = std::get_if<Rsoc>(&blk.body))
                {
                    // ||u||^2 <= y z  <=>  ||(y - z, 2u)|| <= y + z
                    SocBlock sb;
                    sb.offset = row;
                    sb.dim = 2 + static_cast<int>(rs->u.size());
                    const AffineExpr sum = rs->y + rs->z;
                    const AffineExpr diff = rs->y - rs->z;
                    push_row(f.g_trip, row++, sum, -1.0);
                    h.push_back(sum.constant());
                    push_row(f.g_trip, row++, diff, -1.0);
                    h.push_back(diff.constant());
                    for (const auto &u : rs->u)
                    {
                        push_row(f.g_trip, row++, u, -2.0);
                        h.push_back(2.0 * u.constant());
                    }
                    f.socs.push_back(sb);
                }
            }
            f.m = row;
            f.p = eq_row;
            f.h = Eigen::Map<Vec>(h.data(), static_cast<Eigen::Index>(h.size()));
            f.b = Eigen::Map<Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
            f.c = Vec::Zero(f.n);
            for (const auto &t : prog.objective().terms())
                f.c[t.var] -= t.coef; // maximize -> minimize
            f.objective_offset = prog.objective().constant();
            return f;
        }

        // NT scaling of one second-order cone block.
        struct SocScaling
        {
            double eta = 1.0;
            double w0 = 1.0;
            Vec w1;
        };

        class Cone
        {
        public:
            Cone(int l, std::vector<SocBlock> socs, int m) : l_(l), socs_(std::move(socs)), m_(m)
            {
                soc_scale_.resize(socs_.size());
            }

            int degree() const { return l_ + static_cast<int>(socs_.size()); }
            int size() const { return m_; }
            const std::vector<SocBlock> &socs() const { return socs_; }
            int orthant() const { return l_; }

            Vec identity() const
            {
                Vec e = Vec::Zero(m_);
                e.head(l_).setOnes();
                for (const auto &b : socs_)
                    e[b.offset] = 1.0;
                return e;
            }

            // Smallest "eigenvalue" of x with respect to the cone.
            double min_eig(const Vec &x) const
            {
                double v = std::numeric_limits<double>::infinity();
                if (l_ > 0)
                    v = x.head(l_).minCoeff();
                for (const auto &b : socs_)
                {
                    const double nrm = x.segment(b.offset + 1, b.dim - 1).norm();
                    v = std::min(v, x[b.offset] - nrm);
                }
                return v;
            }

            void shift_inside(Vec &x) const
            {
                const double alpha = -min_eig(x);
                if (alpha >= 0.0)
                    x += (1.0 + alpha) * identity();
            }

            // Computes W and lambda = W z = W^{-T} s.  Returns false if s or z left the cone.
            bool update_scaling(const Vec &s, const Vec &z)
            {
                w_orth_.resize(l_);
                lambda_.resize(m_);
                for (int i = 0; i < l_; ++i)
                {
                    if (s[i] <= 0.0 || z[i] <= 0.0)
                        return false;
                    w_orth_[i] = std::sqrt(s[i] / z[i]);
                    lambda_[i] = std::sqrt(s[i] * z[i]);
                }
                for (std::size_t k = 0; k < socs_.size(); ++k)
                {
                    const auto &b = socs_[k];
                    const int d = b.dim;
                    const double s0 = s[b.offset];
                    const double z0 = z[b.offset];
                    const auto s1 = s.segment(b.offset + 1, d - 1);
                    const auto z1 = z.segment(b.offset + 1, d - 1);
                    const double sres = s0 * s0 - s1.squaredNorm();
                    const double zres = z0 * z0 - z1.squaredNorm();
                    if (s0 <= 0.0 || z0 <= 0.0 || sres <= 0.0 || zres <= 0.0)
                        return false;
                    const double snorm = std::sqrt(sres);
                    const double znorm = std::sqrt(zres);
                    const double sbar0 = s0 / snorm;
                    const double zbar0 = z0 / znorm;
                    const Vec sbar1 = s1 / snorm;
                    const Vec zbar1 = z1 / znorm;
                    const double dot = sbar0 * zbar0 + sbar1.dot(zbar1);
                    const double gamma = std::sqrt(0.5 * (1.0 + dot));
                    auto &sc = soc_scale_[k];
                    sc.w0 = (sbar0 + zbar0) / (2.0 * gamma);
                    sc.w1 = (sbar1 - zbar1) / (2.0 * gamma);
                    sc.eta = std::sqrt(snorm / znorm);
                    lambda_.segment(b.offset, d) = apply_w_block(k, z.segment(b.offset, d));
                }
                return true;
            }

            const Vec &lambda() const { return lambda_; }

            Vec apply_w(const Vec &v) const
            {
                Vec out(m_);
                out.head(l_) = w_orth_.cwiseProduct(v.head(l_));
                for (std::size_t k = 0; k < socs_.size(); ++k)
                    out.segment(socs_[k].offset, socs_[k].dim) = apply_w_block(k, v.segment(socs_[k].offset, socs_[k].dim));
                return out;
            }

            Vec apply_winv(const Vec &v) const
            {
                Vec out(m_);
                out.head(l_) = v.head(l_).cwiseQuotient(w_orth_);
                for (std::size_t k = 0; k < socs_.size(); ++k)
                    out.segment(socs_[k].offset, socs_[k].dim) = apply_winv_block(k, v.segment(socs_[k].offset, socs_[k].dim));
                return out;
            }

            /// W^{-1} applied to a dense block of rows (columns of M are independent vectors).
            Mat apply_winv_block_mat(std::size_t k, const Mat &g) const
            {
                const auto &sc = soc_scale_[k];
                const int d = socs_[k].dim;
                Mat out(d, g.cols());
                const double inv_eta = 1.0 / sc.eta;
                // rows: [w0 g0 - w1'g1 ; g1 + (-g0 + w1'g1/(1+w0)) w1]
                const Eigen::RowVectorXd w1g1 = sc.w1.transpose() * g.bottomRows(d - 1);
                out.row(0) = inv_eta * (sc.w0 * g.row(0) - w1g1);
                const Eigen::RowVectorXd coef = -g.row(0) + w1g1 / (1.0 + sc.w0);
                out.bottomRows(d - 1) = inv_eta * (g.bottomRows(d - 1) + sc.w1 * coef);
                return out;
            }

            double orth_weight(int i) const { return w_orth_[i]; }

            // Jordan product u o v
            Vec circ(const Vec &u, const Vec &v) const
            {
                Vec out(m_);
                out.head(l_) = u.head(l_).cwiseProduct(v.head(l_));
                for (const auto &b : socs_)
                {
                    const int d = b.dim;
                    const double u0 = u[b.offset];
                    const double v0 = v[b.offset];
                    out[b.offset] = u.segment(b.offset, d).dot(v.segment(b.offset, d));
                    out.segment(b.offset + 1, d - 1) =
                        u0 * v.segment(b.offset + 1, d - 1) + v0 * u.segment(b.offset + 1, d - 1);
                }
                return out;
            }

            // Solves lambda o x = v for x.
            Vec lambda_div(const Vec &v) const
            {
                Vec out(m_);
                out.head(l_) = v.head(l_).cwiseQuotient(lambda_.head(l_));
                for (const auto &b : socs_)
                {
                    const int d = b.dim;
                    const double l0 = lambda_[b.offset];
                    const auto l1 = lambda_.segment(b.offset + 1, d - 1);
                    const double v0 = v[b.offset];
                    const auto v1 = v.segment(b.offset + 1, d - 1);
                    const double det = l0 * l0 - l1.squaredNorm();
                    const double x0 = (l0 * v0 - l1.dot(v1)) / det;
                    out[b.offset] = x0;
                    out.segment(b.offset + 1, d - 1) = (v1 - x0 * l1) / l0;
                }
                return out;
            }

            // Largest step t in [0, inf) with lambda + t * d inside the cone.
            double max_step(const Vec &d) const
            {
                double alpha = std::numeric_limits<double>::infinity();
                for (int i = 0; i < l_; ++i)
                    if (d[i] < 0.0)
                        alpha = std::min(alpha, -lambda_[i] / d[i]);
                for (const auto &b : socs_)
                {
                    const int dim = b.dim;
                    const double l0 = lambda_[b.offset];
                    const auto l1 = lambda_.segment(b.offset + 1, dim - 1);
                    const double lnorm = std::sqrt(std::max(l0 * l0 - l1.squaredNorm(), 1e-300));
                    const double lb0 = l0 / lnorm;
                    const Vec lb1 = l1 / lnorm;
                    const double d0 = d[b.offset];
                    const auto d1 = d.segment(b.offset + 1, dim - 1);
                    const double lbd = lb0 * d0 - lb1.dot(d1);
                    const double rho0 = lbd / lnorm;
                    const double factor = (lbd + d0) / (lb0 + 1.0);
                    const double rho1 = ((d1 - factor * lb1) / lnorm).norm();
                    const double sigma = rho1 - rho0;
                    if (sigma > 0.0)
                        alpha = std::min(alpha, 1.0 / sigma);
                }
                return alpha;
            }

        private:
            Vec apply_w_block(std::size_t k, const Eigen::Ref<const Vec> &v) const
            {
                const auto &sc = soc_scale_[k];
                const int d = static_cast<int>(v.size());
                Vec out(d);
                const double w1v1 = sc.w1.dot(v.tail(d - 1));
                out[0] = sc.eta * (sc.w0 * v[0] + w1v1);
                out.tail(d - 1) = sc.eta * (v.tail(d - 1) + (v[0] + w1v1 / (1.0 + sc.w0)) * sc.w1);
                return out;
            }

            Vec apply_winv_block(std::size_t k, const Eigen::Ref<const Vec> &v) const
            {
                const auto &sc = soc_scale_[k];
                const int d = static_cast<int>(v.size());
                Vec out(d);
                const double w1v1 = sc.w1.dot(v.tail(d - 1));
                out[0] = (sc.w0 * v[0] - w1v1) / sc.eta;
                out.tail(d - 1) = (v.tail(d - 1) + (-v[0] + w1v1 / (1.0 + sc.w0)) * sc.w1) / sc.eta;
                return out;
            }

            int l_;
            std::vector<SocBlock> socs_;
            int m_;
            Vec w_orth_;
            Vec lambda_;
            std::vector<SocScaling> soc_scale_;
        };

        // Newton system  [0 A' G'; A 0 0; G 0 -W^2]  solved through the normal equations.
        class KktSolver
        {
        public:
            KktSolver(const SpMat &g, const SpMat &a, const std::vector<SocBlock> &socs, int l)
                : g_(g), a_(a), gt_(g.transpose()), at_(a.transpose()), socs_(socs), l_(l)
            {
                n_ = static_cast<int>(g.cols());
                p_ = static_cast<int>(a.rows());
                dense_blocks_.resize(socs_.size());
                for (std::size_t k = 0; k < socs_.size(); ++k)
                {
                    const auto &b = socs_[k];
                    Mat blk = Mat::Zero(b.dim, static_cast<Eigen::Index>(b.cols.size()));
                    std::vector<int> pos(n_, -1);
                    for (std::size_t j = 0; j < b.cols.size(); ++j)
                        pos[b.cols[j]] = static_cast<int>(j);
                    for (int r = 0; r < b.dim; ++r)
                        for (SpMat::InnerIterator it(g_, b.offset + r); it; ++it)
                            blk(r, pos[it.col()]) = it.value();
                    dense_blocks_[k] = std::move(blk);
                }
            }

            // Factors for the current scaling; returns false on breakdown.
            bool factor(const Cone &cone, bool identity_scaling)
            {
                cone_ = &cone;
                identity_ = identity_scaling;
                Mat h = Mat::Zero(n_, n_);
                for (int i = 0; i < l_; ++i)
                {
                    const double wt = identity_ ? 1.0 : 1.0 / std::pow(cone.orth_weight(i), 2);
                    for (SpMat::InnerIterator a(g_, i); a; ++a)
                        for (SpMat::InnerIterator bb(g_, i); bb; ++bb)
                            h(a.col(), bb.col()) += wt * a.value() * bb.value();
                }
                for (std::size_t k = 0; k < socs_.size(); ++k)
                {
                    const Mat mk = identity_ ? dense_blocks_[k] : cone.apply_winv_block_mat(k, dense_blocks_[k]);
                    const Mat hk = mk.transpose() * mk;
                    const auto &cols = socs_[k].cols;
                    for (std::size_t a = 0; a < cols.size(); ++a)
                        for (std::size_t bb = 0; bb < cols.size(); ++bb)
                            h(cols[a], cols[bb]) += hk(a, bb);
                }
                const double reg = 1e-13 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
                if (p_ == 0)
                {
                    h.diagonal().array() += reg;
                    llt_.compute(h);
                    use_llt_ = llt_.info() == Eigen::Success;
                    if (use_llt_)
                        return true;
                }
                Mat k = Mat::Zero(n_ + p_, n_ + p_);
                k.topLeftCorner(n_, n_) = h;
                k.topLeftCorner(n_, n_).diagonal().array() += reg;
                if (p_ > 0)
                {
                    const Mat ad = Mat(a_);
                    k.topRightCorner(n_, p_) = ad.transpose();
                    k.bottomLeftCorner(p_, n_) = ad;
                    k.bottomRightCorner(p_, p_).diagonal().setConstant(-reg);
                }
                lu_.compute(k);
                use_llt_ = false;
                return std::isfinite(lu_.determinant()) || true;
            }

            // Solves K [x; y; z] = [rx; ry; rz] with iterative refinement.
            void solve(const Vec &rx, const Vec &ry, const Vec &rz, Vec &x, Vec &y, Vec &z) const
            {
                solve_reduced(rx, ry, rz, x, y, z);
                double prev = std::numeric_limits<double>::infinity();
                for (int it = 0; it < 8; ++it)
                {
                    const Vec ex = rx - (at_ * y + gt_ * z);
                    const Vec ey = ry - a_ * x;
                    const Vec ez = rz - (g_ * x - apply_w2(z));
                    const double err = std::max({ex.lpNorm<Eigen::Infinity>(), p_ ? ey.lpNorm<Eigen::Infinity>() : 0.0,
                                                 ez.lpNorm<Eigen::Infinity>()});
                    // stop once refinement no longer pays off
                    if (err < 1e-14 || err > 0.5 * prev)
                        break;
                    prev = err;
                    Vec dx, dy, dz;
                    solve_reduced(ex, ey, ez, dx, dy, dz);
                    x += dx;
                    y += dy;
                    z += dz;
                }
            }

        private:
            Vec apply_w2(const Vec &v) const
            {
                if (identity_)
                    return v;
                return cone_->apply_w(cone_->apply_w(v));
            }

            Vec apply_winv2(const Vec &v) const
            {
                if (identity_)
                    return v;
                return cone_->apply_winv(cone_->apply_winv(v));
            }

            void solve_reduced(const Vec &rx, const Vec &ry, const Vec &rz, Vec &x, Vec &y, Vec &z) const
            {
                // z = W^{-2}(G x - rz);  (G' W^{-2} G) x + A' y = rx + G' W^{-2} rz;  A x = ry
                const Vec top = rx + gt_ * apply_winv2(rz);
                if (use_llt_)
                {
                    x = llt_.solve(top);
                    y = Vec::Zero(p_);
                }
                else
                {
                    Vec rhs(n_ + p_);
                    rhs.head(n_) = top;
                    rhs.tail(p_) = ry;
                    const Vec sol = lu_.solve(rhs);
                    x = sol.head(n_);
                    y = sol.tail(p_);
                }
                z = apply_winv2(g_ * x - rz);
            }

            const SpMat &g_;
            const SpMat &a_;
            SpMat gt_;
            SpMat at_;
            const std::vector<SocBlock> &socs_;
            int l_;
            int n_ = 0;
            int p_ = 0;
            std::vector<Mat> dense_blocks_;
            const Cone *cone_ = nullptr;
            bool identity_ = false;
            bool use_llt_ = false;
            Eigen::LLT<Mat> llt_;
            Eigen::PartialPivLU<Mat> lu_;
        };

        SpMat build_sparse(int rows, int cols, const std::vector<Triplet> &trip)
        {
            SpMat m(rows, cols);
            m.setFromTriplets(trip.begin(), trip.end());
            m.makeCompressed();
            return m;
        }

        // Ruiz-style equilibration; SOC blocks share a single row scale.
        void equilibrate(StandardForm &f, Vec &col_scale, Vec &row_scale, Vec &eq_scale)
        {
            col_scale = Vec::Ones(f.n);
            row_scale = Vec::Ones(f.m);
            eq_scale = Vec::Ones(f.p);
            std::vector<int> soc_of_row(f.m, -1);
            for (std::size_t k = 0; k < f.socs.size(); ++k)
                for (int r = 0; r < f.socs[k].dim; ++r)
                    soc_of_row[f.socs[k].offset + r] = static_cast<int>(k);

            for (int pass = 0; pass < 10; ++pass)
            {
                Vec col_max = Vec::Zero(f.n);
                Vec row_max = Vec::Zero(f.m);
                Vec eq_max = Vec::Zero(f.p);
                for (const auto &t : f.g_trip)
                {
                    const double v = std::abs(t.value());
                    col_max[t.col()] = std::max(col_max[t.col()], v);
                    row_max[t.row()] = std::max(row_max[t.row()], v);
                }
                for (const auto &t : f.a_trip)
                {
                    const double v = std::abs(t.value());
                    col_max[t.col()] = std::max(col_max[t.col()], v);
                    eq_max[t.row()] = std::max(eq_max[t.row()], v);
                }
                std::vector<double> soc_max(f.socs.size(), 0.0);
                for (int r = f.l; r < f.m; ++r)
                    soc_max[soc_of_row[r]] = std::max(soc_max[soc_of_row[r]], row_max[r]);
                Vec dc(f.n), dr(f.m), de(f.p);
                for (int j = 0; j < f.n; ++j)
                    dc[j] = col_max[j] > 0.0 ? 1.0 / std::sqrt(col_max[j]) : 1.0;
                for (int r = 0; r < f.m; ++r)
                {
                    const double v = r < f.l ? row_max[r] : soc_max[soc_of_row[r]];
                    dr[r] = v > 0.0 ? 1.0 / std::sqrt(v) : 1.0;
                }
                for (int r = 0; r < f.p; ++r)
                    de[r] = eq_max[r] > 0.0 ? 1.0 / std::sqrt(eq_max[r]) : 1.0;
                for (auto &t : f.g_trip)
                    t = Triplet(t.row(), t.col(), t.value() * dr[t.row()] * dc[t.col()]);
                for (auto &t : f.a_trip)
                    t = Triplet(t.row(), t.col(), t.value() * de[t.row()] * dc[t.col()]);
                col_scale = col_scale.cwiseProduct(dc);
                row_scale = row_scale.cwiseProduct(dr);
                eq_scale = eq_scale.cwiseProduct(de);
            }
            f.h = f.h.cwiseProduct(row_scale);
            f.b = f.b.cwiseProduct(eq_scale);
            f.c = f.c.cwiseProduct(col_scale);
        }

        struct Residuals
        {
            double pres = 0.0;
            double dres = 0.0;
            double pcost = 0.0;
            double dcost = 0.0;
            double gap = 0.0;
            double relgap = std::numeric_limits<double>::infinity();
            bool primal_infeasible = false;
            bool dual_infeasible = false;
            double pinf = std::numeric_limits<double>::infinity();
            double dinf = std::numeric_limits<double>::infinity();
        };

        // Residuals on the original (unscaled) data.
        Residuals measure(const SpMat &g, const SpMat &a, const Vec &h, const Vec &b, const Vec &c, const Vec &x,
                          const Vec &y, const Vec &z, const Vec &s, double tau, double kappa)
        {
            Residuals r;
            const Vec gx = g * x;
            const Vec ax = a * x;
            const Vec aty = a.transpose() * y;
            const Vec gtz = g.transpose() * z;
            const double hnorm = std::max({1.0, h.norm(), b.size() ? b.norm() : 0.0});
            // dual residual relative to the size of its terms, so that large
            // multipliers do not put a rounding floor under it
            const Vec mag = a.cwiseAbs().transpose() * y.cwiseAbs() + g.cwiseAbs().transpose() * z.cwiseAbs();
            const double cnorm = std::max({1.0, c.norm(), mag.norm() / tau});
            const double rp = std::sqrt((ax - tau * b).squaredNorm() + (gx + s - tau * h).squaredNorm());
            const double rd = (aty + gtz + tau * c).norm();
            r.pres = rp / tau / hnorm;
            r.dres = rd / tau / cnorm;
            const double cx = c.dot(x);
            const double by_hz = b.dot(y) + h.dot(z);
            r.pcost = cx / tau;
            r.dcost = -by_hz / tau;
            r.gap = s.dot(z) / (tau * tau);
            if (r.pcost < 0.0)
                r.relgap = r.gap / -r.pcost;
            else if (r.dcost > 0.0)
                r.relgap = r.gap / r.dcost;
            if (by_hz < 0.0)
                r.pinf = (aty + gtz).norm() / std::max(1.0, c.norm()) / -by_hz;
            if (cx < 0.0)
                r.dinf = std::sqrt(ax.squaredNorm() + (gx + s).squaredNorm()) / hnorm / -cx;
            (void)kappa;
            return r;
        }

    } // namespace

    Solution solve(const ConicProgram &prog, const SolverSettings &settings)
    {
        StandardForm form = to_standard_form(prog);
        const int n = form.n;
        const int p = form.p;
        const int m = form.m;

        const SpMat g_orig = build_sparse(m, n, form.g_trip);
        const SpMat a_orig = build_sparse(p, n, form.a_trip);
        const Vec h_orig = form.h;
        const Vec b_orig = form.b;
        const Vec c_orig = form.c;

        Vec dcol, drow, deq;
        equilibrate(form, dcol, drow, deq);
        const SpMat g = build_sparse(m, n, form.g_trip);
        const SpMat a = build_sparse(p, n, form.a_trip);
        const Vec &h = form.h;
        const Vec &b = form.b;
        const Vec &c = form.c;

        for (auto &blk : form.socs)
        {
            std::vector<char> seen(n, 0);
            for (int r = 0; r < blk.dim; ++r)
                for (SpMat::InnerIterator it(g, blk.offset + r); it; ++it)
                    if (!seen[it.col()])
                    {
                        seen[it.col()] = 1;
                        blk.cols.push_back(static_cast<int>(it.col()));
                    }
            std::sort(blk.cols.begin(), blk.cols.end());
        }

        Cone cone(form.l, form.socs, m);
        KktSolver kkt(g, a, form.socs, form.l);

        Solution sol;
        auto unscale = [&](const Vec &xs, const Vec &ys, const Vec &zs, const Vec &ss, Vec &xu, Vec &yu, Vec &zu,
                           Vec &su)
        {
            xu = xs.cwiseProduct(dcol);
            yu = ys.cwiseProduct(deq);
            zu = zs.cwiseProduct(drow);
            su = ss.cwiseQuotient(drow);
        };

        if (m == 0)
        {
            // No cone rows: only equalities; bounded only if c lies in range(A').
            sol.status = c.norm() == 0.0 ? Status::optimal : Status::unbounded;
            sol.x = Vec::Zero(n);
            sol.objective = form.objective_offset;
            return sol;
        }

        // Initial point from the two least-squares solves with W = I.
        kkt.factor(cone, true);
        Vec x, y, z, s;
        {
            Vec zt;
            kkt.solve(Vec::Zero(n), b, h, x, y, zt);
            s = -zt;
            cone.shift_inside(s);
            Vec xd, yd;
            kkt.solve(-c, Vec::Zero(p), Vec::Zero(m), xd, y, z);
            cone.shift_inside(z);
        }
        double tau = 1.0;
        double kappa = 1.0;

        const double feastol = settings.tol;
        const double abstol = settings.tol;
        const double reltol = settings.tol;
        const int degree = cone.degree();

        struct Best
        {
            Vec x, y, z, s;
            double tau = 1.0, kappa = 1.0;
            double score = std::numeric_limits<double>::infinity();
            Residuals res;
            bool set = false;
        } best;

        auto finish = [&](Status st, const Vec &xs, const Vec &ys, const Vec &zs, const Vec &ss, double t, double k,
                          int iters)
        {
            Vec xu, yu, zu, su;
            unscale(xs, ys, zs, ss, xu, yu, zu, su);
            const Residuals r = measure(g_orig, a_orig, h_orig, b_orig, c_orig, xu, yu, zu, su, t, k);
            sol.status = st;
            sol.iterations = iters;
            if (st == Status::infeasible || st == Status::unbounded)
            {
                sol.x = xu;
                if (st == Status::unbounded && c_orig.dot(xu) < 0.0)
                    sol.x /= -c_orig.dot(xu);
                sol.objective = st == Status::infeasible ? -std::numeric_limits<double>::infinity()
                                                         : std::numeric_limits<double>::infinity();
                sol.primal_residual = r.pres;
                sol.dual_residual = r.dres;
                return sol;
            }
            sol.x = xu / t;
            sol.objective = -r.pcost + form.objective_offset;
            sol.primal_residual = r.pres;
            sol.dual_residual = r.dres;
            sol.gap = std::min(r.gap, std::isfinite(r.relgap) ? r.relgap : r.gap);
            return sol;
        };

        int last_iter = 0;
        for (int iter = 0; iter <= settings.max_iters; ++iter)
        {
            last_iter = iter;
            Vec xu, yu, zu, su;
            unscale(x, y, z, s, xu, yu, zu, su);
            const Residuals res = measure(g_orig, a_orig, h_orig, b_orig, c_orig, xu, yu, zu, su, tau, kappa);

            if (settings.verbose)
                std::fprintf(stderr, "%3d pcost %+.8e dcost %+.8e gap %.2e pres %.2e dres %.2e k/t %.2e\n", iter,
                             res.pcost, res.dcost, res.gap, res.pres, res.dres, kappa / tau);

            const double score = std::max({res.pres, res.dres, std::min(res.gap, res.relgap)});
            if (score < best.score && kappa / tau < 1.0)
            {
                best = {x, y, z, s, tau, kappa, score, res, true};
            }

            if (res.pres < feastol && res.dres < feastol && (res.gap < abstol || res.relgap < reltol))
                return finish(Status::optimal, x, y, z, s, tau, kappa, iter);
            if (res.pinf < feastol && kappa > tau)
                return finish(Status::infeasible, x, y, z, s, tau, kappa, iter);
            if (res.dinf < feastol && kappa > tau)
                return finish(Status::unbounded, x, y, z, s, tau, kappa, iter);
            if (iter == settings.max_iters)
                break;

            if (!cone.update_scaling(s, z))
                break;
            if (!kkt.factor(cone, false))
                break;

            // residuals of the homogeneous system (scaled data)
            const Vec r1 = a.transpose() * y + g.transpose() * z + c * tau;
            const Vec r2 = -(a * x) + b * tau;
            const Vec r3 = -(g * x) + h * tau - s;
            const double r4 = -c.dot(x) - b.dot(y) - h.dot(z) - kappa;
            const double mu = (s.dot(z) + tau * kappa) / (degree + 1);

            Vec x1, y1, z1;
            kkt.solve(-c, b, h, x1, y1, z1);
            const double denom = kappa / tau - c.dot(x1) - b.dot(y1) - h.dot(z1);

            const Vec &lam = cone.lambda();
            auto direction = [&](double sigma, const Vec &ds_target, double dk_target, Vec &dx, Vec &dy, Vec &dz,
                                 Vec &ds, double &dtau, double &dkap)
            {
                const double f = 1.0 - sigma;
                const Vec d1 = -f * r1;
                const Vec d2 = -f * r2;
                const Vec d3 = -f * r3;
                const double d4 = -f * r4;
                const Vec ldiv = cone.lambda_div(ds_target);
                Vec x2, y2, z2;
                kkt.solve(d1, -d2, -d3 - cone.apply_w(ldiv), x2, y2, z2);
                dtau = (d4 + dk_target / tau + c.dot(x2) + b.dot(y2) + h.dot(z2)) / denom;
                dx = x2 + dtau * x1;
                dy = y2 + dtau * y1;
                dz = z2 + dtau * z1;
                ds = cone.apply_w(ldiv - cone.apply_w(dz));
                dkap = (dk_target - kappa * dtau) / tau;
            };

            auto step_length = [&](const Vec &ds, const Vec &dz, double dtau, double dkap)
            {
                double alpha = std::min(cone.max_step(cone.apply_winv(ds)), cone.max_step(cone.apply_w(dz)));
                if (dtau < 0.0)
                    alpha = std::min(alpha, -tau / dtau);
                if (dkap < 0.0)
                    alpha = std::min(alpha, -kappa / dkap);
                return alpha;
            };

            // predictor
            Vec dxa, dya, dza, dsa;
            double dtaua, dkapa;
            direction(0.0, -cone.circ(lam, lam), -tau * kappa, dxa, dya, dza, dsa, dtaua, dkapa);
            const double alpha_aff = std::min(1.0, step_length(dsa, dza, dtaua, dkapa));
            double sigma = std::pow(1.0 - alpha_aff, 3);
            sigma = std::clamp(sigma, 1e-4, 1.0);

            // corrector
            const Vec corr = cone.circ(cone.apply_winv(dsa), cone.apply_w(dza));
            const Vec target = -cone.circ(lam, lam) - corr + sigma * mu * cone.identity();
            const double ktarget = -tau * kappa - dtaua * dkapa + sigma * mu;
            Vec dx, dy, dz, ds;
            double dtau, dkap;
            direction(sigma, target, ktarget, dx, dy, dz, ds, dtau, dkap);
            double alpha = step_length(ds, dz, dtau, dkap);
            alpha = std::min(1.0, 0.99 * alpha);
            if (!std::isfinite(alpha) || alpha < 1e-12 || !dx.allFinite())
                break;

            x += alpha * dx;
            y += alpha * dy;
            z += alpha * dz;
            s += alpha * ds;
            tau += alpha * dtau;
            kappa += alpha * dkap;
        }

        if (best.set)
            return finish(Status::numerical_limit, best.x, best.y, best.z, best.s, best.tau, best.kappa, last_iter);
        return finish(Status::numerical_limit, x, y, z, s, tau, kappa, last_iter);
    }

} // namespace fdsec::conic
