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

#include "fdsec/conic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fdsec::conic
{
    AffineExpr AffineExpr::variable(int index, double coef)
    {
        AffineExpr e;
        e.terms_.push_back({index, coef});
        return e;
    }

    double AffineExpr::evaluate(const Vec &x) const
    {
        double v = constant_;
        for (const auto &t : terms_)
            v += t.coef * x[t.var];
        return v;
    }

    AffineExpr AffineExpr::compressed() const
    {
        std::map<int, double> acc;
        for (const auto &t : terms_)
            acc[t.var] += t.coef;
        AffineExpr out(constant_);
        for (const auto &[var, coef] : acc)
            if (coef != 0.0)
                out.terms_.push_back({var, coef});
        return out;
    }

    AffineExpr &AffineExpr::add_term(int var, double coef)
    {
        if (coef != 0.0)
            terms_.push_back({var, coef});
        return *this;
    }

    AffineExpr &AffineExpr::operator+=(const AffineExpr &o)
    {
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        constant_ += o.constant_;
        return *this;
    }

    AffineExpr &AffineExpr::operator-=(const AffineExpr &o)
    {
        for (const auto &t : o.terms_)
            terms_.push_back({t.var, -t.coef});
        constant_ -= o.constant_;
        return *this;
    }

    AffineExpr &AffineExpr::operator*=(double s)
    {
        for (auto &t : terms_)
            t.coef *= s;
        constant_ *= s;
        return *this;
    }

    int ConicProgram::add_variable(std::string name)
    {
        names_.push_back(std::move(name));
        return static_cast<int>(names_.size()) - 1;
    }

    int ConicProgram::add_variables(const std::string &name, int count)
    {
        const int first = num_variables();
        for (int i = 0; i < count; ++i)
            names_.push_back(name + "[" + std::to_string(i) + "]");
        return first;
    }

    void ConicProgram::add_le(const AffineExpr &lhs, const AffineExpr &rhs, std::string label)
    {
        blocks_.push_back({LinearLe{(lhs - rhs).compressed()}, std::move(label)});
    }

    void ConicProgram::add_ge(const AffineExpr &lhs, const AffineExpr &rhs, std::string label)
    {
        blocks_.push_back({LinearLe{(rhs - lhs).compressed()}, std::move(label)});
    }

    void ConicProgram::add_eq(const AffineExpr &lhs, const AffineExpr &rhs, std::string label)
    {
        blocks_.push_back({Equality{(lhs - rhs).compressed()}, std::move(label)});
    }

    void ConicProgram::add_soc(std::vector<AffineExpr> u, AffineExpr t, std::string label)
    {
        for (auto &e : u)
            e = e.compressed();
        blocks_.push_back({Soc{std::move(u), t.compressed()}, std::move(label)});
    }

    void ConicProgram::add_rsoc(std::vector<AffineExpr> u, AffineExpr y, AffineExpr z, std::string label)
    {
        for (auto &e : u)
            e = e.compressed();
        blocks_.push_back({Rsoc{std::move(u), y.compressed(), z.compressed()}, std::move(label)});
    }

    ConicProgram ConicProgram::without_block(std::size_t index) const
    {
        ConicProgram copy = *this;
        copy.blocks_.erase(copy.blocks_.begin() + static_cast<std::ptrdiff_t>(index));
        return copy;
    }

    namespace
    {
        double magnitude(const AffineExpr &e, const Vec &x)
        {
            double m = std::abs(e.constant());
            for (const auto &t : e.terms())
                m += std::abs(t.coef * x[t.var]);
            return m;
        }

        struct ViolationVisitor
        {
            const Vec &x;

            double operator()(const LinearLe &b) const
            {
                return std::max(0.0, b.expr.evaluate(x)) / std::max(1.0, magnitude(b.expr, x));
            }
            double operator()(const Equality &b) const
            {
                return std::abs(b.expr.evaluate(x)) / std::max(1.0, magnitude(b.expr, x));
            }
            double operator()(const Soc &b) const
            {
                double norm2 = 0.0;
                for (const auto &e : b.u)
                    norm2 += std::pow(e.evaluate(x), 2);
                const double norm = std::sqrt(norm2);
                const double t = b.t.evaluate(x);
                return std::max(0.0, norm - t) / std::max({1.0, norm, std::abs(t)});
            }
            double operator()(const Rsoc &b) const
            {
                const double y = b.y.evaluate(x);
                const double z = b.z.evaluate(x);
                double norm2 = std::pow(y - z, 2);
                for (const auto &e : b.u)
                    norm2 += 4.0 * std::pow(e.evaluate(x), 2);
                const double norm = std::sqrt(norm2);
                return std::max(0.0, norm - (y + z)) / std::max({1.0, norm, std::abs(y + z)});
            }
        };

        std::string format_expr(const AffineExpr &e, const ConicProgram &p)
        {
            std::ostringstream os;
            os.precision(12);
            bool first = true;
            for (const auto &t : e.terms())
            {
                if (!first)
                    os << (t.coef < 0 ? " - " : " + ");
                else if (t.coef < 0)
                    os << "-";
                os << std::abs(t.coef) << "*" << p.variable_name(t.var);
                first = false;
            }
            if (first)
                os << e.constant();
            else if (e.constant() != 0.0)
                os << (e.constant() < 0 ? " - " : " + ") << std::abs(e.constant());
            return os.str();
        }

        std::string format_list(const std::vector<AffineExpr> &u, const ConicProgram &p)
        {
            std::string s = "[";
            for (std::size_t i = 0; i < u.size(); ++i)
            {
                if (i)
                    s += "; ";
                s += format_expr(u[i], p);
            }
            return s + "]";
        }
    } // namespace

    double ConicProgram::block_violation(std::size_t index, const Vec &x) const
    {
        return std::visit(ViolationVisitor{x}, blocks_.at(index).body);
    }

    double ConicProgram::max_violation(const Vec &x) const
    {
        double v = 0.0;
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            v = std::max(v, block_violation(i, x));
        return v;
    }

    std::string dump(const ConicProgram &p)
    {
        std::ostringstream os;
        os << "variables " << p.num_variables() << "\n";
        os << "maximize " << format_expr(p.objective(), p) << "\n";
        for (const auto &b : p.blocks())
        {
            const std::string tag = b.label.empty() ? "" : " " + b.label;
            if (const auto *l = std::get_if<LinearLe>(&b.body))
                os << "linear" << tag << ": " << format_expr(l->expr, p) << " <= 0\n";
            else if (const auto *q = std::get_if<Equality>(&b.body))
                os << "equality" << tag << ": " << format_expr(q->expr, p) << " == 0\n";
            else if (const auto *s = std::get_if<Soc>(&b.body))
                os << "soc" << tag << ": norm" << format_list(s->u, p) << " <= " << format_expr(s->t, p) << "\n";
            else if (const auto *r = std::get_if<Rsoc>(&b.body))
                os << "rsoc" << tag << ": norm2" << format_list(r->u, p) << " <= (" << format_expr(r->y, p)
                   << ") * (" << format_expr(r->z, p) << ")\n";
        }
        return os.str();
    }

    const char *to_string(Status s)
    {
        switch (s)
        {
        case Status::optimal:
            return "optimal";
        case Status::infeasible:
            return "infeasible";
        case Status::unbounded:
            return "unbounded";
        case Status::numerical_limit:
            return "numerical-limit";
        }
        return "unknown";
    }

    ComplexVar add_complex(ConicProgram &p, const std::string &name, int dim)
    {
        ComplexVar v;
        v.dim = dim;
        v.re = p.add_variables(name + ".re", dim);
        v.im = p.add_variables(name + ".im", dim);
        return v;
    }

    AffineExpr re_inner(const CVec &a, const ComplexVar &w)
    {
        // Re{conj(a) w} = a_re w_re + a_im w_im
        AffineExpr e;
        for (int j = 0; j < w.dim; ++j)
        {
            e.add_term(w.re + j, a[j].real());
            e.add_term(w.im + j, a[j].imag());
        }
        return e;
    }

    AffineExpr im_inner(const CVec &a, const ComplexVar &w)
    {
        // Im{conj(a) w} = a_re w_im - a_im w_re
        AffineExpr e;
        for (int j = 0; j < w.dim; ++j)
        {
            e.add_term(w.im + j, a[j].real());
            e.add_term(w.re + j, -a[j].imag());
        }
        return e;
    }

    std::vector<AffineExpr> real_rows(const CMat &r, const ComplexVar &w)
    {
        if (r.cols() != w.dim)
            throw std::invalid_argument("real_rows: dimension mismatch");
        std::vector<AffineExpr> rows;
        rows.reserve(2 * r.rows());
        for (int i = 0; i < r.rows(); ++i)
        {
            // row i of R w = conj(conj(R_i))^T w, so reuse the inner-product rules
            const CVec a = r.row(i).adjoint();
            rows.push_back(re_inner(a, w));
        }
        for (int i = 0; i < r.rows(); ++i)
        {
            const CVec a = r.row(i).adjoint();
            rows.push_back(im_inner(a, w));
        }
        return rows;
    }

    CMat hermitian_factor(const CMat &q)
    {
        if (q.rows() != q.cols())
            throw domain_error("hermitian_factor: matrix is not square");
        const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
        if ((q - q.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw domain_error("hermitian_factor: matrix is not Hermitian");
        const CMat herm = 0.5 * (q + q.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> es(herm);
        Vec ev = es.eigenvalues();
        if (ev.minCoeff() < -1e-9 * scale)
            throw domain_error("hermitian_factor: matrix is not positive semidefinite");
        ev = ev.cwiseMax(0.0).cwiseSqrt();
        // Q = U diag(ev^2) U^H = (diag(ev) U^H)^H (diag(ev) U^H)
        return ev.asDiagonal() * es.eigenvectors().adjoint();
    }

    CVec extract(const Vec &x, const ComplexVar &w)
    {
        CVec v(w.dim);
        for (int j = 0; j < w.dim; ++j)
            v[j] = cplx(x[w.re + j], x[w.im + j]);
        return v;
    }

    void embed(Vec &x, const ComplexVar &w, const CVec &value)
    {
        for (int j = 0; j < w.dim; ++j)
        {
            x[w.re + j] = value[j].real();
            x[w.im + j] = value[j].imag();
        }
    }

} // namespace fdsec::conic
