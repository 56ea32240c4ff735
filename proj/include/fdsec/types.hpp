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

#ifndef FDSEC_TYPES_HPP
#define FDSEC_TYPES_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fdsec
{
    using cplx = std::complex<double>;
    using Vec = Eigen::VectorXd;
    using Mat = Eigen::MatrixXd;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;

    /// Raised for arguments outside an operation's mathematical domain.
    class domain_error : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    /// Raised when an expansion point cannot host the convex surrogates.
    class invalid_expansion : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Raised when a design or configuration breaks a stated invariant.
    class invariant_violation : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };

    inline constexpr double ln2 = 0.69314718055994530942;

    inline double nats_to_bits(double nats) { return nats / ln2; }
    inline double bits_to_nats(double bits) { return bits * ln2; }
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace fdsec

#endif
