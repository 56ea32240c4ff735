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

#include "fdsec/config.hpp"

#include <fstream>

namespace fdsec
{
    namespace
    {
        using nlohmann::json;

        void require(bool ok, const std::string &what)
        {
            if (!ok)
                throw invariant_violation("SystemConfig: " + what);
        }

        void resize_table(std::vector<std::vector<double>> &t, int per_group, double fallback)
        {
            const double first = (!t.empty() && !t.front().empty()) ? t.front().front() : fallback;
            t.resize(2);
            for (auto &row : t)
            {
                const double fill = row.empty() ? first : row.back();
                row.resize(per_group, fill);
            }
        }

        // Accepts a scalar, a flat list (one value per group) or a [group][user] table.
        std::vector<std::vector<double>> read_table(const json &v, int per_group, double (*conv)(double))
        {
            std::vector<std::vector<double>> t(2);
            if (v.is_number())
            {
                for (auto &row : t)
                    row.assign(per_group, conv(v.get<double>()));
                return t;
            }
            if (!v.is_array() || v.size() != 2)
                throw invariant_violation("SystemConfig: per-user tables need 2 groups");
            for (std::size_t i = 0; i < 2; ++i)
            {
                if (v[i].is_number())
                    t[i].assign(per_group, conv(v[i].get<double>()));
                else
                    for (const auto &e : v[i])
                        t[i].push_back(conv(e.get<double>()));
            }
            return t;
        }

        double identity(double x) { return x; }
    } // namespace

    void SystemConfig::validate() const
    {
        require(K >= 0 && L >= 0 && K + L >= 1, "need K >= 0, L >= 0, K + L >= 1");
        require(Nt >= 1 && Nr >= 1, "need Nt >= 1 and Nr >= 1");
        require(M >= 1, "need M >= 1");
        require(static_cast<int>(Ne.size()) == M, "Ne must list one antenna count per Eve");
        for (int ne : Ne)
            require(ne >= 1, "Eve antenna counts must be positive");
        require(sigma_si >= 0.0 && sigma_si < 1.0, "need 0 <= sigma_si < 1");
        require(P_bs_max > 0.0, "BS power budget must be positive");
        require(bandwidth_hz > 0.0, "bandwidth must be positive");
        require(inner_radius_m < cell_radius_m, "need inner_radius_m < cell_radius_m");
        require(min_bs_distance_m > 0.0 && min_bs_distance_m < inner_radius_m,
                "need 0 < min_bs_distance_m < inner_radius_m");
        require(P_ul_max.size() == 2 && epsilon_ul.size() == 2 && epsilon_dl.size() == 2,
                "per-user tables need two groups");
        for (int i = 0; i < 2; ++i)
        {
            require(static_cast<int>(P_ul_max[i].size()) == L, "P_ul_max needs L entries per group");
            require(static_cast<int>(epsilon_ul[i].size()) == L, "epsilon_ul needs L entries per group");
            require(static_cast<int>(epsilon_dl[i].size()) == K, "epsilon_dl needs K entries per group");
            for (double p : P_ul_max[i])
                require(p > 0.0, "UL power budgets must be positive");
            for (double e : epsilon_ul[i])
                require(e > 0.0 && e < 1.0, "outage levels must lie in (0,1)");
            for (double e : epsilon_dl[i])
                require(e > 0.0 && e < 1.0, "outage levels must lie in (0,1)");
        }
    }

    void SystemConfig::normalize_shapes()
    {
        resize_table(P_ul_max, L, dbm_to_watts(23.0));
        resize_table(epsilon_ul, L, 0.99);
        resize_table(epsilon_dl, K, 0.99);
        if (static_cast<int>(Ne.size()) != M)
        {
            const int fill = Ne.empty() ? 2 : Ne.back();
            Ne.resize(M, fill);
        }
    }

    void SystemConfig::set_uniform_ul_power(double watts)
    {
        for (auto &row : P_ul_max)
            for (auto &p : row)
                p = watts;
    }

    void SystemConfig::set_uniform_epsilon(double eps)
    {
        for (auto &row : epsilon_dl)
            for (auto &e : row)
                e = eps;
        for (auto &row : epsilon_ul)
            for (auto &e : row)
                e = eps;
    }

    SystemConfig default_config()
    {
        SystemConfig c;
        c.validate();
        return c;
    }

    SystemConfig config_from_json(const json &j)
    {
        SystemConfig c;
        if (j.contains("K"))
            c.K = j.at("K").get<int>();
        if (j.contains("L"))
            c.L = j.at("L").get<int>();
        if (j.contains("M"))
            c.M = j.at("M").get<int>();
        if (j.contains("Nt"))
            c.Nt = j.at("Nt").get<int>();
        if (j.contains("Nr"))
            c.Nr = j.at("Nr").get<int>();
        if (j.contains("Ne"))
        {
            if (j.at("Ne").is_number())
                c.Ne.assign(c.M, j.at("Ne").get<int>());
            else
                c.Ne = j.at("Ne").get<std::vector<int>>();
        }
        if (j.contains("P_bs_max"))
            c.P_bs_max = j.at("P_bs_max").get<double>();
        if (j.contains("P_bs_max_dbm"))
            c.P_bs_max = dbm_to_watts(j.at("P_bs_max_dbm").get<double>());
        if (j.contains("P_ul_max"))
            c.P_ul_max = read_table(j.at("P_ul_max"), c.L, identity);
        if (j.contains("P_ul_max_dbm"))
            c.P_ul_max = read_table(j.at("P_ul_max_dbm"), c.L, dbm_to_watts);
        if (j.contains("noise_psd_dbm_hz"))
            c.noise_psd_dbm_hz = j.at("noise_psd_dbm_hz").get<double>();
        if (j.contains("bandwidth_hz"))
            c.bandwidth_hz = j.at("bandwidth_hz").get<double>();
        if (j.contains("sigma_si"))
            c.sigma_si = j.at("sigma_si").get<double>();
        if (j.contains("sigma_si_db"))
            c.sigma_si = db_to_linear(j.at("sigma_si_db").get<double>());
        if (j.contains("rician_k_db"))
            c.rician_k_db = j.at("rician_k_db").get<double>();
        if (j.contains("cell_radius_m"))
            c.cell_radius_m = j.at("cell_radius_m").get<double>();
        if (j.contains("inner_radius_m"))
            c.inner_radius_m = j.at("inner_radius_m").get<double>();
        if (j.contains("min_bs_distance_m"))
            c.min_bs_distance_m = j.at("min_bs_distance_m").get<double>();
        if (j.contains("epsilon_dl"))
            c.epsilon_dl = read_table(j.at("epsilon_dl"), c.K, identity);
        if (j.contains("epsilon_ul"))
            c.epsilon_ul = read_table(j.at("epsilon_ul"), c.L, identity);
        if (j.contains("rng_seed"))
            c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        c.normalize_shapes();
        c.validate();
        return c;
    }

    json config_to_json(const SystemConfig &c)
    {
        json j;
        j["K"] = c.K;
        j["L"] = c.L;
        j["M"] = c.M;
        j["Nt"] = c.Nt;
        j["Nr"] = c.Nr;
        j["Ne"] = c.Ne;
        j["P_bs_max"] = c.P_bs_max;
        j["P_ul_max"] = c.P_ul_max;
        j["noise_psd_dbm_hz"] = c.noise_psd_dbm_hz;
        j["bandwidth_hz"] = c.bandwidth_hz;
        j["sigma_si"] = c.sigma_si;
        j["rician_k_db"] = c.rician_k_db;
        j["cell_radius_m"] = c.cell_radius_m;
        j["inner_radius_m"] = c.inner_radius_m;
        j["min_bs_distance_m"] = c.min_bs_distance_m;
        j["epsilon_dl"] = c.epsilon_dl;
        j["epsilon_ul"] = c.epsilon_ul;
        j["rng_seed"] = c.rng_seed;
        return j;
    }

    SystemConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file " + path);
        return config_from_json(json::parse(in, nullptr, true, true));
    }

} // namespace fdsec
