// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field multi-user XL-MIMO channel and beamforming simulation
// Copyright (C) 2026 The xlmimo authors
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

#include "xlmimo/cli/config.hpp"
#include "xlmimo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace xlmimo::cli
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        std::string_view trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::string unquote(std::string_view s)
        {
            s = trim(s);
            if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
                s = s.substr(1, s.size() - 2);
            return std::string(s);
        }

        enum KeyFlag : unsigned
        {
            k_corr_m = 1u << 0,
            k_corr_d = 1u << 1,
            k_sinr = 1u << 2,
            k_heat = 1u << 3,
            k_sum = 1u << 4,
            k_all = 0x1fu,
        };

        struct KeySpec
        {
            const char *name;
            unsigned applies;
        };

        // Canonical key order; also the order of the sidecar's config object
        const KeySpec kKeys[] = {
            {"experiment", k_all},
            {"model", k_all},
            {"seed", k_all},
            {"out", k_all},
            {"wavelength", k_all},
            {"spacing", k_all},
            {"element_area", k_all},
            {"beta0", k_all},
            {"snr_db", k_sinr | k_heat | k_sum},
            {"my", k_all},
            {"mz", k_corr_d | k_heat},
            {"mz_list", k_corr_m | k_sinr | k_sum},
            {"user1_r", k_corr_m | k_corr_d | k_sinr | k_heat},
            {"user1_theta", k_corr_m | k_corr_d | k_sinr | k_heat},
            {"user1_phi", k_corr_m | k_corr_d | k_sinr | k_heat},
            {"user2_r", k_corr_m | k_sinr},
            {"user2_theta", k_corr_m | k_corr_d | k_sinr},
            {"user2_phi", k_corr_m | k_corr_d | k_sinr},
            {"separation_list", k_corr_d},
            {"x_list", k_heat},
            {"y_list", k_heat},
            {"sumrate_growth", k_sum},
            {"n_list", k_sum},
            {"num_users", k_sum},
            {"num_drops", k_sum},
            {"r_min", k_sum},
            {"r_max", k_sum},
            {"theta_min", k_sum},
            {"theta_max", k_sum},
            {"phi_min", k_sum},
            {"phi_max", k_sum},
        };

        unsigned experiment_flag(Experiment e)
        {
            switch (e)
            {
            case Experiment::corr_vs_m:
                return k_corr_m;
            case Experiment::corr_vs_dist:
                return k_corr_d;
            case Experiment::sinr_vs_m:
                return k_sinr;
            case Experiment::snr_loss_heatmap:
                return k_heat;
            case Experiment::sumrate_vs_m:
                return k_sum;
            }
            return 0;
        }

        const KeySpec *find_key(std::string_view name)
        {
            for (const auto &k : kKeys)
                if (name == k.name)
                    return &k;
            return nullptr;
        }

        [[noreturn]] void fail(const RawValue &v, const std::string &key, const std::string &msg)
        {
            throw config_error(v.origin + ": key '" + key + "': " + msg + " (got '" + v.text + "')");
        }

        std::vector<double> range_values(double start, double step, double stop)
        {
            if (!(step != 0.0) || (stop - start) / step < 0.0)
                throw config_error("range " + format_number(start) + ":" + format_number(step) + ":" +
                                   format_number(stop) + " is empty");
            const auto n = std::size_t(std::floor((stop - start) / step + 1e-9)) + 1;
            if (n > 10'000'000)
                throw config_error("range has too many points");
            std::vector<double> out(n);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = start + double(i) * step;
            return out;
        }

        std::vector<std::size_t> to_counts(const std::vector<double> &v)
        {
            std::vector<std::size_t> out;
            for (double x : v)
            {
                if (!(x >= 1.0) || x != std::floor(x) || x > 1e9)
                    throw config_error("expected positive integers");
                out.push_back(std::size_t(x));
            }
            return out;
        }

        std::string json_to_text(const nlohmann::json &v, const std::string &where)
        {
            if (v.is_string())
                return v.get<std::string>();
            if (v.is_number_integer() || v.is_number_unsigned())
                return v.dump();
            if (v.is_number_float())
                return format_number(v.get<double>());
            if (v.is_array())
            {
                std::string s = "[";
                for (std::size_t i = 0; i < v.size(); ++i)
                {
                    if (i)
                        s += ", ";
                    if (v[i].is_array() || v[i].is_object())
                        throw config_error(where + ": nested arrays are not supported");
                    s += json_to_text(v[i], where);
                }
                return s + "]";
            }
            throw config_error(where + ": unsupported value " + v.dump());
        }
    }

    std::string format_number(double v)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    std::string_view to_string(Experiment e)
    {
        switch (e)
        {
        case Experiment::corr_vs_m:
            return "corr-vs-m";
        case Experiment::corr_vs_dist:
            return "corr-vs-dist";
        case Experiment::sinr_vs_m:
            return "sinr-vs-m";
        case Experiment::snr_loss_heatmap:
            return "snr-loss-heatmap";
        case Experiment::sumrate_vs_m:
            return "sumrate-vs-m";
        }
        return "?";
    }

    Experiment parse_experiment(std::string_view name)
    {
        for (auto e : {Experiment::corr_vs_m, Experiment::corr_vs_dist, Experiment::sinr_vs_m,
                       Experiment::snr_loss_heatmap, Experiment::sumrate_vs_m})
            if (to_string(e) == name)
                return e;
        throw config_error("unknown experiment '" + std::string(name) +
                           "' (expected corr-vs-m, corr-vs-dist, sinr-vs-m, snr-loss-heatmap or sumrate-vs-m)");
    }

    double parse_number(std::string_view text)
    {
        auto s = trim(text);
        if (!s.empty() && s.front() == '+')
            s.remove_prefix(1);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
            throw config_error("'" + std::string(text) + "' is not a finite number");
        return v;
    }

    double parse_angle(std::string_view text)
    {
        auto s = trim(text);
        const auto p = s.find("pi");
        if (p == std::string_view::npos)
            return parse_number(s);

        // [sign][coef[*]]pi[/den]
        auto head = trim(s.substr(0, p));
        auto tail = trim(s.substr(p + 2));
        double sign = 1.0;
        if (!head.empty() && (head.front() == '-' || head.front() == '+'))
        {
            sign = head.front() == '-' ? -1.0 : 1.0;
            head = trim(head.substr(1));
        }
        if (!head.empty() && head.back() == '*')
            head = trim(head.substr(0, head.size() - 1));
        const double coef = head.empty() ? 1.0 : parse_number(head);
        double den = 1.0;
        if (!tail.empty())
        {
            if (tail.front() != '/')
                throw config_error("'" + std::string(text) + "' is not an angle (use forms like pi/2 or 2*pi/3)");
            den = parse_number(tail.substr(1));
            if (den == 0.0)
                throw config_error("'" + std::string(text) + "' divides by zero");
        }
        return sign * coef * pi / den;
    }

    std::vector<double> parse_list(std::string_view text, bool angles)
    {
        auto s = trim(text);
        const auto element = [&](std::string_view e) { return angles ? parse_angle(e) : parse_number(e); };
        if (!s.empty() && s.front() == '[')
        {
            if (s.back() != ']')
                throw config_error("'" + std::string(text) + "' is missing the closing ']'");
            s = trim(s.substr(1, s.size() - 2));
            std::vector<double> out;
            if (s.empty())
                return out;
            std::size_t start = 0;
            while (true)
            {
                const auto comma = s.find(',', start);
                out.push_back(element(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
                if (comma == std::string_view::npos)
                    break;
                start = comma + 1;
            }
            return out;
        }
        if (s.find(':') != std::string_view::npos)
        {
            const auto c1 = s.find(':');
            const auto c2 = s.find(':', c1 + 1);
            if (c2 == std::string_view::npos)
                throw config_error("'" + std::string(text) + "': ranges are written start:step:stop");
            return range_values(element(s.substr(0, c1)), element(s.substr(c1 + 1, c2 - c1 - 1)),
                                element(s.substr(c2 + 1)));
        }
        return {element(s)};
    }

    RawConfig parse_key_value(std::string_view text, const std::string &source_name)
    {
        RawConfig out;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto nl = text.find('\n', pos);
            auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line_no;

            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;

            const std::string where = source_name + ":" + std::to_string(line_no);
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw config_error(where + ": expected 'key = value', got '" + std::string(line) + "'");
            const std::string key(trim(line.substr(0, eq)));
            if (key.empty())
                throw config_error(where + ": missing key before '='");
            if (out.count(key))
                throw config_error(where + ": key '" + key + "' is set twice");
            out[key] = RawValue{unquote(line.substr(eq + 1)), where};
        }
        return out;
    }

    RawConfig parse_json_config(std::string_view text, const std::string &source_name)
    {
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw config_error(source_name + ": invalid JSON: " + e.what());
        }
        const nlohmann::json *cfg = &doc;
        std::string prefix;
        if (doc.is_object() && doc.contains("config"))
        {
            cfg = &doc["config"];
            prefix = "config.";
        }
        if (!cfg->is_object())
            throw config_error(source_name + ": expected a JSON object");

        RawConfig out;
        for (const auto &[key, value] : cfg->items())
        {
            const std::string where = source_name + ":" + prefix + key;
            out[key] = RawValue{json_to_text(value, where), where};
        }
        return out;
    }

    RawConfig load_config_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw config_error("cannot open config file '" + path.string() + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{')
            return parse_json_config(text, path.string());
        return parse_key_value(text, path.string());
    }

    const std::vector<std::string> &known_keys()
    {
        static const std::vector<std::string> keys = [] {
            std::vector<std::string> k;
            for (const auto &entry : kKeys)
                k.emplace_back(entry.name);
            return k;
        }();
        return keys;
    }

    ArrayGeometry RunConfig::geometry() const
    {
        return ArrayGeometry(my, mz, spacing, element_area, wavelength);
    }

    experiments::ModelSet RunConfig::model_set() const
    {
        experiments::ModelSet m;
        m.upw.beta0 = beta0;
        if (model == "pnusw")
            m.models = {ChannelModel::pnusw};
        else if (model == "upw")
            m.models = {ChannelModel::upw};
        else
            m.models = {ChannelModel::pnusw, ChannelModel::upw};
        return m;
    }

    std::vector<double> RunConfig::snr_linear(std::size_t num) const
    {
        std::vector<double> out(num);
        for (std::size_t k = 0; k < num; ++k)
        {
            const double db = snr_db.size() == 1 ? snr_db[0] : snr_db.at(k);
            out[k] = std::pow(10.0, db / 10.0) / beta0;
        }
        return out;
    }

    experiments::UserRegion RunConfig::region() const
    {
        return {{r_min, r_max}, {theta_min, theta_max}, {phi_min, phi_max}};
    }

    nlohmann::ordered_json RunConfig::to_json() const
    {
        const unsigned flag = experiment_flag(experiment);
        auto counts = [](const std::vector<std::size_t> &v) { return nlohmann::ordered_json(v); };
        auto reals = [](const std::vector<double> &v) { return nlohmann::ordered_json(v); };

        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto &entry : kKeys)
        {
            if (!(entry.applies & flag))
                continue;
            const std::string k = entry.name;
            if (k == "experiment") j[k] = std::string(to_string(experiment));
            else if (k == "model") j[k] = model;
            else if (k == "seed") j[k] = seed;
            else if (k == "out") j[k] = out;
            else if (k == "wavelength") j[k] = wavelength;
            else if (k == "spacing") j[k] = spacing;
            else if (k == "element_area") j[k] = element_area;
            else if (k == "beta0") j[k] = beta0;
            else if (k == "snr_db") j[k] = reals(snr_db);
            else if (k == "my") j[k] = my;
            else if (k == "mz") j[k] = mz;
            else if (k == "mz_list") j[k] = counts(mz_list);
            else if (k == "user1_r") j[k] = user1_r;
            else if (k == "user1_theta") j[k] = user1_theta;
            else if (k == "user1_phi") j[k] = user1_phi;
            else if (k == "user2_r") j[k] = user2_r;
            else if (k == "user2_theta") j[k] = user2_theta;
            else if (k == "user2_phi") j[k] = user2_phi;
            else if (k == "separation_list") j[k] = reals(separation_list);
            else if (k == "x_list") j[k] = reals(x_list);
            else if (k == "y_list") j[k] = reals(y_list);
            else if (k == "sumrate_growth") j[k] = sumrate_growth;
            else if (k == "n_list") j[k] = counts(n_list);
            else if (k == "num_users") j[k] = num_users;
            else if (k == "num_drops") j[k] = num_drops;
            else if (k == "r_min") j[k] = r_min;
            else if (k == "r_max") j[k] = r_max;
            else if (k == "theta_min") j[k] = theta_min;
            else if (k == "theta_max") j[k] = theta_max;
            else if (k == "phi_min") j[k] = phi_min;
            else if (k == "phi_max") j[k] = phi_max;
        }
        return j;
    }

    RunConfig resolve(const std::vector<RawConfig> &layers)
    {
        RawConfig merged;
        for (const auto &layer : layers)
            for (const auto &[k, v] : layer)
                merged[k] = v;

        RunConfig cfg;
        if (auto it = merged.find("experiment"); it != merged.end())
        {
            try
            {
                cfg.experiment = parse_experiment(trim(it->second.text));
            }
            catch (const config_error &e)
            {
                throw config_error(it->second.origin + ": key 'experiment': " + e.what());
            }
        }
        else
            throw config_error("no experiment selected (set 'experiment' or pass --experiment)");

        const unsigned flag = experiment_flag(cfg.experiment);
        for (const auto &[k, v] : merged)
        {
            const auto *entry = find_key(k);
            if (!entry)
                throw config_error(v.origin + ": unknown key '" + k + "'");
            if (!(entry->applies & flag))
                throw config_error(v.origin + ": key '" + k + "' does not apply to experiment " +
                                   std::string(to_string(cfg.experiment)));
        }

        // Experiment defaults
        switch (cfg.experiment)
        {
        case Experiment::corr_vs_m:
        case Experiment::sinr_vs_m:
            cfg.my = 10;
            cfg.mz_list.clear();
            for (std::size_t m = 11; m <= 1001; m += 10)
                cfg.mz_list.push_back(m);
            cfg.user1_r = 25.0, cfg.user1_theta = pi / 2, cfg.user1_phi = 0.0;
            cfg.user2_r = 250.0, cfg.user2_theta = pi / 2, cfg.user2_phi = 0.0;
            break;
        case Experiment::corr_vs_dist:
            cfg.my = cfg.mz = 200;
            cfg.user1_r = 50.0, cfg.user1_theta = pi / 2, cfg.user1_phi = 0.0;
            cfg.user2_theta = pi / 2, cfg.user2_phi = 0.0;
            cfg.separation_list = range_values(1.0, 1.0, 200.0);
            break;
        case Experiment::snr_loss_heatmap:
            cfg.my = cfg.mz = 200;
            cfg.user1_r = 100.0, cfg.user1_theta = pi / 2, cfg.user1_phi = 0.0;
            cfg.x_list = range_values(5.0, 5.0, 200.0);
            cfg.y_list = range_values(-100.0, 5.0, 100.0);
            break;
        case Experiment::sumrate_vs_m:
            cfg.my = 10;
            cfg.n_list = {10, 25, 50, 75, 100, 125, 150, 175, 200};
            cfg.mz_list.clear();
            for (std::size_t m = 11; m <= 1001; m += 10)
                cfg.mz_list.push_back(m);
            cfg.num_users = 10;
            cfg.num_drops = 100;
            cfg.r_min = 50.0, cfg.r_max = 100.0;
            cfg.theta_min = 0.0, cfg.theta_max = pi / 3;
            cfg.phi_min = pi / 6, cfg.phi_max = pi / 3;
            break;
        }

        bool spacing_set = false, area_set = false, beta0_set = false;
        for (const auto &[k, v] : merged)
        {
            try
            {
                if (k == "experiment")
                    continue;
                else if (k == "model")
                {
                    cfg.model = std::string(trim(v.text));
                    if (cfg.model != "both" && cfg.model != "pnusw" && cfg.model != "upw")
                        fail(v, k, "expected both, pnusw or upw");
                }
                else if (k == "seed")
                {
                    const auto s = trim(v.text);
                    std::uint64_t seed = 0;
                    const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
                    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
                        fail(v, k, "expected a non-negative integer");
                    cfg.seed = seed;
                }
                else if (k == "out")
                    cfg.out = std::string(trim(v.text));
                else if (k == "wavelength")
                    cfg.wavelength = parse_number(v.text);
                else if (k == "spacing")
                    cfg.spacing = parse_number(v.text), spacing_set = true;
                else if (k == "element_area")
                    cfg.element_area = parse_number(v.text), area_set = true;
                else if (k == "beta0")
                {
                    cfg.beta0 = parse_number(v.text), beta0_set = true;
                    if (!(cfg.beta0 > 0.0))
                        fail(v, k, "must be positive");
                }
                else if (k == "snr_db")
                {
                    cfg.snr_db = parse_list(v.text);
                    if (cfg.snr_db.empty())
                        fail(v, k, "needs at least one value");
                }
                else if (k == "my" || k == "mz" || k == "num_users" || k == "num_drops")
                {
                    const auto c = to_counts(parse_list(v.text));
                    if (c.size() != 1)
                        fail(v, k, "expected a single positive integer");
                    (k == "my" ? cfg.my : k == "mz" ? cfg.mz : k == "num_users" ? cfg.num_users : cfg.num_drops) = c[0];
                }
                else if (k == "mz_list" || k == "n_list")
                {
                    auto c = to_counts(parse_list(v.text));
                    if (c.empty())
                        fail(v, k, "needs at least one value");
                    (k == "mz_list" ? cfg.mz_list : cfg.n_list) = std::move(c);
                }
                else if (k == "user1_r")
                    cfg.user1_r = parse_number(v.text);
                else if (k == "user2_r")
                    cfg.user2_r = parse_number(v.text);
                else if (k == "user1_theta")
                    cfg.user1_theta = parse_angle(v.text);
                else if (k == "user1_phi")
                    cfg.user1_phi = parse_angle(v.text);
                else if (k == "user2_theta")
                    cfg.user2_theta = parse_angle(v.text);
                else if (k == "user2_phi")
                    cfg.user2_phi = parse_angle(v.text);
                else if (k == "separation_list" || k == "x_list" || k == "y_list")
                {
                    auto l = parse_list(v.text);
                    if (l.empty())
                        fail(v, k, "needs at least one value");
                    (k == "separation_list" ? cfg.separation_list : k == "x_list" ? cfg.x_list : cfg.y_list) =
                        std::move(l);
                }
                else if (k == "sumrate_growth")
                {
                    cfg.sumrate_growth = std::string(trim(v.text));
                    if (cfg.sumrate_growth != "square" && cfg.sumrate_growth != "fixed-my")
                        fail(v, k, "expected square or fixed-my");
                }
                else if (k == "r_min")
                    cfg.r_min = parse_number(v.text);
                else if (k == "r_max")
                    cfg.r_max = parse_number(v.text);
                else if (k == "theta_min")
                    cfg.theta_min = parse_angle(v.text);
                else if (k == "theta_max")
                    cfg.theta_max = parse_angle(v.text);
                else if (k == "phi_min")
                    cfg.phi_min = parse_angle(v.text);
                else if (k == "phi_max")
                    cfg.phi_max = parse_angle(v.text);
            }
            catch (const config_error &e)
            {
                const std::string msg = e.what();
                if (msg.rfind(v.origin, 0) == 0)
                    throw;
                fail(v, k, msg);
            }
        }

        if (!spacing_set)
            cfg.spacing = 0.5 * cfg.wavelength;
        if (!area_set)
            cfg.element_area = cfg.wavelength * cfg.wavelength / (4.0 * pi);

        auto where = [&](const char *key) {
            auto it = merged.find(key);
            return it != merged.end() ? it->second.origin + ": key '" + key + "'" : std::string("default '") + key + "'";
        };

        // Module preconditions, checked before dispatch
        try
        {
            (void)cfg.geometry();
        }
        catch (const xlmimo::error &e)
        {
            throw config_error(where("spacing") + ": invalid array geometry: " + e.what());
        }
        if (!beta0_set)
            cfg.beta0 = cfg.element_area / (4.0 * pi);

        // Names every explicitly set key among the given ones, or the first as a default
        auto where_any = [&](std::initializer_list<const char *> keys) {
            std::string out;
            for (const char *k : keys)
                if (merged.count(k))
                    out += (out.empty() ? "" : ", ") + where(k);
            return out.empty() ? where(*keys.begin()) : out;
        };

        auto check_user = [&](double r, double th, double ph, const std::string &prefix) {
            try
            {
                (void)UserLocation(r, th, ph);
            }
            catch (const xlmimo::error &e)
            {
                const std::string kr = prefix + "_r", kt = prefix + "_theta", kp = prefix + "_phi";
                throw config_error(where_any({kr.c_str(), kt.c_str(), kp.c_str()}) + ": " + e.what());
            }
        };

        std::size_t users_needed = 2;
        switch (cfg.experiment)
        {
        case Experiment::corr_vs_m:
        case Experiment::sinr_vs_m:
            check_user(cfg.user1_r, cfg.user1_theta, cfg.user1_phi, "user1");
            check_user(cfg.user2_r, cfg.user2_theta, cfg.user2_phi, "user2");
            break;
        case Experiment::corr_vs_dist:
            check_user(cfg.user1_r, cfg.user1_theta, cfg.user1_phi, "user1");
            for (double s : cfg.separation_list)
            {
                if (!(s >= 0.0))
                    throw config_error(where("separation_list") + ": separations must be non-negative");
                check_user(cfg.user1_r + s, cfg.user2_theta, cfg.user2_phi, "user2");
            }
            break;
        case Experiment::snr_loss_heatmap:
            check_user(cfg.user1_r, cfg.user1_theta, cfg.user1_phi, "user1");
            break;
        case Experiment::sumrate_vs_m:
            users_needed = cfg.num_users;
            try
            {
                cfg.region().validate();
            }
            catch (const xlmimo::error &e)
            {
                throw config_error(where("r_min") + ": " + e.what());
            }
            {
                const auto &sizes = cfg.sumrate_growth == "square" ? cfg.n_list : cfg.mz_list;
                for (auto n : sizes)
                {
                    const std::size_t m = cfg.sumrate_growth == "square" ? n * n : cfg.my * n;
                    if (m < cfg.num_users)
                        throw config_error(where(cfg.sumrate_growth == "square" ? "n_list" : "mz_list") +
                                           ": array with " + std::to_string(m) + " elements cannot serve " +
                                           std::to_string(cfg.num_users) + " users");
                }
            }
            break;
        }
        if (cfg.snr_db.size() != 1 && cfg.snr_db.size() != users_needed)
            throw config_error(where("snr_db") + ": give one value or one per user (" +
                               std::to_string(users_needed) + ")");
        if (cfg.out.empty())
            cfg.out = std::string(to_string(cfg.experiment)) + ".csv";
        return cfg;
    }
}
