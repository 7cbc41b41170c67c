// SPDX-License-Identifier: Apache-2.0
//
// papc — precoding and combining for frequency-selective mmWave MIMO links
// with per-antenna power constraints.
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

#include "papc/experiment.hpp"

#include "papc/channel.hpp"
#include "papc/digital.hpp"
#include "papc/hybrid.hpp"
#include "papc/metrics.hpp"
#include "papc/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace papc
{

using nlohmann::json;

namespace
{

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::pair<int, int> line_of_byte(const std::string& text, size_t byte)
{
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return {line, col};
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
    {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known)
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
    }
}

double require_number(const json& obj, const std::string& field)
{
    if (!obj.is_number()) throw ValidationError("field '" + field + "' must be a number");
    return obj.get<double>();
}

int require_int(const json& obj, const std::string& field)
{
    if (!obj.is_number_integer()) throw ValidationError("field '" + field + "' must be an integer");
    return obj.get<int>();
}

std::string normalized_name(std::string s)
{
    std::string out;
    for (char c : s)
    {
        if (c == ' ' || c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

ExperimentKind parse_experiment_kind(const std::string& name)
{
    const std::string n = normalized_name(name);
    if (n == "sevssnr") return ExperimentKind::se_vs_snr;
    if (n == "ccdf") return ExperimentKind::ccdf;
    if (n == "sevsbandwidth" || n == "sevsb") return ExperimentKind::se_vs_bandwidth;
    if (n == "gammavsd") return ExperimentKind::gamma_vs_d;
    if (n == "gammavsbandwidth" || n == "gammavsb") return ExperimentKind::gamma_vs_bandwidth;
    throw ValidationError("unknown experiment '" + name + "'");
}

DesignKind parse_design_kind(const std::string& name)
{
    const std::string n = normalized_name(name);
    if (n == "tpc") return DesignKind::tpc;
    if (n == "ppcdigital") return DesignKind::ppc_digital;
    if (n == "ppchybrid") return DesignKind::ppc_hybrid;
    throw ValidationError("unknown design '" + name + "'");
}

} // namespace

const char* to_string(ExperimentKind kind)
{
    switch (kind)
    {
        case ExperimentKind::se_vs_snr: return "se_vs_snr";
        case ExperimentKind::ccdf: return "ccdf";
        case ExperimentKind::se_vs_bandwidth: return "se_vs_bandwidth";
        case ExperimentKind::gamma_vs_d: return "gamma_vs_d";
        case ExperimentKind::gamma_vs_bandwidth: return "gamma_vs_bandwidth";
    }
    return "?";
}

const char* to_string(DesignKind kind)
{
    switch (kind)
    {
        case DesignKind::tpc: return "tpc";
        case DesignKind::ppc_digital: return "ppc_digital";
        case DesignKind::ppc_hybrid: return "ppc_hybrid";
    }
    return "?";
}

void apply_preset(SystemConfig& cfg, const std::string& name)
{
    const std::string n = normalized_name(name);
    if (n == "system1" || n == "systemi" || n == "1" || n == "i")
    {
        cfg.n_tx = 64;
        cfg.n_rx = 32;
        cfg.l_tx = 4;
        cfg.l_rx = 4;
    }
    else if (n == "system2" || n == "systemii" || n == "2" || n == "ii")
    {
        cfg.n_tx = 64;
        cfg.n_rx = 16;
        cfg.l_tx = 4;
        cfg.l_rx = 2;
    }
    else
    {
        throw ValidationError("unknown system preset '" + name + "'");
    }
}

std::string preset_listing()
{
    std::ostringstream out;
    out << "Available system presets:\n"
        << "  system1 (System I)  : n_tx=64 n_rx=32 l_tx=4 l_rx=4\n"
        << "  system2 (System II) : n_tx=64 n_rx=16 l_tx=4 l_rx=2\n"
        << "Defaults in both: n_streams=2, n_subcarriers=256, q_bits=4,\n"
        << "uniform per-antenna budgets summing to n_subcarriers.\n";
    return out.str();
}

void ExperimentSpec::validate() const
{
    if (trials < 1) throw ValidationError("field 'trials' must be >= 1");
    if (sweep.empty()) throw ValidationError("field 'sweep' must be nonempty");
    if (designs.empty()) throw ValidationError("field 'designs' must be nonempty");
    if (workers < 0) throw ValidationError("field 'workers' must be >= 0");
    try
    {
        system.validate();
        channel.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw ValidationError(e.what());
    }
    if (channel.n_taps > system.n_subcarriers)
        throw ValidationError("channel.n_taps must not exceed system.n_subcarriers");
    const bool bandwidth_sweep = experiment == ExperimentKind::se_vs_bandwidth ||
                                 experiment == ExperimentKind::gamma_vs_bandwidth;
    if (bandwidth_sweep)
    {
        if (!channel.beam_squint)
            throw ValidationError("bandwidth sweeps require channel.beam_squint = true");
        for (double b : sweep)
            if (!(b > 0.0)) throw ValidationError("field 'sweep' must contain positive bandwidths");
    }
    if (experiment == ExperimentKind::gamma_vs_d)
    {
        for (double d : sweep)
        {
            if (d < 1.0 || d != std::floor(d) || d > std::min(system.n_tx, system.n_rx))
                throw ValidationError(
                    "field 'sweep' must contain integer subspace dimensions within the array sizes");
        }
    }
}

namespace
{

ExperimentSpec spec_from_json(const json& root)
{
    if (!root.is_object()) throw ValidationError("config root must be a JSON object");
    check_keys(root, "config", {"experiment", "system", "channel", "designs", "sweep", "trials",
                                "master_seed", "output_dir", "workers"});

    ExperimentSpec spec;
    if (!root.contains("experiment")) throw ValidationError("missing field 'experiment'");
    spec.experiment = parse_experiment_kind(root.at("experiment").get<std::string>());

    bool budgets_given = false;
    if (root.contains("system"))
    {
        const json& sys = root.at("system");
        check_keys(sys, "'system'",
                   {"preset", "n_tx", "n_rx", "l_tx", "l_rx", "n_streams", "n_subcarriers",
                    "snr_db", "q_bits_tx", "q_bits_rx", "budgets"});
        if (sys.contains("preset")) apply_preset(spec.system, sys.at("preset").get<std::string>());
        if (sys.contains("n_tx")) spec.system.n_tx = require_int(sys.at("n_tx"), "system.n_tx");
        if (sys.contains("n_rx")) spec.system.n_rx = require_int(sys.at("n_rx"), "system.n_rx");
        if (sys.contains("l_tx")) spec.system.l_tx = require_int(sys.at("l_tx"), "system.l_tx");
        if (sys.contains("l_rx")) spec.system.l_rx = require_int(sys.at("l_rx"), "system.l_rx");
        if (sys.contains("n_streams"))
            spec.system.n_streams = require_int(sys.at("n_streams"), "system.n_streams");
        if (sys.contains("n_subcarriers"))
            spec.system.n_subcarriers = require_int(sys.at("n_subcarriers"), "system.n_subcarriers");
        if (sys.contains("snr_db"))
            spec.system.snr_db = require_number(sys.at("snr_db"), "system.snr_db");
        if (sys.contains("q_bits_tx"))
            spec.system.q_bits_tx = require_int(sys.at("q_bits_tx"), "system.q_bits_tx");
        if (sys.contains("q_bits_rx"))
            spec.system.q_bits_rx = require_int(sys.at("q_bits_rx"), "system.q_bits_rx");
        if (sys.contains("budgets"))
        {
            const json& b = sys.at("budgets");
            budgets_given = true;
            if (b.is_number())
            {
                spec.system.budgets =
                    rvec::Constant(spec.system.n_tx, b.get<double>());
            }
            else if (b.is_array())
            {
                spec.system.budgets.resize(b.size());
                for (size_t i = 0; i < b.size(); ++i)
                    spec.system.budgets(static_cast<Eigen::Index>(i)) =
                        require_number(b.at(i), "system.budgets[]");
            }
            else
            {
                throw ValidationError("field 'system.budgets' must be a number or an array");
            }
        }
    }
    if (!budgets_given) spec.system.set_uniform_budgets(spec.system.n_subcarriers);

    if (root.contains("channel"))
    {
        const json& ch = root.at("channel");
        check_keys(ch, "'channel'",
                   {"n_clusters", "rays_per_cluster", "n_taps", "sample_period", "rolloff",
                    "pathloss", "rician_factor_db", "angular_spread_deg", "bandwidth_hz",
                    "carrier_hz", "beam_squint"});
        if (ch.contains("n_clusters"))
            spec.channel.n_clusters = require_int(ch.at("n_clusters"), "channel.n_clusters");
        if (ch.contains("rays_per_cluster"))
        {
            const json& rays = ch.at("rays_per_cluster");
            spec.channel.rays_per_cluster.clear();
            if (rays.is_number_integer())
            {
                spec.channel.rays_per_cluster.push_back(rays.get<int>());
            }
            else if (rays.is_array())
            {
                for (const auto& r : rays)
                    spec.channel.rays_per_cluster.push_back(
                        require_int(r, "channel.rays_per_cluster[]"));
            }
            else
            {
                throw ValidationError("field 'channel.rays_per_cluster' must be an int or array");
            }
        }
        if (ch.contains("n_taps")) spec.channel.n_taps = require_int(ch.at("n_taps"), "channel.n_taps");
        if (ch.contains("sample_period"))
            spec.channel.sample_period = require_number(ch.at("sample_period"), "channel.sample_period");
        if (ch.contains("rolloff"))
            spec.channel.rolloff = require_number(ch.at("rolloff"), "channel.rolloff");
        if (ch.contains("pathloss"))
            spec.channel.pathloss = require_number(ch.at("pathloss"), "channel.pathloss");
        if (ch.contains("rician_factor_db"))
        {
            const json& kf = ch.at("rician_factor_db");
            if (kf.is_string() && normalized_name(kf.get<std::string>()) == "inf")
                spec.channel.rician_factor_db = std::numeric_limits<double>::infinity();
            else
                spec.channel.rician_factor_db = require_number(kf, "channel.rician_factor_db");
        }
        if (ch.contains("angular_spread_deg"))
            spec.channel.angular_spread_deg =
                require_number(ch.at("angular_spread_deg"), "channel.angular_spread_deg");
        if (ch.contains("bandwidth_hz"))
            spec.channel.bandwidth_hz = require_number(ch.at("bandwidth_hz"), "channel.bandwidth_hz");
        if (ch.contains("carrier_hz"))
            spec.channel.carrier_hz = require_number(ch.at("carrier_hz"), "channel.carrier_hz");
        if (ch.contains("beam_squint"))
        {
            if (!ch.at("beam_squint").is_boolean())
                throw ValidationError("field 'channel.beam_squint' must be a boolean");
            spec.channel.beam_squint = ch.at("beam_squint").get<bool>();
        }
    }

    if (root.contains("designs"))
    {
        spec.designs.clear();
        if (!root.at("designs").is_array())
            throw ValidationError("field 'designs' must be an array");
        for (const auto& d : root.at("designs"))
            spec.designs.push_back(parse_design_kind(d.get<std::string>()));
    }

    if (root.contains("sweep"))
    {
        if (!root.at("sweep").is_array()) throw ValidationError("field 'sweep' must be an array");
        for (const auto& v : root.at("sweep")) spec.sweep.push_back(require_number(v, "sweep[]"));
    }
    else if (spec.experiment == ExperimentKind::ccdf)
    {
        spec.sweep = {spec.system.snr_db};
    }
    else
    {
        throw ValidationError("missing field 'sweep'");
    }

    if (root.contains("trials"))
        spec.trials = require_int(root.at("trials"), "trials");
    else if (spec.experiment == ExperimentKind::ccdf)
        spec.trials = 1000;

    if (root.contains("master_seed"))
    {
        if (!root.at("master_seed").is_number_integer())
            throw ValidationError("field 'master_seed' must be an integer");
        spec.master_seed = root.at("master_seed").get<std::uint64_t>();
    }
    if (root.contains("output_dir")) spec.output_dir = root.at("output_dir").get<std::string>();
    if (root.contains("workers")) spec.workers = require_int(root.at("workers"), "workers");

    spec.validate();
    return spec;
}

} // namespace

ExperimentSpec parse_config_text(const std::string& text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        const auto [line, col] = line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ValidationError("config parse error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
    }
    return spec_from_json(root);
}

ExperimentSpec parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string resolved_config_json(const ExperimentSpec& spec)
{
    json sys;
    sys["n_tx"] = spec.system.n_tx;
    sys["n_rx"] = spec.system.n_rx;
    sys["l_tx"] = spec.system.l_tx;
    sys["l_rx"] = spec.system.l_rx;
    sys["n_streams"] = spec.system.n_streams;
    sys["n_subcarriers"] = spec.system.n_subcarriers;
    sys["snr_db"] = spec.system.snr_db;
    sys["q_bits_tx"] = spec.system.q_bits_tx;
    sys["q_bits_rx"] = spec.system.q_bits_rx;
    sys["budgets"] = std::vector<double>(spec.system.budgets.begin(), spec.system.budgets.end());

    json ch;
    ch["n_clusters"] = spec.channel.n_clusters;
    ch["rays_per_cluster"] = spec.channel.rays_per_cluster;
    ch["n_taps"] = spec.channel.n_taps;
    ch["sample_period"] = spec.channel.sample_period;
    ch["rolloff"] = spec.channel.rolloff;
    ch["pathloss"] = spec.channel.pathloss;
    if (std::isinf(spec.channel.rician_factor_db))
        ch["rician_factor_db"] = "inf";
    else
        ch["rician_factor_db"] = spec.channel.rician_factor_db;
    ch["angular_spread_deg"] = spec.channel.angular_spread_deg;
    ch["bandwidth_hz"] = spec.channel.bandwidth_hz;
    ch["carrier_hz"] = spec.channel.carrier_hz;
    ch["beam_squint"] = spec.channel.beam_squint;

    json root;
    root["experiment"] = to_string(spec.experiment);
    root["system"] = sys;
    root["channel"] = ch;
    json designs = json::array();
    for (DesignKind d : spec.designs) designs.push_back(to_string(d));
    root["designs"] = designs;
    root["sweep"] = spec.sweep;
    root["trials"] = spec.trials;
    root["master_seed"] = spec.master_seed;
    root["output_dir"] = spec.output_dir;
    root["workers"] = spec.workers;
    return root.dump(2) + "\n";
}

namespace
{

struct Record
{
    double sweep_value = 0.0;
    DesignKind design = DesignKind::tpc;
    int trial = 0;
    std::uint64_t seed = 0;
    double rate_bits = 0.0;
    double max_antenna_power = 0.0;
    double gamma = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    bool feasible = false;
    bool converged = true;
    double runtime_ms = 0.0;
    std::vector<double> antenna_powers; // kept for ccdf aggregation
};

struct DesignOutcome
{
    std::vector<cmat> precoders;
    std::vector<cmat> combiners;
    const AllocationResult* allocation;
};

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

RunOutputs run_experiment(const ExperimentSpec& spec)
{
    spec.validate();

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(spec.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + spec.output_dir + "'");

    const int n_sweep = static_cast<int>(spec.sweep.size());
    const int n_designs = static_cast<int>(spec.designs.size());
    const int trials = spec.trials;
    const bool sweep_is_snr =
        spec.experiment == ExperimentKind::se_vs_snr || spec.experiment == ExperimentKind::ccdf;
    const bool sweep_is_bandwidth = spec.experiment == ExperimentKind::se_vs_bandwidth ||
                                    spec.experiment == ExperimentKind::gamma_vs_bandwidth;
    const bool sweep_is_dimension = spec.experiment == ExperimentKind::gamma_vs_d;

    // records[(s * n_designs + d) * trials + t]
    std::vector<Record> records(static_cast<size_t>(n_sweep) * n_designs * trials);

    parallel_for(
        Exec::openmp, trials,
        [&](int trial) {
            const std::uint64_t seed = derive_seed(spec.master_seed, trial);

            ChannelRealization base_channel;
            if (!sweep_is_bandwidth)
                base_channel = generate_channel(spec.system, spec.channel, seed);

            // gamma bases for sweep-independent channels
            SubspaceBases trial_bases;
            if (!sweep_is_bandwidth && !sweep_is_dimension)
                trial_bases = channel_subspace_bases(base_channel.freq, spec.system.n_streams);
            else if (sweep_is_dimension)
            {
                int d_max = 1;
                for (double d : spec.sweep) d_max = std::max(d_max, static_cast<int>(d));
                trial_bases = channel_subspace_bases(base_channel.freq, d_max);
            }

            // For SNR sweeps the channel and its SVD are shared across points.
            ChannelSvd base_svd;
            if (!sweep_is_bandwidth)
                base_svd = channel_svd(base_channel.freq, spec.system.n_streams);

            for (int s = 0; s < n_sweep; ++s)
            {
                SystemConfig cfg = spec.system;
                ChannelParams params = spec.channel;

                const ChannelRealization* channel = &base_channel;
                ChannelRealization sweep_channel;
                const ChannelSvd* svd = &base_svd;
                ChannelSvd sweep_svd;

                if (sweep_is_snr) cfg.snr_db = spec.sweep[s];
                if (sweep_is_bandwidth)
                {
                    params.bandwidth_hz = spec.sweep[s];
                    sweep_channel = generate_channel(cfg, params, seed);
                    channel = &sweep_channel;
                    sweep_svd = channel_svd(sweep_channel.freq, cfg.n_streams);
                    svd = &sweep_svd;
                }

                double gamma = 0.0;
                if (sweep_is_bandwidth)
                {
                    const SubspaceBases bases = channel_subspace_bases(channel->freq, cfg.l_tx);
                    gamma = subspace_quality(channel->freq, bases.u_rx, bases.u_tx, cfg.l_tx);
                }
                else if (sweep_is_dimension)
                {
                    const int d = static_cast<int>(spec.sweep[s]);
                    gamma = subspace_quality(channel->freq, trial_bases.u_rx, trial_bases.u_tx, d);
                }
                else
                {
                    gamma = subspace_quality(channel->freq, trial_bases.u_rx, trial_bases.u_tx,
                                             cfg.n_streams);
                }

                // The PPC-upper design seeds the hybrid pipeline; computed at
                // most once per sweep point.
                DigitalDesign upper;
                bool have_upper = false;
                auto ensure_upper = [&]() {
                    if (!have_upper)
                    {
                        upper = design_ppc_upper(*svd, cfg);
                        have_upper = true;
                    }
                };

                for (int d = 0; d < n_designs; ++d)
                {
                    const auto t0 = std::chrono::steady_clock::now();
                    DesignOutcome outcome;
                    DigitalDesign tpc;
                    HybridDesign hybrid;
                    switch (spec.designs[d])
                    {
                        case DesignKind::tpc:
                            tpc = design_tpc(*svd, cfg);
                            outcome = {tpc.precoders, tpc.combiners, &tpc.allocation};
                            break;
                        case DesignKind::ppc_digital:
                            ensure_upper();
                            outcome = {upper.precoders, upper.combiners, &upper.allocation};
                            break;
                        case DesignKind::ppc_hybrid:
                            ensure_upper();
                            hybrid = design_hybrid(channel->freq, upper, cfg);
                            outcome = {hybrid.precoders(), hybrid.combiners(),
                                       &hybrid.allocation};
                            break;
                    }

                    Record rec;
                    rec.sweep_value = spec.sweep[s];
                    rec.design = spec.designs[d];
                    rec.trial = trial;
                    rec.seed = seed;
                    rec.rate_bits = spectral_efficiency(channel->freq, outcome.precoders,
                                                        outcome.combiners, cfg.snr_linear(),
                                                        cfg.n_streams);
                    const rvec powers = per_antenna_power(outcome.precoders, cfg.n_streams);
                    rec.max_antenna_power = powers.maxCoeff();
                    rec.antenna_powers.assign(powers.begin(), powers.end());
                    rec.gamma = gamma;
                    rec.kkt_residual = outcome.allocation->kkt_residual;
                    rec.iterations = outcome.allocation->iterations;
                    rec.feasible = outcome.allocation->feasible;
                    rec.converged = outcome.allocation->converged;
                    rec.runtime_ms = elapsed_ms(t0);
                    records[(static_cast<size_t>(s) * n_designs + d) * trials + trial] =
                        std::move(rec);
                }
            }
        },
        spec.workers);

    // --- records.csv ---
    RunOutputs outputs;
    outputs.records_csv = (fs::path(spec.output_dir) / "records.csv").string();
    outputs.summary_json = (fs::path(spec.output_dir) / "summary.json").string();
    outputs.resolved_config = (fs::path(spec.output_dir) / "resolved_config.json").string();

    std::ofstream csv(outputs.records_csv);
    if (!csv) throw IoError("cannot write '" + outputs.records_csv + "'");
    csv << "experiment,design,sweep_value,trial,seed,rate_bits,max_antenna_power,gamma,"
           "kkt_residual,runtime_ms\n";
    for (int s = 0; s < n_sweep; ++s)
        for (int d = 0; d < n_designs; ++d)
            for (int t = 0; t < trials; ++t)
            {
                const Record& r = records[(static_cast<size_t>(s) * n_designs + d) * trials + t];
                csv << to_string(spec.experiment) << ',' << to_string(r.design) << ','
                    << format_double(r.sweep_value) << ',' << r.trial << ',' << r.seed << ','
                    << format_double(r.rate_bits) << ',' << format_double(r.max_antenna_power)
                    << ',' << format_double(r.gamma) << ',' << format_double(r.kkt_residual)
                    << ',' << format_double(r.runtime_ms) << '\n';
            }
    csv.close();

    // --- summary.json ---
    const double budget_max = spec.system.budgets.maxCoeff();
    json summary;
    summary["experiment"] = to_string(spec.experiment);
    summary["trials"] = trials;
    json points = json::array();
    for (int s = 0; s < n_sweep; ++s)
    {
        json point;
        point["sweep_value"] = spec.sweep[s];
        json per_design = json::object();
        for (int d = 0; d < n_designs; ++d)
        {
            std::vector<double> rates(trials);
            int violations = 0;
            int warnings = 0;
            long total_iterations = 0;
            std::vector<double> antenna_samples;
            for (int t = 0; t < trials; ++t)
            {
                const Record& r = records[(static_cast<size_t>(s) * n_designs + d) * trials + t];
                rates[t] = r.rate_bits;
                bool violated = false;
                for (size_t j = 0; j < r.antenna_powers.size(); ++j)
                    if (r.antenna_powers[j] >
                        spec.system.budgets(static_cast<Eigen::Index>(j)) + 1e-8)
                        violated = true;
                violations += violated ? 1 : 0;
                warnings += r.converged ? 0 : 1;
                total_iterations += r.iterations;
                if (spec.experiment == ExperimentKind::ccdf)
                    antenna_samples.insert(antenna_samples.end(), r.antenna_powers.begin(),
                                           r.antenna_powers.end());
            }
            std::vector<double> sorted = rates;
            std::sort(sorted.begin(), sorted.end());
            const double mean =
                std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
            double var = 0.0;
            for (double r : sorted) var += (r - mean) * (r - mean);
            var = sorted.size() > 1 ? var / (sorted.size() - 1) : 0.0;
            const double median = sorted.size() % 2 == 1
                                      ? sorted[sorted.size() / 2]
                                      : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                               sorted[sorted.size() / 2]);
            json stats;
            stats["rate_mean"] = mean;
            stats["rate_median"] = median;
            stats["rate_std"] = std::sqrt(var);
            stats["constraint_violations"] = violations;
            stats["solver_warnings"] = warnings;
            stats["solver_iterations_mean"] = static_cast<double>(total_iterations) / trials;
            if (spec.experiment == ExperimentKind::ccdf)
            {
                const int grid_points = 512;
                rvec grid(grid_points);
                for (int i = 0; i < grid_points; ++i)
                    grid(i) = 1.5 * budget_max * i / (grid_points - 1);
                const rvec ccdf = empirical_ccdf(antenna_samples, grid);
                stats["ccdf_grid"] = std::vector<double>(grid.begin(), grid.end());
                stats["ccdf"] = std::vector<double>(ccdf.begin(), ccdf.end());
            }
            per_design[to_string(spec.designs[d])] = stats;
        }
        point["designs"] = per_design;
        points.push_back(point);
    }
    summary["points"] = points;

    std::ofstream sj(outputs.summary_json);
    if (!sj) throw IoError("cannot write '" + outputs.summary_json + "'");
    sj << summary.dump(2) << "\n";
    sj.close();

    std::ofstream rc(outputs.resolved_config);
    if (!rc) throw IoError("cannot write '" + outputs.resolved_config + "'");
    rc << resolved_config_json(spec);
    rc.close();

    return outputs;
}

} // namespace papc
