#include "rqkd/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rqkd/bases.hpp"

namespace rqkd {

namespace {

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

long long parse_integer(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected an integer, got '" + text + "'");
    }
}

std::uint64_t parse_seed(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        const unsigned long long v = std::stoull(text, &used, 0);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected an unsigned 64-bit integer, got '" + text + "'");
    }
}

double parse_real(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("bad real");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field, "expected a real number, got '" + text + "'");
    }
}

int to_int(const std::string& field, const std::string& text) {
    const long long v = parse_integer(field, text);
    if (v < -1'000'000'000LL || v > 1'000'000'000LL) throw ConfigError(field, "value out of range");
    return static_cast<int>(v);
}

Mode parse_mode(const std::string& text) {
    for (Mode m : {Mode::two_party, Mode::pre_check, Mode::third_party_untrusted, Mode::third_party_trusted, Mode::chain}) {
        if (mode_name(m) == text) return m;
    }
    throw ConfigError("mode", "unknown mode '" + text + "'");
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string u64(std::uint64_t v) { return std::to_string(v); }

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + '"';
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::two_party: return "two_party";
        case Mode::pre_check: return "pre_check";
        case Mode::third_party_untrusted: return "third_party_untrusted";
        case Mode::third_party_trusted: return "third_party_trusted";
        case Mode::chain: return "chain";
    }
    return "unknown";
}

ConfigValues parse_config_text(const std::string& text) {
    ConfigValues values;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        values[normalize_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
    }
    return values;
}

ConfigValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentSpec spec_from_values(const ConfigValues& values) {
    ExperimentSpec spec;
    for (const auto& [raw_key, value] : values) {
        const auto key = normalize_key(raw_key);
        if (key == "mode") spec.mode = parse_mode(value);
        else if (key == "d") spec.d = to_int(key, value);
        else if (key == "m") spec.m = to_int(key, value);
        else if (key == "n") spec.n = to_int(key, value);
        else if (key == "trials") spec.trials = to_int(key, value);
        else if (key == "seed") spec.master_seed = parse_seed(key, value);
        else if (key == "channel") spec.channel = value;
        else if (key == "noise_p") spec.noise_p = parse_real(key, value);
        else if (key == "hops") spec.chain_hops = to_int(key, value);
        else if (key == "channel_hop") spec.channel_hop = to_int(key, value);
        else if (key == "threshold") spec.threshold = parse_real(key, value);
        else if (key == "out") spec.output_path = value;
        else if (key == "csv") spec.csv_path = value;
        else if (key == "transcript") spec.transcript_path = value;
        else if (key == "transcript_trial") spec.transcript_trial = to_int(key, value);
        else throw ConfigError(key, "unknown configuration key");
    }
    validate(spec);
    return spec;
}

ChannelModel make_channel(const std::string& name, double p, int d) {
    if (name == "ideal") return Ideal{};
    if (name == "depolarizing") return Depolarizing{p};
    if (name == "loss") return Loss{p};
    if (name == "substituted") return substituted_attack(d);
    if (name == "purified_cshift") return controlled_shift_attack(d);
    if (name == "purified_identity") return PurifiedAttack{UnitaryOp::identity(d * d), d, EveStrategy{std::nullopt, EveDecode::measure_computational}};
    throw ConfigError("channel", "unknown channel '" + name + "'");
}

namespace {

SessionConfig session_for(const ExperimentSpec& spec, std::uint64_t seed) {
    SessionConfig c;
    c.d = spec.d;
    c.m = spec.m;
    c.n = spec.n;
    c.abort_threshold = spec.threshold;
    c.check_mode = spec.mode == Mode::pre_check ? CheckMode::pre_measurement : CheckMode::final_digits;
    c.seed = seed;
    c.channel = make_channel(spec.channel, spec.noise_p, spec.d);
    return c;
}

ChainConfig chain_for(const ExperimentSpec& spec, std::uint64_t seed) {
    const auto base = session_for(spec, seed);
    auto chain = uniform_chain(base, spec.chain_hops);
    if (spec.channel_hop >= 0) {
        for (int h = 0; h < spec.chain_hops; ++h) {
            if (h != spec.channel_hop) chain.per_hop_channel[static_cast<std::size_t>(h)] = Ideal{};
        }
    }
    return chain;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw ConfigError("trials", "must be at least 1");
    if (!is_prime(spec.d)) throw ConfigError("d", "must be prime");
    if (spec.m < 2 || spec.m > max_mub_count(spec.d)) throw ConfigError("m", "must lie in [2, d + 1]");
    if (spec.n < 1) throw ConfigError("n", "must be at least 1");
    if (!(spec.threshold >= 0.0 && spec.threshold <= 1.0)) throw ConfigError("threshold", "must lie in [0, 1]");
    if (!(spec.noise_p >= 0.0 && spec.noise_p <= 1.0)) throw ConfigError("noise_p", "must lie in [0, 1]");
    if (spec.channel == "loss" && spec.noise_p >= 1.0) throw ConfigError("noise_p", "loss probability must be below 1");
    make_channel(spec.channel, spec.noise_p, spec.d);
    if ((spec.mode == Mode::third_party_trusted || spec.mode == Mode::third_party_untrusted) && spec.d != 2) {
        throw ConfigError("d", "third-party modes require d = 2");
    }
    if (spec.mode == Mode::chain) {
        if (spec.chain_hops < 1) throw ConfigError("hops", "must be at least 1");
        if (spec.channel_hop < -1 || spec.channel_hop >= spec.chain_hops) throw ConfigError("channel_hop", "must be -1 or a hop index");
    }
    if (spec.transcript_trial < 0 || spec.transcript_trial >= spec.trials) {
        throw ConfigError("transcript_trial", "must name an existing trial");
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
    return Rng(master_seed).child(static_cast<std::uint64_t>(trial)).seed();
}

KeyResult run_trial(const ExperimentSpec& spec, int trial) {
    const auto seed = trial_seed(spec.master_seed, trial);
    switch (spec.mode) {
        case Mode::two_party: return run_two_party(session_for(spec, seed));
        case Mode::pre_check: return run_pre_check(session_for(spec, seed));
        case Mode::third_party_untrusted: return run_third_party(session_for(spec, seed), false);
        case Mode::third_party_trusted: return run_third_party(session_for(spec, seed), true);
        case Mode::chain: return run_chain(chain_for(spec, seed));
    }
    throw std::logic_error("unhandled mode");
}

Aggregates aggregate(const std::vector<TrialRecord>& trials) {
    Aggregates a{};
    const auto n = static_cast<double>(trials.size());
    if (trials.empty()) return a;
    double aborts = 0.0;
    for (const auto& t : trials) {
        a.mean_error_rate += t.error_rate;
        aborts += t.aborted ? 1.0 : 0.0;
        a.agreement_fraction += t.agreement;
        a.mean_eve_match += t.eve_match;
        a.mean_recycled += static_cast<double>(t.recycled);
    }
    a.mean_error_rate /= n;
    a.abort_fraction = aborts / n;
    a.agreement_fraction /= n;
    a.mean_eve_match /= n;
    a.mean_recycled /= n;
    if (trials.size() > 1) {
        double ss = 0.0;
        for (const auto& t : trials) ss += (t.error_rate - a.mean_error_rate) * (t.error_rate - a.mean_error_rate);
        a.stddev_error_rate = std::sqrt(ss / (n - 1.0));
    }
    return a;
}

ExperimentSummary run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    ExperimentSummary summary{spec, {}, {}};
    for (int t = 0; t < spec.trials; ++t) {
        const auto result = run_trial(spec, t);
        const auto report = attack_report(result, result.eve_key);
        summary.trials.push_back({t, trial_seed(spec.master_seed, t), result.observed_error_rate, result.aborted,
                                  report.bob_alice_match_rate, report.eve_alice_match_rate, result.recycled_pairs});
        if (!spec.transcript_path.empty() && t == spec.transcript_trial) {
            std::ostringstream out;
            result.transcript.write(out);
            write_file(spec.transcript_path, out.str());
        }
    }
    summary.aggregates = aggregate(summary.trials);
    if (!spec.output_path.empty()) write_file(spec.output_path, summary_json(summary));
    if (!spec.csv_path.empty()) write_file(spec.csv_path, trials_csv(summary));
    return summary;
}

std::string summary_json(const ExperimentSummary& summary) {
    const auto& s = summary.spec;
    const auto& a = summary.aggregates;
    std::ostringstream out;
    out << "{\n";
    out << "  \"schema\": \"rqkd.experiment_summary.v1\",\n";
    out << "  \"config\": {\n";
    out << "    \"mode\": " << quoted(mode_name(s.mode)) << ",\n";
    out << "    \"d\": " << s.d << ",\n";
    out << "    \"m\": " << s.m << ",\n";
    out << "    \"n\": " << s.n << ",\n";
    out << "    \"threshold\": " << num(s.threshold) << ",\n";
    out << "    \"channel\": " << quoted(s.channel) << ",\n";
    out << "    \"noise_p\": " << num(s.noise_p) << ",\n";
    out << "    \"hops\": " << s.chain_hops << ",\n";
    out << "    \"channel_hop\": " << s.channel_hop << ",\n";
    out << "    \"trials\": " << s.trials << ",\n";
    out << "    \"master_seed\": " << u64(s.master_seed) << "\n";
    out << "  },\n";
    out << "  \"aggregates\": {\n";
    out << "    \"mean_error_rate\": " << num(a.mean_error_rate) << ",\n";
    out << "    \"stddev_error_rate\": " << num(a.stddev_error_rate) << ",\n";
    out << "    \"abort_fraction\": " << num(a.abort_fraction) << ",\n";
    out << "    \"agreement_fraction\": " << num(a.agreement_fraction) << ",\n";
    out << "    \"mean_eve_match\": " << num(a.mean_eve_match) << ",\n";
    out << "    \"mean_recycled\": " << num(a.mean_recycled) << "\n";
    out << "  },\n";
    out << "  \"trials\": [";
    for (std::size_t i = 0; i < summary.trials.size(); ++i) {
        const auto& t = summary.trials[i];
        out << (i ? ",\n" : "\n");
        out << "    {\"trial\": " << t.trial << ", \"seed\": " << u64(t.seed) << ", \"error_rate\": " << num(t.error_rate)
            << ", \"aborted\": " << (t.aborted ? "true" : "false") << ", \"agreement\": " << num(t.agreement)
            << ", \"eve_match\": " << num(t.eve_match) << ", \"recycled\": " << t.recycled << "}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

std::string trials_csv(const ExperimentSummary& summary) {
    std::ostringstream out;
    out << "trial,seed,error_rate,aborted,agreement,eve_match,recycled\n";
    for (const auto& t : summary.trials) {
        out << t.trial << ',' << u64(t.seed) << ',' << num(t.error_rate) << ',' << (t.aborted ? 1 : 0) << ','
            << num(t.agreement) << ',' << num(t.eve_match) << ',' << t.recycled << '\n';
    }
    return out.str();
}

void emit_transcript(const ExperimentSpec& spec, int trial_index, const std::string& path) {
    validate(spec);
    if (trial_index < 0 || trial_index >= spec.trials) throw ConfigError("transcript_trial", "must name an existing trial");
    std::ostringstream out;
    run_trial(spec, trial_index).transcript.write(out);
    write_file(path, out.str());
}

}  // namespace rqkd
