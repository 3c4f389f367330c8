#pragma once

// Batch runner: seeded ensembles of sessions with machine-readable output.
//
// Configuration is flat `key = value` text ('#' starts a comment). Keys:
//   mode          two_party | pre_check | third_party_untrusted | third_party_trusted | chain
//   d, m, n       dimension, number of bases, key length
//   trials        number of sessions
//   seed          master seed; trial i runs with Rng(seed).child(i).seed()
//   channel       ideal | depolarizing | loss | substituted | purified_cshift | purified_identity
//   noise_p       probability for depolarizing / loss
//   hops          chain length (mode = chain)
//   channel_hop   chain only: index of the single hop that uses `channel`
//                 (others ideal); -1 (default) applies it to every hop
//   threshold     abort threshold on the observed error rate
//   out           summary JSON path
//   csv           per-trial CSV path (optional)
//   transcript    transcript path for one trial (optional)
//   transcript_trial  which trial's transcript to write (default 0)
// Dashes and underscores in keys are interchangeable.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqkd/protocol.hpp"

namespace rqkd {

struct ConfigError : std::invalid_argument {
    ConfigError(const std::string& field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_name(field) {}
    std::string field_name;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { two_party, pre_check, third_party_untrusted, third_party_trusted, chain };

std::string mode_name(Mode mode);

struct ExperimentSpec {
    Mode mode = Mode::two_party;
    int d = 2;
    int m = 2;
    int n = 16;
    double threshold = 0.05;
    std::string channel = "ideal";
    double noise_p = 0.0;
    int chain_hops = 1;
    int channel_hop = -1;
    int trials = 1;
    std::uint64_t master_seed = 0;
    std::string output_path;
    std::string csv_path;
    std::string transcript_path;
    int transcript_trial = 0;
};

using ConfigValues = std::map<std::string, std::string>;

ConfigValues parse_config_text(const std::string& text);
ConfigValues read_config_file(const std::string& path);
ExperimentSpec spec_from_values(const ConfigValues& values);

// Throws ConfigError naming the first invalid field.
void validate(const ExperimentSpec& spec);

ChannelModel make_channel(const std::string& name, double p, int d);

std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

KeyResult run_trial(const ExperimentSpec& spec, int trial);

struct TrialRecord {
    int trial;
    std::uint64_t seed;
    double error_rate;
    bool aborted;
    double agreement;  // fraction of raw-key dits where Bob matches Alice
    double eve_match;  // Eve's match rate with Alice's key (1/d when she holds nothing)
    std::size_t recycled;
};

struct Aggregates {
    double mean_error_rate;
    double stddev_error_rate;  // sample standard deviation; 0 for one trial
    double abort_fraction;
    double agreement_fraction;  // mean of per-trial agreement
    double mean_eve_match;
    double mean_recycled;
};

struct ExperimentSummary {
    ExperimentSpec spec;
    std::vector<TrialRecord> trials;
    Aggregates aggregates;
};

Aggregates aggregate(const std::vector<TrialRecord>& trials);

/// Runs every trial and writes the summary (and CSV/transcript when
/// configured). Output rows are in trial order.
ExperimentSummary run_experiment(const ExperimentSpec& spec);

std::string summary_json(const ExperimentSummary& summary);
std::string trials_csv(const ExperimentSummary& summary);

void emit_transcript(const ExperimentSpec& spec, int trial_index, const std::string& path);

// Command-line entry point. Exit codes: 0 success, 2 configuration error, 3 I/O error.
int cli_main(int argc, char** argv);

}  // namespace rqkd
