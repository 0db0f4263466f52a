#pragma once

#include <string>

#include <json.hpp>

#include "edcp/qpke.hpp"

namespace edcp {

// Structured-text persistence. A quantum state cannot honestly survive a
// process boundary without its hidden description, so the full role stores
// the complete symbolic state (secret included) and is labeled
// SIMULATION-ONLY. The adversary-view role is the classical stand-in for
// no-cloning: it carries the public header and nothing else, and cannot be
// loaded back into a state.

inline constexpr int kSchemaVersion = 1;

enum class Role { Full, AdversaryView };

using Json = nlohmann::json;

Json keypair_to_json(const KeyPair& kp, Role role);
Json ciphertext_to_json(const Ciphertext& ct, Role role);
Json coset_state_to_json(const CosetState& state, Role role);

// Full-role reconstruction. resume_seed reseeds the revived challenger.
KeyPair keypair_from_json(const Json& j, u64 resume_seed);
Ciphertext ciphertext_from_json(const Json& j, u64 resume_seed);

void write_json_file(const Json& j, const std::string& path);
Json read_json_file(const std::string& path);

// Experiment output: config echo, per-trial rows, aggregates. The JSON record
// is fully deterministic for a given config and seed; wall-clock timing goes
// to stdout and the per-trial CSV only.
struct RunRecord {
    std::string command;
    Json config;
    Json trials = Json::array();
    Json aggregates = Json::object();
};

void write_run_record(const RunRecord& record, const std::string& path);
RunRecord read_run_record(const std::string& path);

// CSV columns: trial,seed,outcome,samples_used,elapsed_us
struct CsvRow {
    u64 trial = 0;
    u64 seed = 0;
    long long outcome = 0;
    u64 samples_used = 0;
    u64 elapsed_us = 0;
};
void write_trial_csv(const std::vector<CsvRow>& rows, const std::string& path);

}  // namespace edcp
