#include "edcp/serialize.hpp"

#include <fstream>

namespace edcp {

namespace {

Json header_of(const EdcpParams& params) {
    return Json{{"n", params.n}, {"q", params.q.q}, {"r", params.r}, {"p", params.p}};
}

EdcpParams params_from_header(const Json& h) {
    return EdcpParams(h.at("n").get<std::size_t>(), Modulus(h.at("q").get<u64>()),
                      h.at("r").get<u64>(), h.at("p").get<u64>());
}

Json base_record(const char* kind, const EdcpParams& params, Role role) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    j["header"] = header_of(params);
    j["role"] = role == Role::Full ? "full" : "adversary-view";
    if (role == Role::Full) j["simulation_only"] = true;
    return j;
}

void check_record(const Json& j, const char* kind) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
        throw SchemaMismatch("record schema version mismatch");
    if (j.at("kind").get<std::string>() != kind)
        throw SchemaMismatch("record kind mismatch: expected " + std::string(kind));
    if (j.at("role").get<std::string>() != "full")
        throw SchemaMismatch("adversary-view records cannot reconstruct a state");
}

Json state_payload(const CosetState& state) {
    Json j;
    j["register"] = state.register_size();
    j["offset"] = state.offset().coords;
    j["secret_shift"] = state.secret_shift().coords;
    j["support"] = {{"stride", state.support().stride},
                    {"base", state.support().base},
                    {"count", state.support().count}};
    j["phase"] = {{"modulus", state.phase().modulus}, {"slope", state.phase().slope}};
    j["second_collapsed"] = state.second_collapsed();
    return j;
}

CosetState state_from_payload(const Json& j, const Challenger& challenger) {
    const u64 q = challenger.params().q.q;
    return restore_coset_state(
        challenger, j.at("register").get<u64>(),
        ZqVector(q, j.at("offset").get<std::vector<u64>>()),
        ZqVector(q, j.at("secret_shift").get<std::vector<u64>>()),
        {j.at("support").at("stride").get<u64>(), j.at("support").at("base").get<u64>(),
         j.at("support").at("count").get<u64>()},
        {j.at("phase").at("modulus").get<u64>(), j.at("phase").at("slope").get<u64>()},
        j.at("second_collapsed").get<bool>());
}

}  // namespace

Json coset_state_to_json(const CosetState& state, Role role) {
    Json j = base_record("coset_state", state.params(), role);
    if (role == Role::Full) j["state"] = state_payload(state);
    return j;
}

Json keypair_to_json(const KeyPair& kp, Role role) {
    Json j = base_record("keypair", kp.params, role);
    if (role == Role::Full) {
        j["secret"] = kp.secret.coords;
        j["public_state"] = state_payload(kp.public_state);
    }
    return j;
}

Json ciphertext_to_json(const Ciphertext& ct, Role role) {
    Json j = base_record("ciphertext", ct.params, role);
    if (role == Role::Full) {
        // the challenger secret is what lets the state exist classically
        j["challenger_secret"] = challenger_secret_of(ct.state).coords;
        j["state"] = state_payload(ct.state);
    }
    return j;
}

KeyPair keypair_from_json(const Json& j, u64 resume_seed) {
    check_record(j, "keypair");
    EdcpParams params = params_from_header(j.at("header"));
    ZqVector secret(params.q.q, j.at("secret").get<std::vector<u64>>());
    Challenger challenger(params, secret, resume_seed);
    CosetState pk = state_from_payload(j.at("public_state"), challenger);
    return KeyPair{std::move(secret), std::move(pk), params, std::move(challenger)};
}

Ciphertext ciphertext_from_json(const Json& j, u64 resume_seed) {
    check_record(j, "ciphertext");
    EdcpParams params = params_from_header(j.at("header"));
    if (!j.contains("challenger_secret"))
        throw SchemaMismatch("ciphertext record lacks the challenger secret");
    Challenger challenger(params,
                          ZqVector(params.q.q, j.at("challenger_secret").get<std::vector<u64>>()),
                          resume_seed);
    return Ciphertext{state_from_payload(j.at("state"), challenger), params};
}

void write_json_file(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaMismatch(std::string("malformed record: ") + e.what());
    }
    return j;
}

void write_run_record(const RunRecord& record, const std::string& path) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "run_record";
    j["command"] = record.command;
    j["config"] = record.config;
    j["trials"] = record.trials;
    j["aggregates"] = record.aggregates;
    write_json_file(j, path);
}

RunRecord read_run_record(const std::string& path) {
    Json j = read_json_file(path);
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
        throw SchemaMismatch("run record schema version mismatch");
    if (j.at("kind").get<std::string>() != "run_record")
        throw SchemaMismatch("not a run record");
    RunRecord out;
    out.command = j.at("command").get<std::string>();
    out.config = j.at("config");
    out.trials = j.at("trials");
    out.aggregates = j.at("aggregates");
    return out;
}

void write_trial_csv(const std::vector<CsvRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "trial,seed,outcome,samples_used,elapsed_us\n";
    for (const auto& r : rows)
        out << r.trial << ',' << r.seed << ',' << r.outcome << ',' << r.samples_used << ','
            << r.elapsed_us << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace edcp
