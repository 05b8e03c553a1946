#include "marcopolo/capi.h"

#include <cstring>
#include <string>

#include "marcopolo/bench.hpp"
#include "marcopolo/errors.hpp"

using namespace marcopolo;

struct mp_dmdp {
    NamedDmdp named;
};

struct mp_experiment {
    ExperimentConfig config;
    bool ran = false;
    ExperimentResult result;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        t_last_error.clear();
        return fn();
    } catch (const ParseError& e) {
        t_last_error = e.what();
        return MP_ERR_PARSE;
    } catch (const CapError& e) {
        t_last_error = e.what();
        return MP_ERR_ORACLE_CAP;
    } catch (const ConfigError& e) {
        t_last_error = e.what();
        return MP_ERR_CONFIG;
    } catch (const InputError& e) {
        t_last_error = e.what();
        return MP_ERR_INPUT;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return MP_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char* mp_version(void) { return "0.1.0"; }

const char* mp_last_error(void) { return t_last_error.c_str(); }

void mp_string_free(char* s) { delete[] s; }

int mp_dmdp_parse(const char* json_text, mp_dmdp** out) {
    return guarded([&]() {
        if (json_text == nullptr || out == nullptr)
            throw InputError("mp_dmdp_parse: null argument");
        *out = new mp_dmdp{parse_dmdp_json(json_text)};
        return MP_OK;
    });
}

void mp_dmdp_free(mp_dmdp* m) { delete m; }

int mp_dmdp_num_states(const mp_dmdp* m) {
    return m == nullptr ? -1 : m->named.dmdp.num_states();
}

int mp_dmdp_num_actions(const mp_dmdp* m) {
    return m == nullptr ? -1 : m->named.dmdp.num_actions();
}

int mp_analyze(const mp_dmdp* m, int max_cycle_length, char** json_out) {
    return guarded([&]() {
        if (m == nullptr || json_out == nullptr)
            throw InputError("mp_analyze: null argument");
        const int limit = max_cycle_length > 0 ? max_cycle_length : m->named.dmdp.num_states();
        *json_out = dup_string(analyze_json(m->named, limit));
        return MP_OK;
    });
}

int mp_oracle(const mp_dmdp* m, const char* adversary_json, int64_t horizon,
              int max_cycle_length, const char* start_state, int fallback_dp, int64_t max_enum,
              char** json_out) {
    return guarded([&]() {
        if (m == nullptr || adversary_json == nullptr || start_state == nullptr ||
            json_out == nullptr)
            throw InputError("mp_oracle: null argument");
        if (horizon < 1)
            throw InputError("mp_oracle: horizon must be positive");
        if (max_enum < 1)
            throw InputError("mp_oracle: max_enum must be positive");
        const AdversarySpec spec = parse_adversary_json(adversary_json, m->named);
        const State start = m->named.state_index(start_state);
        const int limit = max_cycle_length > 0 ? max_cycle_length : m->named.dmdp.num_states();
        *json_out = dup_string(oracle_json(m->named, spec, horizon, limit, start,
                                           fallback_dp != 0,
                                           static_cast<std::uint64_t>(max_enum)));
        return MP_OK;
    });
}

int mp_experiment_parse(const char* config_json, const char* base_dir, mp_experiment** out) {
    return guarded([&]() {
        if (config_json == nullptr || out == nullptr)
            throw InputError("mp_experiment_parse: null argument");
        *out = new mp_experiment{
            parse_experiment_config(config_json, base_dir == nullptr ? "" : base_dir)};
        return MP_OK;
    });
}

void mp_experiment_free(mp_experiment* e) { delete e; }

int mp_experiment_set_seeds(mp_experiment* e, const uint64_t* seeds, int count) {
    return guarded([&]() {
        if (e == nullptr || seeds == nullptr || count < 1)
            throw InputError("mp_experiment_set_seeds: need at least one seed");
        e->config.seeds.assign(seeds, seeds + count);
        e->ran = false;
        return MP_OK;
    });
}

int mp_experiment_set_tau(mp_experiment* e, int64_t tau) {
    return guarded([&]() {
        if (e == nullptr || tau < 1)
            throw InputError("mp_experiment_set_tau: tau must be positive");
        e->config.tau = tau;
        e->ran = false;
        return MP_OK;
    });
}

int mp_experiment_set_max_enum(mp_experiment* e, int64_t cap) {
    return guarded([&]() {
        if (e == nullptr || cap < 1)
            throw InputError("mp_experiment_set_max_enum: cap must be positive");
        e->config.max_enum = static_cast<std::uint64_t>(cap);
        e->ran = false;
        return MP_OK;
    });
}

int mp_experiment_run(mp_experiment* e) {
    return guarded([&]() {
        if (e == nullptr)
            throw InputError("mp_experiment_run: null experiment");
        e->result = run_experiment(e->config);
        e->ran = true;
        return MP_OK;
    });
}

const char* mp_experiment_name(const mp_experiment* e) {
    return e == nullptr ? "" : e->config.name.c_str();
}

const char* mp_experiment_out_dir(const mp_experiment* e) {
    return e == nullptr ? "" : e->config.out_dir.c_str();
}

int mp_experiment_num_seeds(const mp_experiment* e) {
    return e == nullptr ? -1 : static_cast<int>(e->config.seeds.size());
}

int mp_experiment_seed_at(const mp_experiment* e, int index, uint64_t* seed_out) {
    return guarded([&]() {
        if (e == nullptr || seed_out == nullptr)
            throw InputError("mp_experiment_seed_at: null argument");
        if (index < 0 || index >= static_cast<int>(e->config.seeds.size()))
            throw InputError("mp_experiment_seed_at: index out of range");
        *seed_out = e->config.seeds[static_cast<std::size_t>(index)];
        return MP_OK;
    });
}

int mp_experiment_seed_csv(const mp_experiment* e, int index, char** csv_out) {
    return guarded([&]() {
        if (e == nullptr || csv_out == nullptr)
            throw InputError("mp_experiment_seed_csv: null argument");
        if (!e->ran)
            throw InputError("mp_experiment_seed_csv: run the experiment first");
        if (index < 0 || index >= static_cast<int>(e->result.per_seed.size()))
            throw InputError("mp_experiment_seed_csv: index out of range");
        *csv_out = dup_string(e->result.per_seed[static_cast<std::size_t>(index)].csv);
        return MP_OK;
    });
}

int mp_experiment_summary(const mp_experiment* e, char** json_out) {
    return guarded([&]() {
        if (e == nullptr || json_out == nullptr)
            throw InputError("mp_experiment_summary: null argument");
        if (!e->ran)
            throw InputError("mp_experiment_summary: run the experiment first");
        *json_out = dup_string(e->result.summary_json);
        return MP_OK;
    });
}

int mp_decompose_selftest(char** json_out) {
    return guarded([&]() {
        if (json_out == nullptr)
            throw InputError("mp_decompose_selftest: null argument");
        bool ok = false;
        *json_out = dup_string(decompose_selftest_json(ok));
        return ok ? MP_OK : MP_ERR_INTERNAL;
    });
}

} // extern "C"
