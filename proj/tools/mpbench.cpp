// Command-line harness for the MarcoPolo DMDP bandit library. All real work
// happens behind the C API in libmarcopolo; this binary only parses
// arguments, moves file contents in and out, and maps status codes to exit
// codes (0 ok, 2 parse, 3 run config, 4 oracle cap).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <marcopolo/capi.h>

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(2);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(3);
    }
    out << content;
}

int exit_code_for(int status) {
    switch (status) {
    case MP_OK:
        return 0;
    case MP_ERR_PARSE:
        return 2;
    case MP_ERR_ORACLE_CAP:
        return 4;
    case MP_ERR_CONFIG:
        return 3;
    default:
        return 3;
    }
}

[[noreturn]] void fail(int status) {
    std::cerr << "error: " << mp_last_error() << "\n";
    std::exit(exit_code_for(status));
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { mp_string_free(ptr); }
    std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        seeds.push_back(std::stoull(item));
    }
    return seeds;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MarcoPolo DMDP bandit simulator"};
    app.require_subcommand(1);

    // analyze <dmdp>
    std::string analyze_dmdp;
    int analyze_L = 0;
    auto* analyze = app.add_subcommand("analyze", "Structural analysis of a DMDP file");
    analyze->add_option("dmdp", analyze_dmdp, "DMDP JSON file")->required();
    analyze->add_option("--max-cycle-length,-L", analyze_L,
                        "Arm table cycle-length limit (default: number of states)");

    // run <config>
    std::string run_config;
    std::string run_seeds;
    std::string run_out_dir;
    std::int64_t run_tau = 0;
    std::int64_t run_max_enum = 0;
    auto* run = app.add_subcommand("run", "Run an experiment config, one CSV per seed");
    run->add_option("config", run_config, "Experiment config JSON file")->required();
    run->add_option("--seeds", run_seeds, "Comma-separated seed list override");
    run->add_option("--out-dir", run_out_dir, "Output directory override");
    run->add_option("--tau", run_tau, "Episode length override");
    run->add_option("--max-enum", run_max_enum, "Enumeration cap override");

    // oracle <dmdp>
    std::string oracle_dmdp, oracle_adversary, oracle_start, oracle_out;
    std::int64_t oracle_T = 0;
    int oracle_L = 0;
    std::int64_t oracle_max_enum = 1000000;
    bool oracle_fallback = false;
    auto* oracle = app.add_subcommand("oracle", "Hindsight optima for a DMDP and adversary");
    oracle->add_option("dmdp", oracle_dmdp, "DMDP JSON file")->required();
    oracle->add_option("--adversary", oracle_adversary, "Adversary spec JSON file")->required();
    oracle->add_option("--horizon,-T", oracle_T, "Number of rounds")->required();
    oracle->add_option("--max-cycle-length,-L", oracle_L,
                       "Competitor cycle-length limit (default: number of states)");
    oracle->add_option("--start", oracle_start, "Initial state name")->required();
    oracle->add_option("--max-enum", oracle_max_enum, "Policy/cycle enumeration cap");
    oracle->add_flag("--fallback-dp", oracle_fallback,
                     "Fall back to the cycle oracle when the policy space exceeds the cap");
    oracle->add_option("--out", oracle_out, "Write the report here instead of stdout");

    // decompose-selftest
    auto* selftest =
        app.add_subcommand("decompose-selftest", "Reconstruction checks for the decomposer");

    CLI11_PARSE(app, argc, argv);

    if (*analyze) {
        mp_dmdp* m = nullptr;
        int status = mp_dmdp_parse(read_file(analyze_dmdp).c_str(), &m);
        if (status != MP_OK)
            fail(status);
        OwnedString json;
        status = mp_analyze(m, analyze_L, &json.ptr);
        mp_dmdp_free(m);
        if (status != MP_OK)
            fail(status);
        std::cout << json.str();
        return 0;
    }

    if (*run) {
        mp_experiment* e = nullptr;
        const std::string base_dir = fs::path(run_config).parent_path().string();
        int status = mp_experiment_parse(read_file(run_config).c_str(), base_dir.c_str(), &e);
        if (status != MP_OK)
            fail(status);
        if (!run_seeds.empty()) {
            const auto seeds = parse_seed_list(run_seeds);
            status = mp_experiment_set_seeds(e, seeds.data(), static_cast<int>(seeds.size()));
            if (status != MP_OK)
                fail(status);
        }
        if (run_tau > 0 && (status = mp_experiment_set_tau(e, run_tau)) != MP_OK)
            fail(status);
        if (run_max_enum > 0 && (status = mp_experiment_set_max_enum(e, run_max_enum)) != MP_OK)
            fail(status);

        status = mp_experiment_run(e);
        if (status != MP_OK)
            fail(status);

        const fs::path out_dir =
            !run_out_dir.empty() ? fs::path(run_out_dir) : fs::path(mp_experiment_out_dir(e));
        fs::create_directories(out_dir);
        const std::string name = mp_experiment_name(e);

        const int num_seeds = mp_experiment_num_seeds(e);
        for (int i = 0; i < num_seeds; ++i) {
            std::uint64_t seed = 0;
            mp_experiment_seed_at(e, i, &seed);
            OwnedString csv;
            status = mp_experiment_seed_csv(e, i, &csv.ptr);
            if (status != MP_OK)
                fail(status);
            const fs::path file = out_dir / (name + "_seed" + std::to_string(seed) + ".csv");
            write_file(file, csv.str());
            std::cout << file.string() << "\n";
        }
        OwnedString summary;
        status = mp_experiment_summary(e, &summary.ptr);
        if (status != MP_OK)
            fail(status);
        const fs::path summary_file = out_dir / (name + "_summary.json");
        write_file(summary_file, summary.str());
        std::cout << summary_file.string() << "\n";
        mp_experiment_free(e);
        return 0;
    }

    if (*oracle) {
        mp_dmdp* m = nullptr;
        int status = mp_dmdp_parse(read_file(oracle_dmdp).c_str(), &m);
        if (status != MP_OK)
            fail(status);
        OwnedString json;
        status = mp_oracle(m, read_file(oracle_adversary).c_str(), oracle_T, oracle_L,
                           oracle_start.c_str(), oracle_fallback ? 1 : 0, oracle_max_enum,
                           &json.ptr);
        mp_dmdp_free(m);
        if (status != MP_OK)
            fail(status);
        if (oracle_out.empty())
            std::cout << json.str();
        else
            write_file(oracle_out, json.str());
        return 0;
    }

    if (*selftest) {
        OwnedString json;
        const int status = mp_decompose_selftest(&json.ptr);
        std::cout << json.str();
        if (status != MP_OK) {
            std::cerr << "decompose-selftest failed\n";
            return 1;
        }
        return 0;
    }

    return 0;
}
