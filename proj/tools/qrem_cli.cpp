// Command-line front end: model synthesis, the mitigation pipeline, simulated
// experiments, observables, and benchmarking. All structured output is JSON
// (distributions, reports) or CSV (timing and error curves).
//
// Exit codes: 0 success, 2 input error, 3 resource-cap error, 4 numerical
// degeneracy.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrem/baselines.hpp"
#include "qrem/distribution.hpp"
#include "qrem/kernels.hpp"
#include "qrem/mitigator.hpp"
#include "qrem/mlae.hpp"
#include "qrem/noise_model.hpp"
#include "qrem/observables.hpp"
#include "qrem/sim.hpp"

using json = nlohmann::ordered_json;
using namespace qrem;

namespace {

double wall_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    out << text << "\n";
}

std::size_t env_cap(const char* name, std::size_t fallback) {
    const char* value = std::getenv(name);
    if (!value || !*value) return fallback;
    return static_cast<std::size_t>(std::strtoull(value, nullptr, 10));
}

CorrectionMethod parse_correction(const std::string& name) {
    if (name == "least-norm") return CorrectionMethod::kLeastNorm;
    if (name == "delta") return CorrectionMethod::kDelta;
    if (name == "delta-exact") return CorrectionMethod::kDeltaExact;
    throw InputError("unknown correction method: " + name);
}

TensorNoiseModel model_from_flags(const std::string& model_path, int n, double p01,
                                  double p10) {
    if (!model_path.empty()) return load_model(model_path);
    if (n <= 0) throw InputError("either --model or --n with noise flags is required");
    return synth_uniform(n, p01, p10);
}

json report_to_json(const MitigationReport& report) {
    return json{
        {"schema", "qrem-mitigation-report-1"},
        {"method", report.method},
        {"overhead", report.overhead},
        {"sigma", report.sigma},
        {"pre_correction_sum", report.pre_correction_sum},
        {"achieved_sum", report.achieved_sum},
        {"negative_mass_removed", report.negative_mass_removed},
        {"timings_s",
         {{"step1", report.elapsed.step1},
          {"step2", report.elapsed.step2},
          {"step3", report.elapsed.step3},
          {"total", report.elapsed.total}}},
    };
}

// --- mitigate ---------------------------------------------------------------

struct MitigateArgs {
    std::string counts_path;
    std::string model_path;
    std::string out_path = "-";
    std::string report_path;
    std::string method = "proposed";
    std::string correction = "least-norm";
    double mooney_threshold = 0.01;
    int delta_k = 1;
    int radius = 0;
    bool matrix_free = false;
    int threads = 0;
};

int cmd_mitigate(const MitigateArgs& args) {
    const auto y = load_distribution(args.counts_path);
    const auto model = load_model(args.model_path);
    MitigationReport report;
    if (args.method == "proposed") {
        MitigateOptions options;
        options.method = parse_correction(args.correction);
        options.delta_k = args.delta_k;
        options.hamming_radius = args.radius;
        options.matrix_free = args.matrix_free;
        options.threads = args.threads;
        options.subspace_cap = env_cap("QREM_SUBSPACE_CAP", kDefaultSubspaceCap);
        options.matrix_entry_cap = env_cap("QREM_MATRIX_ENTRY_CAP", kDefaultMatrixEntryCap);
        report = mitigate(y, model, options);
    } else if (args.method == "rigorous") {
        report = rigorous_mitigate(y, model);
    } else if (args.method == "mooney") {
        report = mooney_mitigate(y, model, args.mooney_threshold,
                                 env_cap("QREM_SUBSPACE_CAP", kDefaultSubspaceCap));
    } else {
        throw InputError("unknown method: " + args.method);
    }
    write_text(args.out_path, to_json_string(report.mitigated));
    if (!args.report_path.empty()) {
        write_text(args.report_path, report_to_json(report).dump(2));
    }
    std::cerr << "overhead M = " << report.overhead << ", sigma = " << report.sigma
              << ", total " << report.elapsed.total << "s\n";
    return 0;
}

// --- simulation subcommands -------------------------------------------------

SparseDistribution maybe_noise_and_sample(SparseDistribution dist,
                                          const std::optional<TensorNoiseModel>& model,
                                          std::uint64_t shots, std::uint64_t seed) {
    if (model) dist = apply_noise_exact(dist, *model);
    if (shots > 0) dist = sample_counts(dist, shots, seed);
    return dist;
}

int cmd_ghz_sim(int n, double p01, double p10, std::uint64_t shots, std::uint64_t seed,
                const std::string& out_path) {
    std::optional<TensorNoiseModel> model;
    if (p01 > 0 || p10 > 0) model = synth_uniform(n, p01, p10);
    const auto dist = maybe_noise_and_sample(ghz_ideal(n), model, shots, seed);
    write_text(out_path, to_json_string(dist));
    return 0;
}

int cmd_grover_sim(int n, int m, double b_max, double theta_flag, int residual_support,
                   double p01, double p10, std::uint64_t shots, std::uint64_t seed,
                   const std::string& out_path) {
    const double theta = theta_flag > 0 ? theta_flag : target_amplitude(n, b_max).theta;
    std::optional<TensorNoiseModel> model;
    if (p01 > 0 || p10 > 0) model = synth_uniform(n + 1, p01, p10);
    auto dist = grover_ideal(n, m, theta, residual_support, seed);
    dist = maybe_noise_and_sample(std::move(dist), model, shots, mix_seed({seed, 1}));
    write_text(out_path, to_json_string(dist));
    return 0;
}

int cmd_mqc_sim(int n, int n_angles, double p01, double p10, std::uint64_t shots,
                std::uint64_t seed, int residual_support, bool do_mitigate,
                const std::string& correction, int threads, const std::string& out_path) {
    if (n_angles <= 0) n_angles = 2 * n + 2;
    const auto ideal = mqc_ideal_signals(n, n_angles);
    std::optional<TensorNoiseModel> model;
    if (p01 > 0 || p10 > 0) model = synth_uniform(n, p01, p10);
    MitigateOptions options;
    options.method = parse_correction(correction);
    options.threads = threads;
    const std::string zeros(n, '0');
    const std::string ones(n, '1');

    const auto pop = maybe_noise_and_sample(ghz_ideal(n), model, shots, mix_seed({seed, 0}));
    double population;
    if (do_mitigate && model) {
        const auto rep = mitigate(pop, *model, options);
        population = rep.mitigated.at(zeros) + rep.mitigated.at(ones);
    } else {
        population = pop.at(zeros) + pop.at(ones);
    }

    std::vector<double> signals;
    for (int j = 0; j < n_angles; ++j) {
        SparseDistribution dist;
        const double s = ideal.signals[static_cast<std::size_t>(j)];
        if (model || shots > 0) {
            dist = peaked_distribution(n, s, residual_support,
                                       mix_seed({seed, 2, static_cast<std::uint64_t>(j)}));
            dist = maybe_noise_and_sample(std::move(dist), model, shots,
                                          mix_seed({seed, 3, static_cast<std::uint64_t>(j)}));
        } else {
            signals.push_back(s);
            continue;
        }
        if (do_mitigate && model) {
            const auto rep = mitigate(dist, *model, options);
            signals.push_back(rep.mitigated.at(zeros));
        } else {
            signals.push_back(dist.at(zeros));
        }
    }
    if (signals.empty()) signals = ideal.signals;

    json out = {{"schema", "qrem-mqc-signals-1"},
                {"n", n},
                {"population", population},
                {"angles", ideal.angles},
                {"signals", signals}};
    write_text(out_path, out.dump(2));
    return 0;
}

// --- observables ------------------------------------------------------------

int cmd_expval(const std::string& dist_path, const std::string& convention, double sigma,
               const std::string& out_path) {
    const auto dist = load_distribution(dist_path);
    const auto parity = parity_observable(dist.width);
    json out = {{"schema", "qrem-expval-1"}, {"n", dist.width}, {"observable", "parity"}};
    if (convention == "normalized") {
        const auto res = expval_normalized(dist, parity, sigma);
        out["method"] = "normalized";
        out["value"] = res.value;
        out["sigma"] = res.sigma;
    } else if (convention == "raw") {
        out["method"] = "raw";
        out["value"] = expval_raw(dist, parity);
        out["sigma"] = sigma;
    } else {
        throw InputError("unknown convention: " + convention);
    }
    write_text(out_path, out.dump(2));
    return 0;
}

int cmd_fidelity(const std::string& signals_path, const std::string& out_path) {
    std::ifstream in(signals_path);
    if (!in) throw InputError("cannot open signals file: " + signals_path);
    json data;
    try {
        data = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid signals JSON: ") + e.what());
    }
    if (!data.contains("n") || !data.contains("angles") || !data.contains("signals") ||
        !data.contains("population")) {
        throw InputError("signals file must contain n, population, angles, signals");
    }
    MqcSignalSet signals;
    signals.n = data["n"].get<int>();
    signals.angles = data["angles"].get<std::vector<double>>();
    signals.signals = data["signals"].get<std::vector<double>>();
    const auto res = mqc_fidelity(data["population"].get<double>(), signals);
    json out = {{"schema", "qrem-fidelity-1"},
                {"n", signals.n},
                {"fidelity", res.fidelity},
                {"coherence", res.coherence},
                {"i_n", res.i_n}};
    write_text(out_path, out.dump(2));
    return 0;
}

// --- mlae -------------------------------------------------------------------

int cmd_mlae_sim(const MlaeExperimentConfig& config, const std::string& out_path,
                 const std::string& csv_path) {
    const auto rep = run_experiment(config);
    json prefixes = json::array();
    for (const auto& pref : rep.prefixes) {
        prefixes.push_back({{"m", pref.iterations_last},
                            {"queries", pref.queries},
                            {"mean_theta_error", pref.mean_theta_error},
                            {"std_theta_error", pref.std_theta_error},
                            {"mean_amplitude_error", pref.mean_amplitude_error},
                            {"mean_zero_count", pref.mean_zero_count},
                            {"ideal_zero_count", pref.ideal_zero_count},
                            {"heisenberg_reference",
                             heisenberg_reference(rep.heisenberg_c,
                                                  static_cast<double>(pref.queries))}});
    }
    json out = {{"schema", "qrem-mlae-report-1"},
                {"n", config.n},
                {"b_max", config.b_max},
                {"noise_p", config.noise_p},
                {"trials", config.trials},
                {"seed", config.seed},
                {"theta_true", rep.theta_true},
                {"amplitude_true", rep.amplitude_true},
                {"heisenberg_c", rep.heisenberg_c},
                {"prefixes", prefixes}};
    write_text(out_path, out.dump(2));
    if (!csv_path.empty()) {
        std::string csv =
            "m,queries,mean_theta_error,std_theta_error,mean_amplitude_error,"
            "mean_zero_count,ideal_zero_count,heisenberg_reference";
        for (const auto& pref : rep.prefixes) {
            csv += "\n" + std::to_string(pref.iterations_last) + "," +
                   std::to_string(pref.queries) + "," +
                   std::to_string(pref.mean_theta_error) + "," +
                   std::to_string(pref.std_theta_error) + "," +
                   std::to_string(pref.mean_amplitude_error) + "," +
                   std::to_string(pref.mean_zero_count) + "," +
                   std::to_string(pref.ideal_zero_count) + "," +
                   std::to_string(heisenberg_reference(
                       rep.heisenberg_c, static_cast<double>(pref.queries)));
        }
        write_text(csv_path, csv);
    }
    return 0;
}

// --- bench ------------------------------------------------------------------

int cmd_bench(int n, const std::vector<std::size_t>& sizes, int threads,
              const std::string& correction, std::uint64_t seed,
              const std::string& out_path) {
    MitigateOptions options;
    options.method = parse_correction(correction);
    options.matrix_free = true;
    options.threads = threads;
    std::string csv =
        "size,step1_s,step2_s,step3_s,total_s,serial_kernel_s,parallel_kernel_s,"
        "rigorous_s";
    for (std::size_t size : sizes) {
        if (size < 1) throw InputError("bench sizes must be >= 1");
        const auto model = synth_uniform(n, 0.03, 0.03);
        const auto dist =
            peaked_distribution(n, 0.3, static_cast<int>(size) - 1, seed);
        const auto report = mitigate(dist, model, options);

        const auto subspace = dist.subspace();
        Eigen::VectorXd y(static_cast<Eigen::Index>(subspace.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            y[i] = dist.at(subspace[static_cast<std::size_t>(i)]);
        }
        const auto table = build_reduction_table(model, subspace);
        double t = wall_seconds();
        volatile double sink_s = apply_matrix_free_serial(table, y).one_norm;
        const double serial_s = wall_seconds() - t;
        t = wall_seconds();
        volatile double sink_p = apply_matrix_free_parallel(table, y, threads).one_norm;
        const double parallel_s = wall_seconds() - t;
        (void)sink_s;
        (void)sink_p;

        std::string rigorous = "";
        if (n <= kDefaultFullMatrixCap) {
            t = wall_seconds();
            const auto rig = rigorous_mitigate(dist, model);
            rigorous = std::to_string(wall_seconds() - t);
            (void)rig;
        }
        csv += "\n" + std::to_string(subspace.size()) + "," +
               std::to_string(report.elapsed.step1) + "," +
               std::to_string(report.elapsed.step2) + "," +
               std::to_string(report.elapsed.step3) + "," +
               std::to_string(report.elapsed.total) + "," +
               std::to_string(serial_s) + "," + std::to_string(parallel_s) + "," +
               rigorous;
        std::cerr << "size " << subspace.size() << ": total "
                  << report.elapsed.total << "s (serial kernel " << serial_s
                  << "s, parallel kernel " << parallel_s << "s)\n";
    }
    write_text(out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse readout-error mitigation for quantum measurement outcomes"};
    app.require_subcommand(1);

    // mitigate
    MitigateArgs margs;
    auto* mit = app.add_subcommand("mitigate", "Run the three-step mitigation pipeline");
    mit->add_option("--counts", margs.counts_path, "Counts/probabilities JSON")->required();
    mit->add_option("--model", margs.model_path, "Calibration JSON")->required();
    mit->add_option("-o,--out", margs.out_path, "Mitigated distribution JSON ('-' = stdout)");
    mit->add_option("--report", margs.report_path, "Report JSON path");
    mit->add_option("--method", margs.method, "proposed | rigorous | mooney")
        ->default_val("proposed");
    mit->add_option("--correction", margs.correction, "least-norm | delta | delta-exact")
        ->default_val("least-norm");
    mit->add_option("--delta-k", margs.delta_k, "Directions for delta-exact");
    mit->add_option("--mooney-threshold", margs.mooney_threshold,
                    "Truncation threshold (probability units)");
    mit->add_option("--radius", margs.radius, "Hamming-ball subspace extension radius");
    mit->add_flag("--matrix-free", margs.matrix_free, "O(|S|) memory route");
    mit->add_option("--threads", margs.threads, "Worker threads (0 = all)");

    // calibrate-synth
    int cs_n = 0;
    double cs_p01 = 0.0, cs_p10 = 0.0;
    std::string cs_out = "-";
    auto* cs = app.add_subcommand("calibrate-synth", "Write a synthetic uniform calibration");
    cs->add_option("--n", cs_n, "Qubit count")->required();
    cs->add_option("--noise-p01", cs_p01, "Flip probability 1 -> 0")->required();
    cs->add_option("--noise-p10", cs_p10, "Flip probability 0 -> 1")->required();
    cs->add_option("-o,--out", cs_out, "Calibration JSON path");

    // ghz-sim
    int ghz_n = 10;
    double ghz_p01 = 0.0, ghz_p10 = 0.0;
    std::uint64_t ghz_shots = 0, ghz_seed = 1;
    std::string ghz_out = "-";
    auto* ghz = app.add_subcommand("ghz-sim", "Simulated GHZ readout distribution");
    ghz->add_option("--n", ghz_n, "Qubit count");
    ghz->add_option("--noise-p01", ghz_p01, "Flip probability 1 -> 0");
    ghz->add_option("--noise-p10", ghz_p10, "Flip probability 0 -> 1");
    ghz->add_option("--shots", ghz_shots, "Shots (0 = exact probabilities)");
    ghz->add_option("--seed", ghz_seed, "Sampling seed");
    ghz->add_option("-o,--out", ghz_out, "Distribution JSON path");

    // mqc-sim
    int mqc_n = 10, mqc_angles = 0, mqc_residual = 64, mqc_threads = 0;
    double mqc_p01 = 0.0, mqc_p10 = 0.0;
    std::uint64_t mqc_shots = 0, mqc_seed = 1;
    bool mqc_mitigate = false;
    std::string mqc_correction = "least-norm", mqc_out = "-";
    auto* mqc = app.add_subcommand("mqc-sim", "Simulated coherence-signal scan");
    mqc->add_option("--n", mqc_n, "Qubit count");
    mqc->add_option("--angles", mqc_angles, "Angle count (default 2n+2)");
    mqc->add_option("--noise-p01", mqc_p01, "Flip probability 1 -> 0");
    mqc->add_option("--noise-p10", mqc_p10, "Flip probability 0 -> 1");
    mqc->add_option("--shots", mqc_shots, "Shots per angle (0 = exact)");
    mqc->add_option("--seed", mqc_seed, "Sampling seed");
    mqc->add_option("--residual-support", mqc_residual, "Residual support size");
    mqc->add_flag("--mitigate", mqc_mitigate, "Mitigate each measured distribution");
    mqc->add_option("--correction", mqc_correction, "least-norm | delta | delta-exact");
    mqc->add_option("--threads", mqc_threads, "Worker threads (0 = all)");
    mqc->add_option("-o,--out", mqc_out, "Signals JSON path");

    // grover-sim
    int gr_n = 10, gr_m = 1, gr_residual = 64;
    double gr_bmax = 0.5, gr_theta = -1.0, gr_p01 = 0.0, gr_p10 = 0.0;
    std::uint64_t gr_shots = 0, gr_seed = 1;
    std::string gr_out = "-";
    auto* grover = app.add_subcommand("grover-sim", "Amplitude-estimation outcome model");
    grover->add_option("--n", gr_n, "Discretization qubits (width is n+1)");
    grover->add_option("--m", gr_m, "Iteration count");
    grover->add_option("--bmax", gr_bmax, "Integration upper bound");
    grover->add_option("--theta", gr_theta, "Override angle (radians)");
    grover->add_option("--residual-support", gr_residual, "Residual support size");
    grover->add_option("--noise-p01", gr_p01, "Flip probability 1 -> 0");
    grover->add_option("--noise-p10", gr_p10, "Flip probability 0 -> 1");
    grover->add_option("--shots", gr_shots, "Shots (0 = exact probabilities)");
    grover->add_option("--seed", gr_seed, "Sampling seed");
    grover->add_option("-o,--out", gr_out, "Distribution JSON path");

    // expval
    std::string ev_dist, ev_convention = "normalized", ev_out = "-";
    double ev_sigma = 0.0;
    auto* ev = app.add_subcommand("expval", "Parity expectation value of a distribution");
    ev->add_option("--dist", ev_dist, "Distribution JSON")->required();
    ev->add_option("--convention", ev_convention, "normalized | raw");
    ev->add_option("--sigma", ev_sigma, "Error bar to attach");
    ev->add_option("-o,--out", ev_out, "Result JSON path");

    // fidelity
    std::string fid_signals, fid_out = "-";
    auto* fid = app.add_subcommand("fidelity", "GHZ fidelity from a coherence-signal scan");
    fid->add_option("--signals", fid_signals, "Signals JSON (from mqc-sim)")->required();
    fid->add_option("-o,--out", fid_out, "Result JSON path");

    // mlae-sim
    MlaeExperimentConfig mlae_config;
    std::string mlae_method = "raw", mlae_out = "-", mlae_csv;
    auto* mlae = app.add_subcommand("mlae-sim", "Amplitude-estimation experiment grid");
    mlae->add_option("--n", mlae_config.n, "Discretization qubits");
    mlae->add_option("--bmax", mlae_config.b_max, "Integration upper bound");
    mlae->add_option("--shots", mlae_config.schedule.shots_per_circuit, "Shots per circuit");
    mlae->add_option("--schedule", mlae_config.schedule.iterations, "Iteration schedule");
    mlae->add_option("--noise", mlae_config.noise_p, "Symmetric flip probability");
    mlae->add_option("--method", mlae_method,
                     "raw | proposed-least-norm | proposed-delta | rigorous | mooney[:t]");
    mlae->add_option("--trials", mlae_config.trials, "Trial count");
    mlae->add_option("--seed", mlae_config.seed, "Base seed");
    mlae->add_option("--residual-support", mlae_config.residual_support,
                     "Residual support size");
    mlae->add_option("--threads", mlae_config.threads, "Worker threads (0 = all)");
    mlae->add_option("-o,--out", mlae_out, "Report JSON path");
    mlae->add_option("--csv", mlae_csv, "Error-curve CSV path");

    // bench
    int bench_n = 65, bench_threads = 0;
    std::vector<std::size_t> bench_sizes = {1024, 2048, 4096, 8192};
    std::string bench_correction = "least-norm", bench_out = "-";
    std::uint64_t bench_seed = 909;
    auto* bench = app.add_subcommand("bench", "Pipeline and kernel timing table (CSV)");
    bench->add_option("--n", bench_n, "Qubit count");
    bench->add_option("--sizes", bench_sizes, "Subspace sizes");
    bench->add_option("--threads", bench_threads, "Worker threads (0 = all)");
    bench->add_option("--correction", bench_correction, "least-norm | delta | delta-exact");
    bench->add_option("--seed", bench_seed, "Distribution seed");
    bench->add_option("-o,--out", bench_out, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(mit)) return cmd_mitigate(margs);
        if (app.got_subcommand(cs)) {
            const auto model = synth_uniform(cs_n, cs_p01, cs_p10);
            write_text(cs_out, model_to_json_string(model));
            return 0;
        }
        if (app.got_subcommand(ghz)) {
            return cmd_ghz_sim(ghz_n, ghz_p01, ghz_p10, ghz_shots, ghz_seed, ghz_out);
        }
        if (app.got_subcommand(mqc)) {
            return cmd_mqc_sim(mqc_n, mqc_angles, mqc_p01, mqc_p10, mqc_shots, mqc_seed,
                               mqc_residual, mqc_mitigate, mqc_correction, mqc_threads,
                               mqc_out);
        }
        if (app.got_subcommand(grover)) {
            return cmd_grover_sim(gr_n, gr_m, gr_bmax, gr_theta, gr_residual, gr_p01,
                                  gr_p10, gr_shots, gr_seed, gr_out);
        }
        if (app.got_subcommand(ev)) return cmd_expval(ev_dist, ev_convention, ev_sigma, ev_out);
        if (app.got_subcommand(fid)) return cmd_fidelity(fid_signals, fid_out);
        if (app.got_subcommand(mlae)) {
            mlae_config.method =
                parse_mitigation_method(mlae_method, &mlae_config.mooney_threshold);
            return cmd_mlae_sim(mlae_config, mlae_out, mlae_csv);
        }
        if (app.got_subcommand(bench)) {
            return cmd_bench(bench_n, bench_sizes, bench_threads, bench_correction,
                             bench_seed, bench_out);
        }
    } catch (const CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
