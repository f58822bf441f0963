#include "blockade/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "blockade/oracle.hpp"
#include "blockade/pulse_design.hpp"

namespace blockade {

namespace {

std::string sci(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

std::string timestamp_line(const char* what) {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# blockade-sim ") + what + " written " + buf + "\n";
}

std::size_t max_basis_guard() {
    if (const char* env = std::getenv("BLOCKADE_SIM_MAX_BASIS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultMaxBasisSize;
}

std::filesystem::path output_dir(const RunConfig& config, const RunOptions& options) {
    std::filesystem::path dir =
        options.out_dir.empty() ? config.output.directory : options.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

std::string trajectory_csv(const Trajectory& traj, bool with_timestamp) {
    std::ostringstream os;
    if (with_timestamp) os << timestamp_line("trajectory");
    os << "time,p_ground,p_single,p_rydberg1,p_rydberg2plus,p_multi_signal,norm\n";
    const int n_atoms = traj.basis->n_atoms();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const DenseVector& psi = traj.states[i];
        const SymmetricBasis& basis = *traj.basis;
        auto pop = [&](const LabelPredicate& pred) {
            return population(psi, basis, pred);
        };
        os << sci(traj.times[i]) << ','
           << sci(pop([&](const BasisLabel& l) {
                  return l.n_g == n_atoms && l.n_ph == 0;
              }))
           << ','
           << sci(pop([](const BasisLabel& l) {
                  return l.n_s == 1 && l.n_ph == 1 && l.n_r == 0;
              }))
           << ',' << sci(pop([](const BasisLabel& l) { return l.n_r == 1; })) << ','
           << sci(pop([](const BasisLabel& l) { return l.n_r >= 2; })) << ','
           << sci(pop([](const BasisLabel& l) { return l.n_s >= 2 || l.n_ph >= 2; }))
           << ',' << sci(traj.norms[i]) << '\n';
    }
    return os.str();
}

int fail(std::ostream& err, const std::string& message) {
    err << "ERROR: " << message << "\n";
    return 1;
}

}  // namespace

std::string report_csv_header() {
    return "success_probability,fidelity,double_excitation_max,double_signal,"
           "single_rydberg_max,loss_probability,pulse_area,rsn,"
           "fitted_collective_rabi";
}

std::string report_csv_row(const RunReport& r) {
    std::ostringstream os;
    os << sci(r.success_probability) << ',' << sci(r.fidelity) << ','
       << sci(r.double_excitation_max) << ',' << sci(r.double_signal_final) << ','
       << sci(r.single_rydberg_max) << ',' << sci(r.loss_probability) << ','
       << sci(r.pulse_area) << ',' << sci(r.rsn) << ','
       << sci(r.fitted_collective_rabi);
    return os.str();
}

SimulateResult simulate_once(const RunConfig& config) {
    SimulateResult result;
    const ValidationReport validation =
        validate_params(config.physical, config.flags, &config.envelope);
    if (!validation.ok()) {
        std::string joined;
        for (const auto& e : validation.errors) {
            if (!joined.empty()) joined += "; ";
            joined += e;
        }
        throw std::runtime_error(joined);
    }
    result.warnings = validation.warnings;

    const SimulationGrid grid = config.resolve_grid();
    const HamiltonianModel model = build_model(config.physical, config.flags,
                                               config.envelope, grid, nullptr,
                                               max_basis_guard());
    const DenseVector psi0 =
        make_state(model.basis, {config.physical.n_atoms, 0, 0, 0}).amps;
    result.trajectory = propagate(model, psi0, grid);
    result.report =
        make_run_report(result.trajectory, config.physical, config.envelope, grid);
    return result;
}

int run_simulate(const RunConfig& config, const RunOptions& options,
                 std::ostream& log, std::ostream& err) {
    try {
        SimulateResult result = simulate_once(config);
        for (const auto& w : result.warnings) log << "warning: " << w << "\n";

        const auto dir = output_dir(config, options);
        std::string csv;
        if (!options.no_timestamp) csv += timestamp_line("report");
        csv += report_csv_header() + "\n" + report_csv_row(result.report) + "\n";
        write_file(dir / "report.csv", csv);
        if (config.output.trajectory)
            write_file(dir / "trajectory.csv",
                       trajectory_csv(result.trajectory, !options.no_timestamp));

        log << "tier=" << tier_name(config.flags.tier)
            << " n_atoms=" << config.physical.n_atoms
            << " success=" << sci(result.report.success_probability)
            << " p_d=" << sci(result.report.double_excitation_max)
            << " loss=" << sci(result.report.loss_probability) << "\n";
        log << "wrote " << (dir / "report.csv").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

int run_sweep(const RunConfig& config, const RunOptions& options, std::ostream& log,
              std::ostream& err) {
    try {
        if (config.sweep.parameter.empty())
            throw std::runtime_error("sweep needs [sweep] parameter and values");
        if (config.sweep.values.empty())
            throw std::runtime_error("sweep needs a nonempty values list");

        const std::size_t n_runs = config.sweep.values.size();
        std::vector<std::string> rows(n_runs);
        std::vector<std::string> errors(n_runs);

        // Workers claim rows by index; output order is the value order
        // no matter how execution interleaves.
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned n_jobs = options.jobs > 0
                                    ? static_cast<unsigned>(options.jobs)
                                    : hw;
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_runs) return;
                RunConfig local = config;
                std::string set_error;
                if (!apply_sweep_value(local, config.sweep.parameter,
                                       config.sweep.values[i], &set_error)) {
                    errors[i] = set_error;
                    continue;
                }
                try {
                    const SimulateResult result = simulate_once(local);
                    rows[i] = sci(config.sweep.values[i]) + "," +
                              report_csv_row(result.report);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned j = 1; j < n_jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        std::string csv;
        if (!options.no_timestamp) csv += timestamp_line("sweep");
        csv += config.sweep.parameter + "," + report_csv_header() + "\n";
        bool any_failed = false;
        for (std::size_t i = 0; i < n_runs; ++i) {
            if (!errors[i].empty()) {
                any_failed = true;
                csv += sci(config.sweep.values[i]) + ",nan,nan,nan,nan,nan,nan,nan,nan,nan\n";
            } else {
                csv += rows[i] + "\n";
            }
        }
        const auto dir = output_dir(config, options);
        write_file(dir / "sweep.csv", csv);
        log << "wrote " << (dir / "sweep.csv").string() << " (" << n_runs
            << " rows)\n";
        if (any_failed) {
            for (std::size_t i = 0; i < n_runs; ++i)
                if (!errors[i].empty())
                    err << "ERROR: sweep row " << config.sweep.parameter << " = "
                        << config.sweep.values[i] << ": " << errors[i] << "\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

int run_design_pulse(const RunConfig& config, const RunOptions& options,
                     std::ostream& log, std::ostream& err) {
    try {
        if (config.flags.tier == ModelTier::full)
            throw std::runtime_error(
                "design-pulse runs in the two_level or raman tier");
        const FreeParameter free_param = config.design.free_parameter == "amplitude"
                                             ? FreeParameter::amplitude
                                             : FreeParameter::duration;
        std::optional<std::pair<double, double>> bracket;
        if (config.design.bracket_lo || config.design.bracket_hi)
            bracket = std::make_pair(config.design.bracket_lo.value_or(0.0),
                                     config.design.bracket_hi.value_or(0.0));

        const PiPulseResult result = solve_pi_pulse(
            config.envelope, free_param, config.physical, config.flags.tier, bracket);
        for (const auto& w : result.warnings) log << "warning: " << w << "\n";

        const std::string fragment = envelope_fragment(result.envelope);
        const auto dir = output_dir(config, options);
        write_file(dir / "designed_envelope.toml", fragment);
        log << fragment;
        log << "area = " << sci(result.area) << " rad (target " << sci(0.5 * M_PI)
            << ")\n";
        log << "transfer = " << sci(result.transfer) << " in tier "
            << tier_name(config.flags.tier) << "\n";
        log << "wrote " << (dir / "designed_envelope.toml").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

int run_validate(const RunConfig& config, const RunOptions& options,
                 std::ostream& log, std::ostream& err) {
    (void)options;
    try {
        const double deviation_threshold = 1e-8;
        const double residual_threshold = 1e-10;
        bool passed = true;

        // Deterministic family of smooth drives; the spread of parameters
        // exercises drive, emission and blockade terms together.
        for (int n = 1; n <= 5; ++n) {
            PhysicalParams p = config.physical;
            p.n_atoms = n;
            p.compensate_stark = true;
            const double amp = 8.0 + 3.0 * n;
            const PulseEnvelope env =
                PulseEnvelope::make_gaussian(amp, 0.5, 0.25, 0.07);

            ModelFlags flags;
            flags.tier = ModelTier::full;
            flags.n_s_max = n;
            flags.n_r_max = n;
            flags.n_photon_max = std::min(n, FullBasis::kMaxPhotons);

            const SimulationGrid grid = make_grid(p, env, 0.0, 0.5);
            const HamiltonianModel model = build_model(p, flags, env, grid);
            const DenseVector psi0 = make_state(model.basis, {n, 0, 0, 0}).amps;
            const Trajectory sym = propagate(model, psi0, grid);

            const OracleModel oracle =
                oracle_build_model(p, env, flags.n_photon_max);
            const FullTrajectory full =
                oracle_propagate(oracle, oracle_ground_state(oracle.basis), grid);

            const CompareReport report = compare(sym, full, oracle.basis);
            const bool row_ok = report.max_deviation < deviation_threshold &&
                                report.max_residual < residual_threshold;
            passed = passed && row_ok;
            log << "n_atoms=" << n << " max_deviation=" << sci(report.max_deviation)
                << " residual=" << sci(report.max_residual)
                << (row_ok ? " ok" : " FAIL") << "\n";
        }
        if (!passed) {
            err << "ERROR: oracle comparison exceeded thresholds\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

int run_rsn(const RunConfig& config, const RunOptions& options, std::ostream& log,
            std::ostream& err) {
    (void)options;
    try {
        const PhysicalParams& p = config.physical;
        log << "R_sn = " << sci(signal_to_noise(p.density, p.length, p.wavelength))
            << " (rho = " << sci(p.density) << " um^-3, L = " << sci(p.length)
            << " um, lambda = " << sci(p.wavelength) << " um)\n";
        // Some sources quote densities as 3*rho; print that reading too so
        // both conventions are visible side by side.
        log << "R_sn = " << sci(signal_to_noise(p.density / 3.0, p.length, p.wavelength))
            << " under the alternate reading density = 3*rho (rho = "
            << sci(p.density / 3.0) << " um^-3)\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

}  // namespace blockade
