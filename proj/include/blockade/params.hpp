#ifndef BLOCKADE_PARAMS_HPP
#define BLOCKADE_PARAMS_HPP

#include <complex>
#include <string>
#include <vector>

namespace blockade {

using cplx = std::complex<double>;

// Unit system: hbar = 1, rates and energies in rad/us, times in us,
// lengths in um. Keeps every quantity O(1)..O(1e4) for the regimes of
// interest.

struct PhysicalParams {
    int n_atoms = 4;                 // N_a
    double detuning = 2000.0;        // Delta = omega_r - omega_0
    double rydberg_linewidth = 0.0;  // Gamma, natural width of |r>
    double signal_coupling = 10.0;   // g_s, forward signal-mode coupling
    double blockade_shift = 0.0;     // B, uniform pairwise Rydberg-Rydberg shift
    double density = 333.33;         // rho, atoms/um^3
    double length = 8.0;             // L, ensemble length along z
    double wavelength = 0.5;         // lambda of the signal transition
    bool compensate_stark = true;    // absorb the pump Stark phase into the frame
};

enum class EnvelopeFamily { square, gaussian, table };

// Time-dependent pump amplitude Omega(t), spatially uniform across the
// ensemble. Square support is [0, duration]; gaussian is evaluated
// everywhere; table is linearly interpolated and 0 outside its range.
struct PulseEnvelope {
    EnvelopeFamily family = EnvelopeFamily::square;
    double amplitude = 40.0;  // peak |Omega|
    double duration = 0.1;    // T
    double center = 0.05;     // gaussian only
    double width = 0.02;      // gaussian only
    std::vector<double> sample_times;  // table only, strictly increasing
    std::vector<cplx> sample_values;   // table only, same length

    static PulseEnvelope make_square(double amplitude, double duration);
    static PulseEnvelope make_gaussian(double amplitude, double duration,
                                       double center, double width);
    static PulseEnvelope make_table(std::vector<double> times,
                                    std::vector<cplx> values);
};

// Pure: identical (env, t) always returns the identical value.
cplx sample_envelope(const PulseEnvelope& env, double t);

double peak_amplitude(const PulseEnvelope& env);

struct SimulationGrid {
    double t_start = 0.0;
    double t_end = 0.1;
    double dt = 1e-4;
    int record_stride = 1;

    long n_steps() const;
    double time_at(long step) const { return t_start + step * dt; }
};

// 0.01 rad per step of the fastest scale in the model.
double default_dt(const PhysicalParams& p, const PulseEnvelope& env);

// Builds a grid for [t_start, t_end]. For square envelopes the step is
// shrunk so the pulse edge falls on a node; integrating across the
// discontinuity would degrade the propagator to first order.
SimulationGrid make_grid(const PhysicalParams& p, const PulseEnvelope& env,
                         double t_start, double t_end, double dt_hint = 0.0,
                         int record_stride = 0);

enum class ModelTier { full, raman, two_level };

struct ModelFlags {
    ModelTier tier = ModelTier::full;
    bool include_decay = false;
    int n_photon_max = 2;
    int n_s_max = 2;
    int n_r_max = 2;
};

struct ValidationReport {
    std::vector<std::string> errors;    // abort model construction
    std::vector<std::string> warnings;  // advisory only
    bool ok() const { return errors.empty(); }
};

// Hard errors: degenerate atom number, nonfinite or negative rates,
// zero detuning with a tier that eliminates |r>. Warnings: questionable
// adiabaticity (|Delta| < 10*Gamma or < 10*Omega_peak) and violation of
// the dilute condition k/rho^(1/3) >= 1.
ValidationReport validate_params(const PhysicalParams& p, const ModelFlags& f,
                                 const PulseEnvelope* env = nullptr);

const char* tier_name(ModelTier tier);
bool parse_tier(const std::string& text, ModelTier& out);
const char* family_name(EnvelopeFamily family);
bool parse_family(const std::string& text, EnvelopeFamily& out);

}  // namespace blockade

#endif
