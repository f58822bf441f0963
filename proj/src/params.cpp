#include "blockade/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace blockade {

PulseEnvelope PulseEnvelope::make_square(double amplitude, double duration) {
    PulseEnvelope env;
    env.family = EnvelopeFamily::square;
    env.amplitude = amplitude;
    env.duration = duration;
    return env;
}

PulseEnvelope PulseEnvelope::make_gaussian(double amplitude, double duration,
                                           double center, double width) {
    PulseEnvelope env;
    env.family = EnvelopeFamily::gaussian;
    env.amplitude = amplitude;
    env.duration = duration;
    env.center = center;
    env.width = width;
    return env;
}

PulseEnvelope PulseEnvelope::make_table(std::vector<double> times,
                                        std::vector<cplx> values) {
    if (times.size() != values.size() || times.empty())
        throw std::invalid_argument("table envelope needs matching, nonempty samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("table envelope times must be strictly increasing");
    PulseEnvelope env;
    env.family = EnvelopeFamily::table;
    env.amplitude = 0.0;
    for (const cplx& v : values) env.amplitude = std::max(env.amplitude, std::abs(v));
    env.duration = times.back() - times.front();
    env.sample_times = std::move(times);
    env.sample_values = std::move(values);
    return env;
}

cplx sample_envelope(const PulseEnvelope& env, double t) {
    switch (env.family) {
        case EnvelopeFamily::square:
            return (t >= 0.0 && t <= env.duration) ? cplx(env.amplitude, 0.0)
                                                   : cplx(0.0, 0.0);
        case EnvelopeFamily::gaussian: {
            const double u = (t - env.center) / env.width;
            return cplx(env.amplitude * std::exp(-0.5 * u * u), 0.0);
        }
        case EnvelopeFamily::table: {
            const auto& ts = env.sample_times;
            if (ts.empty() || t < ts.front() || t > ts.back()) return cplx(0.0, 0.0);
            auto it = std::lower_bound(ts.begin(), ts.end(), t);
            std::size_t hi = static_cast<std::size_t>(it - ts.begin());
            if (hi < ts.size() && ts[hi] == t) return env.sample_values[hi];  // exact node
            std::size_t lo = hi - 1;
            const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
            return env.sample_values[lo] * (1.0 - w) + env.sample_values[hi] * w;
        }
    }
    return cplx(0.0, 0.0);
}

double peak_amplitude(const PulseEnvelope& env) { return env.amplitude; }

long SimulationGrid::n_steps() const {
    return std::lround((t_end - t_start) / dt);
}

double default_dt(const PhysicalParams& p, const PulseEnvelope& env) {
    const double scale =
        std::max({std::abs(p.detuning), p.blockade_shift, peak_amplitude(env),
                  p.signal_coupling * std::sqrt(static_cast<double>(p.n_atoms)),
                  p.rydberg_linewidth, 1.0});
    return 0.01 / scale;
}

SimulationGrid make_grid(const PhysicalParams& p, const PulseEnvelope& env,
                         double t_start, double t_end, double dt_hint,
                         int record_stride) {
    if (!(t_end > t_start)) throw std::invalid_argument("grid needs t_end > t_start");
    double dt = dt_hint > 0.0 ? dt_hint : default_dt(p, env);

    SimulationGrid grid;
    grid.t_start = t_start;
    if (env.family == EnvelopeFamily::square && env.duration > 0.0 &&
        t_start <= 0.0 && t_end >= env.duration) {
        // Snap dt so both edges of [0, duration] land on nodes.
        const long m = std::max(1L, static_cast<long>(std::ceil(env.duration / dt)));
        dt = env.duration / static_cast<double>(m);
        if (t_start < 0.0) {
            const long k = static_cast<long>(std::ceil(-t_start / dt));
            grid.t_start = -static_cast<double>(k) * dt;
        }
    }
    const long n = std::max(1L, static_cast<long>(std::ceil((t_end - grid.t_start) / dt - 1e-9)));
    grid.dt = dt;
    grid.t_end = grid.t_start + static_cast<double>(n) * dt;
    grid.record_stride = record_stride > 0
                             ? record_stride
                             : std::max(1, static_cast<int>(n / 2000));
    return grid;
}

namespace {

bool finite(double x) { return std::isfinite(x); }

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

ValidationReport validate_params(const PhysicalParams& p, const ModelFlags& f,
                                 const PulseEnvelope* env) {
    ValidationReport report;
    auto error = [&](const std::string& m) { report.errors.push_back(m); };
    auto warn = [&](const std::string& m) { report.warnings.push_back(m); };

    if (p.n_atoms < 1) error("n_atoms must be >= 1");
    if (!finite(p.detuning)) error("detuning must be finite");
    if (!finite(p.rydberg_linewidth) || p.rydberg_linewidth < 0.0)
        error("rydberg_linewidth must be finite and >= 0");
    if (!finite(p.signal_coupling) || p.signal_coupling < 0.0)
        error("signal_coupling must be finite and >= 0");
    if (!finite(p.blockade_shift) || p.blockade_shift < 0.0)
        error("blockade_shift must be finite and >= 0");
    if (!finite(p.density) || p.density <= 0.0) error("density must be positive");
    if (!finite(p.length) || p.length <= 0.0) error("length must be positive");
    if (!finite(p.wavelength) || p.wavelength <= 0.0)
        error("wavelength must be positive");

    if (f.n_photon_max < 1) error("n_photon_max must be >= 1");
    if (f.n_s_max < 0 || f.n_r_max < 0) error("occupation caps must be >= 0");

    const bool eliminates_r =
        f.tier == ModelTier::raman || f.tier == ModelTier::two_level;
    if (eliminates_r && p.detuning == 0.0)
        error("adiabatic elimination undefined: detuning is zero");

    if (!report.ok()) return report;

    if (p.n_atoms >= 1 && (f.n_s_max > p.n_atoms || f.n_r_max > p.n_atoms))
        warn("occupation caps exceed n_atoms; clamped to n_atoms");

    const double abs_det = std::abs(p.detuning);
    if (eliminates_r || f.tier == ModelTier::full) {
        if (p.rydberg_linewidth > 0.0 && abs_det < 10.0 * p.rydberg_linewidth)
            warn("detuning below 10*Gamma (" + fmt(abs_det) + " < " +
                 fmt(10.0 * p.rydberg_linewidth) + "): adiabatic elimination questionable");
        if (env != nullptr) {
            const double omega_peak = peak_amplitude(*env);
            if (omega_peak > 0.0 && abs_det < 10.0 * omega_peak)
                warn("detuning below 10*Omega_peak (" + fmt(abs_det) + " < " +
                     fmt(10.0 * omega_peak) + "): adiabatic elimination questionable");
        }
    }

    const double k = 2.0 * M_PI / p.wavelength;
    const double dilute = k / std::cbrt(p.density);
    if (dilute < 1.0)
        warn("dilute condition violated: k/rho^(1/3) = " + fmt(dilute) +
             " < 1 (superradiance regime)");

    return report;
}

const char* tier_name(ModelTier tier) {
    switch (tier) {
        case ModelTier::full: return "full";
        case ModelTier::raman: return "raman";
        case ModelTier::two_level: return "two_level";
    }
    return "?";
}

bool parse_tier(const std::string& text, ModelTier& out) {
    if (text == "full") out = ModelTier::full;
    else if (text == "raman") out = ModelTier::raman;
    else if (text == "two_level") out = ModelTier::two_level;
    else return false;
    return true;
}

const char* family_name(EnvelopeFamily family) {
    switch (family) {
        case EnvelopeFamily::square: return "square";
        case EnvelopeFamily::gaussian: return "gaussian";
        case EnvelopeFamily::table: return "table";
    }
    return "?";
}

bool parse_family(const std::string& text, EnvelopeFamily& out) {
    if (text == "square") out = EnvelopeFamily::square;
    else if (text == "gaussian") out = EnvelopeFamily::gaussian;
    else if (text == "table") out = EnvelopeFamily::table;
    else return false;
    return true;
}

}  // namespace blockade
