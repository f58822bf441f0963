#include "blockade/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace blockade {

namespace {

struct RawValue {
    enum class Kind { number, boolean, string, array } kind;
    double number = 0.0;
    bool boolean = false;
    std::string text;
    std::vector<double> array;
    int line = 0;
};

using Section = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        else if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size() && std::isfinite(out);
}

RawValue parse_value(const std::string& text, int line, const std::string& origin) {
    RawValue v;
    v.line = line;
    if (text == "true" || text == "false") {
        v.kind = RawValue::Kind::boolean;
        v.boolean = text == "true";
        return v;
    }
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        v.kind = RawValue::Kind::string;
        v.text = text.substr(1, text.size() - 2);
        return v;
    }
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']')
            throw ConfigError(origin + ":" + std::to_string(line) +
                              ": unterminated array");
        v.kind = RawValue::Kind::array;
        std::string body = text.substr(1, text.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double x;
            if (!parse_number(item, x))
                throw ConfigError(origin + ":" + std::to_string(line) +
                                  ": array element '" + item + "' is not a number");
            v.array.push_back(x);
        }
        return v;
    }
    double x;
    if (parse_number(text, x)) {
        v.kind = RawValue::Kind::number;
        v.number = x;
        return v;
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ": cannot parse value '" +
                      text + "'");
}

std::map<std::string, Section> parse_sections(const std::string& text,
                                              const std::string& origin) {
    std::map<std::string, Section> sections;
    std::istringstream is(text);
    std::string raw;
    std::string current = "";
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        if (sections[current].count(key))
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": duplicate key '" + key + "'");
        sections[current].emplace(key, parse_value(value, line_no, origin));
    }
    return sections;
}

class SectionReader {
  public:
    SectionReader(const std::string& origin, const std::string& name, Section* section,
                  std::vector<std::string>* errors)
        : origin_(origin), name_(name), section_(section), errors_(errors) {}

    bool has(const std::string& key) const {
        return section_ && section_->count(key) > 0;
    }

    void number(const std::string& key, double& out) {
        if (auto* v = take(key, RawValue::Kind::number)) out = v->number;
    }
    void integer(const std::string& key, int& out) {
        if (auto* v = take(key, RawValue::Kind::number)) {
            if (v->number != std::floor(v->number))
                fail(v->line, key + " must be an integer");
            else out = static_cast<int>(v->number);
        }
    }
    void boolean(const std::string& key, bool& out) {
        if (auto* v = take(key, RawValue::Kind::boolean)) out = v->boolean;
    }
    void string(const std::string& key, std::string& out) {
        if (auto* v = take(key, RawValue::Kind::string)) out = v->text;
    }
    void array(const std::string& key, std::vector<double>& out) {
        if (auto* v = take(key, RawValue::Kind::array)) out = v->array;
    }
    template <typename T>
    void optional(const std::string& key, std::optional<T>& out) {
        if (auto* v = take(key, RawValue::Kind::number)) {
            if constexpr (std::is_same_v<T, int>) {
                if (v->number != std::floor(v->number))
                    fail(v->line, key + " must be an integer");
                else out = static_cast<int>(v->number);
            } else {
                out = v->number;
            }
        }
    }

    // Everything not consumed is a typo.
    void finish() {
        if (!section_) return;
        for (const auto& [key, value] : *section_)
            if (!consumed_.count(key))
                fail(value.line, "unknown key '" + key + "' in [" + name_ + "]");
    }

  private:
    RawValue* take(const std::string& key, RawValue::Kind kind) {
        if (!section_) return nullptr;
        auto it = section_->find(key);
        if (it == section_->end()) return nullptr;
        consumed_.insert(key);
        if (it->second.kind != kind) {
            static const char* names[] = {"number", "boolean", "string", "array"};
            fail(it->second.line, key + " must be a " +
                                      names[static_cast<int>(kind)]);
            return nullptr;
        }
        return &it->second;
    }

    void fail(int line, const std::string& message) {
        errors_->push_back(origin_ + ":" + std::to_string(line) + ": " + message);
    }

    std::string origin_, name_;
    Section* section_;
    std::vector<std::string>* errors_;
    std::set<std::string> consumed_;
};

}  // namespace

SimulationGrid RunConfig::resolve_grid() const {
    double t_start = grid.t_start.value_or(0.0);
    double t_end;
    if (grid.t_end) {
        t_end = *grid.t_end;
    } else if (envelope.family == EnvelopeFamily::table &&
               !envelope.sample_times.empty()) {
        t_end = envelope.sample_times.back();
    } else {
        t_end = envelope.duration;
    }
    return make_grid(physical, envelope, t_start, t_end, grid.dt.value_or(0.0),
                     grid.record_stride.value_or(0));
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    auto sections = parse_sections(text, origin);
    std::vector<std::string> errors;

    static const char* known_sections[] = {"physical", "envelope", "grid",
                                           "flags",    "sweep",    "output",
                                           "design"};
    for (const auto& [name, _] : sections) {
        bool known = name.empty();
        for (const char* k : known_sections) known |= name == k;
        if (!known) errors.push_back(origin + ": unknown section [" + name + "]");
    }
    if (sections.count("") && !sections[""].empty())
        errors.push_back(origin + ": keys outside any section");

    auto section = [&](const char* name) -> Section* {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };

    RunConfig config;

    {
        SectionReader r(origin, "physical", section("physical"), &errors);
        r.integer("n_atoms", config.physical.n_atoms);
        r.number("detuning", config.physical.detuning);
        r.number("rydberg_linewidth", config.physical.rydberg_linewidth);
        r.number("signal_coupling", config.physical.signal_coupling);
        r.number("blockade_shift", config.physical.blockade_shift);
        r.number("density", config.physical.density);
        r.number("length", config.physical.length);
        r.number("wavelength", config.physical.wavelength);
        r.boolean("compensate_stark", config.physical.compensate_stark);
        r.finish();
    }
    {
        SectionReader r(origin, "envelope", section("envelope"), &errors);
        std::string family = family_name(config.envelope.family);
        r.string("family", family);
        if (!parse_family(family, config.envelope.family))
            errors.push_back(origin + ": unknown envelope family '" + family + "'");
        r.number("amplitude", config.envelope.amplitude);
        r.number("duration", config.envelope.duration);
        r.number("center", config.envelope.center);
        r.number("width", config.envelope.width);
        std::vector<double> times, re, im;
        r.array("times", times);
        r.array("re", re);
        r.array("im", im);
        r.finish();
        if (config.envelope.family == EnvelopeFamily::table) {
            if (im.empty()) im.assign(re.size(), 0.0);
            if (times.empty() || times.size() != re.size() || re.size() != im.size()) {
                errors.push_back(origin +
                                 ": table envelope needs times/re/im of equal length");
            } else {
                std::vector<cplx> values(re.size());
                for (std::size_t i = 0; i < re.size(); ++i) values[i] = cplx(re[i], im[i]);
                try {
                    config.envelope = PulseEnvelope::make_table(times, values);
                } catch (const std::exception& e) {
                    errors.push_back(origin + ": " + e.what());
                }
            }
        } else if (!times.empty() || !re.empty() || !im.empty()) {
            errors.push_back(origin + ": times/re/im are only valid for family = \"table\"");
        }
    }
    {
        SectionReader r(origin, "grid", section("grid"), &errors);
        r.optional("t_start", config.grid.t_start);
        r.optional("t_end", config.grid.t_end);
        r.optional("dt", config.grid.dt);
        r.optional("record_stride", config.grid.record_stride);
        r.finish();
        if (config.grid.dt && *config.grid.dt <= 0.0)
            errors.push_back(origin + ": dt must be positive");
        if (config.grid.t_start && config.grid.t_end &&
            !(*config.grid.t_end > *config.grid.t_start))
            errors.push_back(origin + ": grid needs t_end > t_start");
        if (config.grid.record_stride && *config.grid.record_stride < 1)
            errors.push_back(origin + ": record_stride must be >= 1");
    }
    {
        SectionReader r(origin, "flags", section("flags"), &errors);
        std::string tier = tier_name(config.flags.tier);
        r.string("tier", tier);
        if (!parse_tier(tier, config.flags.tier))
            errors.push_back(origin + ": unknown tier '" + tier + "'");
        r.boolean("include_decay", config.flags.include_decay);
        r.integer("n_photon_max", config.flags.n_photon_max);
        r.integer("n_s_max", config.flags.n_s_max);
        r.integer("n_r_max", config.flags.n_r_max);
        r.finish();
    }
    {
        SectionReader r(origin, "sweep", section("sweep"), &errors);
        r.string("parameter", config.sweep.parameter);
        r.array("values", config.sweep.values);
        r.finish();
        if (!config.sweep.parameter.empty() && !is_sweep_parameter(config.sweep.parameter))
            errors.push_back(origin + ": sweep parameter '" + config.sweep.parameter +
                             "' does not name a numeric field");
    }
    {
        SectionReader r(origin, "output", section("output"), &errors);
        r.string("directory", config.output.directory);
        r.boolean("trajectory", config.output.trajectory);
        r.finish();
        if (config.output.directory.empty())
            errors.push_back(origin + ": output directory must not be empty");
    }
    {
        SectionReader r(origin, "design", section("design"), &errors);
        r.string("free_parameter", config.design.free_parameter);
        r.optional("bracket_lo", config.design.bracket_lo);
        r.optional("bracket_hi", config.design.bracket_hi);
        r.finish();
        if (config.design.free_parameter != "duration" &&
            config.design.free_parameter != "amplitude")
            errors.push_back(origin + ": free_parameter must be duration or amplitude");
    }

    const ValidationReport validation =
        validate_params(config.physical, config.flags, &config.envelope);
    for (const std::string& e : validation.errors)
        errors.push_back(origin + ": " + e);

    if (!errors.empty()) {
        std::string joined;
        for (const std::string& e : errors) {
            if (!joined.empty()) joined += "\n";
            joined += e;
        }
        throw ConfigError(joined);
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

namespace {

using Setter = void (*)(RunConfig&, double);

const std::map<std::string, Setter>& sweep_setters() {
    static const std::map<std::string, Setter> setters = {
        {"n_atoms", [](RunConfig& c, double v) { c.physical.n_atoms = static_cast<int>(v); }},
        {"detuning", [](RunConfig& c, double v) { c.physical.detuning = v; }},
        {"rydberg_linewidth", [](RunConfig& c, double v) { c.physical.rydberg_linewidth = v; }},
        {"signal_coupling", [](RunConfig& c, double v) { c.physical.signal_coupling = v; }},
        {"blockade_shift", [](RunConfig& c, double v) { c.physical.blockade_shift = v; }},
        {"density", [](RunConfig& c, double v) { c.physical.density = v; }},
        {"length", [](RunConfig& c, double v) { c.physical.length = v; }},
        {"wavelength", [](RunConfig& c, double v) { c.physical.wavelength = v; }},
        {"amplitude", [](RunConfig& c, double v) { c.envelope.amplitude = v; }},
        {"duration", [](RunConfig& c, double v) { c.envelope.duration = v; }},
        {"center", [](RunConfig& c, double v) { c.envelope.center = v; }},
        {"width", [](RunConfig& c, double v) { c.envelope.width = v; }},
        {"t_start", [](RunConfig& c, double v) { c.grid.t_start = v; }},
        {"t_end", [](RunConfig& c, double v) { c.grid.t_end = v; }},
        {"dt", [](RunConfig& c, double v) { c.grid.dt = v; }},
    };
    return setters;
}

}  // namespace

bool is_sweep_parameter(const std::string& parameter) {
    return sweep_setters().count(parameter) > 0;
}

bool apply_sweep_value(RunConfig& config, const std::string& parameter, double value,
                       std::string* error) {
    auto it = sweep_setters().find(parameter);
    if (it == sweep_setters().end()) {
        if (error) *error = "sweep parameter '" + parameter + "' does not name a numeric field";
        return false;
    }
    if (parameter == "n_atoms" && value != std::floor(value)) {
        if (error) *error = "sweep over n_atoms needs integer values";
        return false;
    }
    it->second(config, value);
    return true;
}

std::string envelope_fragment(const PulseEnvelope& env) {
    std::ostringstream os;
    char buf[64];
    auto num = [&buf](double x) {
        std::snprintf(buf, sizeof(buf), "%.12e", x);
        return std::string(buf);
    };
    os << "[envelope]\n";
    os << "family = \"" << family_name(env.family) << "\"\n";
    if (env.family == EnvelopeFamily::table) {
        auto list = [&](auto get) {
            std::string out = "[";
            for (std::size_t i = 0; i < env.sample_times.size(); ++i) {
                if (i) out += ", ";
                out += num(get(i));
            }
            return out + "]";
        };
        os << "times = " << list([&](std::size_t i) { return env.sample_times[i]; }) << "\n";
        os << "re = " << list([&](std::size_t i) { return env.sample_values[i].real(); }) << "\n";
        os << "im = " << list([&](std::size_t i) { return env.sample_values[i].imag(); }) << "\n";
    } else {
        os << "amplitude = " << num(env.amplitude) << "\n";
        os << "duration = " << num(env.duration) << "\n";
        if (env.family == EnvelopeFamily::gaussian) {
            os << "center = " << num(env.center) << "\n";
            os << "width = " << num(env.width) << "\n";
        }
    }
    return os.str();
}

}  // namespace blockade
