#include "nsfp/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "' needs a number, got '" + v + "'");
    }
}

int64_t to_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        int64_t x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "' needs an integer, got '" + v + "'");
    }
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        uint64_t x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "' needs an unsigned integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("key '" + key + "' needs true or false, got '" + v + "'");
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const std::string& part : split(v, ',')) {
        std::string p = trim(part);
        if (!p.empty()) out.push_back(to_double(key, p));
    }
    return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const std::string& part : split(v, ',')) {
        std::string p = trim(part);
        if (!p.empty()) out.push_back(int(to_int(key, p)));
    }
    return out;
}

Vec3i to_vec3(const std::string& key, const std::string& v) {
    auto parts = split(v, ',');
    if (parts.size() != 3)
        throw ValidationError("key '" + key + "' needs three comma-separated integers");
    return {to_int(key, trim(parts[0])), to_int(key, trim(parts[1])),
            to_int(key, trim(parts[2]))};
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

std::string fmt_list(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

constexpr char kShellPrefix[] = "noise.shell.";
constexpr char kModePrefix[] = "noise.mode.";

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "cutoff") c.cutoff = int(to_int(key, value));
    else if (key == "nu") c.nu = to_double(key, value);
    else if (key == "dt") c.dt = to_double(key, value);
    else if (key == "horizon") c.horizon = to_double(key, value);
    else if (key == "ensemble") c.ensemble = int(to_int(key, value));
    else if (key == "seed") c.seed = to_u64(key, value);
    else if (key == "linear_only") c.linear_only = to_bool(key, value);
    else if (key == "ic") c.ic = value;
    else if (key == "noise.decay") c.noise.decay = to_double(key, value);
    else if (key == "noise.support") {
        if (value == "all") {
            c.noise.line_support = false;
        } else if (value.rfind("line:", 0) == 0) {
            c.noise.line_support = true;
            c.noise.line_dir = to_vec3(key, value.substr(5));
        } else {
            throw ValidationError("key 'noise.support' needs 'all' or 'line:k1,k2,k3'");
        }
    } else if (key.rfind(kShellPrefix, 0) == 0) {
        c.noise.shell_override[to_int(key, key.substr(sizeof kShellPrefix - 1))] =
            to_double(key, value);
    } else if (key.rfind(kModePrefix, 0) == 0) {
        std::string rest = key.substr(sizeof kModePrefix - 1);
        size_t dot = rest.rfind('.');
        if (dot == std::string::npos)
            throw ValidationError("key '" + key + "' needs the form noise.mode.<k>.<pol>");
        Vec3i k = to_vec3(key, rest.substr(0, dot));
        int pol = int(to_int(key, rest.substr(dot + 1)));
        c.noise.mode_override[NoiseSpec::mode_key(k, pol)] = to_double(key, value);
    }
    else if (key == "subspace") c.subspace = value;
    else if (key == "grid.nodes") c.grid_nodes = int(to_int(key, value));
    else if (key == "grid.extent_sigmas") c.grid_extent_sigmas = to_double(key, value);
    else if (key == "fp.dt") c.fp_dt = to_double(key, value);
    else if (key == "fp.negative_tolerance") c.fp_negative_tolerance = to_double(key, value);
    else if (key == "kde.min_effective") c.kde_min_effective = to_double(key, value);
    else if (key == "eval.times") c.eval_times = to_double_list(key, value);
    else if (key == "besov.alphas") c.besov_alphas = to_double_list(key, value);
    else if (key == "besov.t_min") c.besov_t_min = to_double(key, value);
    else if (key == "monitor.ps") c.monitor_ps = to_int_list(key, value);
    else if (key == "monitor.lambda") c.monitor_lambda = to_double(key, value);
    else if (key == "stationary.windows") c.stationary_windows = to_double_list(key, value);
    else if (key == "out.dir") c.out_dir = value;
    else throw ValidationError("unknown configuration key '" + key + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno) +
                                  ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second)
            throw ValidationError("key '" + key + "' appears twice");
        apply_key(c, key, value);
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string canonical_config_text(const RunConfig& c) {
    std::ostringstream out;
    out << "cutoff = " << c.cutoff << "\n";
    out << "nu = " << fmt(c.nu) << "\n";
    out << "dt = " << fmt(c.dt) << "\n";
    out << "horizon = " << fmt(c.horizon) << "\n";
    out << "ensemble = " << c.ensemble << "\n";
    out << "seed = " << c.seed << "\n";
    out << "linear_only = " << (c.linear_only ? "true" : "false") << "\n";
    out << "ic = " << c.ic << "\n";
    out << "noise.decay = " << fmt(c.noise.decay) << "\n";
    if (c.noise.line_support)
        out << "noise.support = line:" << c.noise.line_dir.x << "," << c.noise.line_dir.y
            << "," << c.noise.line_dir.z << "\n";
    else
        out << "noise.support = all\n";
    for (const auto& [shell, amp] : c.noise.shell_override)
        out << kShellPrefix << shell << " = " << fmt(amp) << "\n";
    for (const auto& [mk, amp] : c.noise.mode_override) {
        // stored key "k1,k2,k3:pol" maps onto noise.mode.k1,k2,k3.pol
        std::string name = mk;
        size_t colon = name.rfind(':');
        name[colon] = '.';
        out << kModePrefix << name << " = " << fmt(amp) << "\n";
    }
    out << "subspace = " << c.subspace << "\n";
    out << "grid.nodes = " << c.grid_nodes << "\n";
    out << "grid.extent_sigmas = " << fmt(c.grid_extent_sigmas) << "\n";
    out << "fp.dt = " << fmt(c.fp_dt) << "\n";
    out << "fp.negative_tolerance = " << fmt(c.fp_negative_tolerance) << "\n";
    out << "kde.min_effective = " << fmt(c.kde_min_effective) << "\n";
    out << "eval.times = " << fmt_list(c.eval_times) << "\n";
    out << "besov.alphas = " << fmt_list(c.besov_alphas) << "\n";
    out << "besov.t_min = " << fmt(c.besov_t_min) << "\n";
    out << "monitor.ps = " << fmt_list(c.monitor_ps) << "\n";
    out << "monitor.lambda = " << fmt(c.monitor_lambda) << "\n";
    out << "stationary.windows = " << fmt_list(c.stationary_windows) << "\n";
    out << "out.dir = " << c.out_dir << "\n";
    return out.str();
}

uint64_t config_hash(const RunConfig& c) {
    const std::string text = canonical_config_text(c);
    uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    if (name == "ou-linear") {
        c.cutoff = 1;
        c.linear_only = true;
        c.dt = 1e-3;
        c.horizon = 1.0;
        c.ensemble = 20000;
        c.seed = 101;
        c.noise.shell_override[1] = 3.0;
        c.subspace = "0,0,1:1:cos";
        c.grid_nodes = 512;
        c.fp_dt = 1e-3;
        c.monitor_lambda = 0.002;
        c.out_dir = "out/ou-linear";
    } else if (name == "pair-full") {
        c.cutoff = 1;
        c.linear_only = false;
        c.dt = 1e-3;
        c.horizon = 1.0;
        c.ensemble = 100000;
        c.seed = 202;
        c.subspace = "0,0,1:1:both";
        c.grid_nodes = 121;
        c.fp_dt = 1.0 / 64.0;
        c.monitor_lambda = 0.01;
        c.out_dir = "out/pair-full";
    } else if (name == "single-coordinate") {
        c.cutoff = 2;
        c.linear_only = false;
        c.dt = 2e-3;
        c.horizon = 1.0;
        c.ensemble = 10000;
        c.seed = 303;
        c.ic = "0,0,1:1:cos:1.0";
        c.subspace = "0,0,1:1:cos";
        c.grid_nodes = 401;
        c.fp_dt = 1.0 / 512.0;
        c.monitor_lambda = 0.002;
        c.out_dir = "out/single-coordinate";
    } else if (name == "degenerate-line") {
        c.cutoff = 2;
        c.ensemble = 100;
        c.seed = 404;
        c.noise.line_support = true;
        c.noise.line_dir = {0, 0, 1};
        c.subspace = "0,0,1:1:cos";
        c.out_dir = "out/degenerate-line";
    } else {
        std::string names;
        for (const std::string& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        throw ValidationError("unknown preset '" + name + "'; available: " + names);
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"ou-linear", "pair-full", "single-coordinate", "degenerate-line"};
}

SimConfig make_sim_config(const RunConfig& c) {
    SimConfig s;
    s.cutoff = c.cutoff;
    s.nu = c.nu;
    s.dt = c.dt;
    s.horizon = c.horizon;
    s.ensemble = c.ensemble;
    s.seed = c.seed;
    s.linear_only = c.linear_only;
    s.noise = c.noise;
    s.monitor_ps = c.monitor_ps;
    return s;
}

SpectralField build_initial_state(const RunConfig& c, const ModeSet& modes) {
    SpectralField u(modes);
    if (c.ic == "zero" || c.ic.empty()) return u;
    std::vector<SubspaceAxis> axes;
    std::vector<double> coords;
    for (const std::string& raw : split(c.ic, ';')) {
        std::string entry = trim(raw);
        if (entry.empty()) continue;
        size_t last = entry.rfind(':');
        if (last == std::string::npos)
            throw ValidationError("initial state entry '" + entry +
                                  "' needs the form k1,k2,k3:pol:part:value");
        Subspace one = Subspace::parse(entry.substr(0, last));
        if (one.dim() != 1)
            throw ValidationError("initial state entries need part cos or sin, got '" +
                                  entry + "'");
        axes.push_back(one.axes()[0]);
        coords.push_back(to_double("ic", trim(entry.substr(last + 1))));
    }
    if (axes.empty()) return u;
    Subspace(axes).embed(u, coords);
    return u;
}

Subspace build_subspace(const RunConfig& c) { return Subspace::parse(c.subspace); }

double besov_t_min(const RunConfig& c) {
    return c.besov_t_min >= 0.0 ? c.besov_t_min : 10.0 * c.dt;
}

} // namespace nsfp
