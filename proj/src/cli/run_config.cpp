#include "sfac/cli/run_config.hpp"

#include <algorithm>
#include <map>

#include "sfac/error.hpp"

namespace sfac::cli {

namespace {

const std::string kRho = "0.31830988618379067";  // 1/pi
const std::string kRhoParent = "0.015915494309189534";  // 1/(20 pi)

std::vector<OptionSpec> process_options() {
    return {
        {"process", "poisson", "poisson | thomas | ginibre | thinned-ginibre"},
        {"intensity", kRho, "Poisson intensity"},
        {"rho_parent", kRhoParent, "Thomas parent intensity"},
        {"lambda_offspring", "20", "Thomas mean offspring count"},
        {"sigma", "2", "Thomas offspring standard deviation"},
        {"retain", "0.5", "retention probability for thinned-ginibre"},
        {"ginibre_n_max", "6000", "largest Ginibre matrix size"},
    };
}

std::vector<OptionSpec> window_options() {
    return {
        {"window", "box", "box | ball"},
        {"lengths", "40,40", "box side lengths"},
        {"radius", "50", "ball radius"},
        {"dim", "2", "ball dimension"},
    };
}

std::vector<OptionSpec> concat(std::vector<OptionSpec> a, const std::vector<OptionSpec>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const std::map<std::string, std::vector<OptionSpec>>& schema() {
    static const std::map<std::string, std::vector<OptionSpec>> s = {
        {"sample", concat(concat(process_options(), window_options()),
                          {{"seed", "1", "random seed"}, {"out", "", "output pattern CSV", true}})},
        {"estimate",
         {{"input", "", "pattern CSV (sidecar <input>.meta)", true},
          {"estimator", "si",
           "si | si_self_normalized | tapered | multitaper | bartlett | bartlett_self_normalized | "
           "hankel_ogata | hankel_dht"},
          {"k_max", "2.8", "largest wavenumber"},
          {"k_min", "0", "smallest wavenumber for radial grids (0: automatic)"},
          {"k_count", "100", "wavenumber count for hankel_ogata"},
          {"grid", "allowed", "allowed (restricted set) | unrestricted (box estimators)"},
          {"debias", "none", "none | direct | undirect (tapered estimators)"},
          {"taper", "sine", "indicator | sine (tapered)"},
          {"taper_index", "1,1", "sine taper index p (tapered)"},
          {"tapers", "4", "number of sine tapers (multitaper)"},
          {"bins", "50", "wavenumber bins for the companion file (0: none)"},
          {"pcf", "", "pcf file for the Hankel estimators (default: estimated from the pattern)"},
          {"ogata_h", "0.01", "Ogata step size"},
          {"ogata_nodes", "300", "Ogata node count"},
          {"dht_r_max", "30", "DHT maximal radius"},
          {"dht_n", "1000", "DHT size"},
          {"out", "", "output estimate CSV", true}}},
        {"pcf",
         {{"input", "", "pattern CSV", true},
          {"r_max", "", "largest radius (default: R/2 or min L/4)"},
          {"nodes", "256", "number of radii"},
          {"bandwidth", "", "kernel half-width (default: 0.15/sqrt(rho))"},
          {"out", "", "output pcf CSV", true}}},
        {"hindex",
         {{"input", "", "estimate CSV", true},
          {"fit_k_max", "0.3", "upper end of the linear fit"},
          {"out", "", "output report", true}}},
        {"alpha",
         {{"input", "", "estimate CSV", true},
          {"fit_k_max", "0.45", "upper end of the log-log fit"},
          {"out", "", "output report", true}}},
        {"test", concat(concat(process_options(), window_options()),
                        {{"pattern_dir", "", "directory of pattern CSVs used instead of a process"},
                         {"estimator", "si", "si | si_self_normalized | bartlett | bartlett_self_normalized"},
                         {"schedule_start", "20", "first window size (side length or radius)"},
                         {"schedule_stop", "60", "last window size"},
                         {"schedule_step", "1", "window size increment"},
                         {"lambda", "", "mean of M - 1 (default: largest value meeting the overflow rule)"},
                         {"overflow_tol", "1e-4", "bound on P(M > schedule length)"},
                         {"truncated", "true", "condition M on the schedule length"},
                         {"A", "50", "number of draws"},
                         {"z", "3", "CI multiplier"},
                         {"seed", "1", "random seed"},
                         {"out", "", "output report", true}})},
        {"benchmark", concat(concat(process_options(), window_options()),
                             {{"estimators", "si,ddmt", "comma list of si, si_self_normalized, ddt, udt, ddmt, udmt"},
                              {"tapers", "4", "sine tapers for ddmt/udmt (ddt/udt use the first one)"},
                              {"seeds", "50", "number of seed-matched patterns"},
                              {"k_lo", "0.1", "iMSE range start"},
                              {"k_hi", "2.8", "iMSE range end"},
                              {"seed", "1", "base seed"},
                              {"out", "", "output prefix", true}})},
        {"plotdata",
         {{"input", "", "estimate CSV", true},
          {"overlay", "", "known process for an exact-S column: poisson | thomas | ginibre | thinned-ginibre"},
          {"lambda_offspring", "20", "Thomas mean offspring count (overlay)"},
          {"sigma", "2", "Thomas sigma (overlay)"},
          {"retain", "0.5", "retention probability (overlay)"},
          {"svg", "", "optional SVG scatter output"},
          {"out", "", "output CSV", true}}},
    };
    return s;
}

const OptionSpec* find(const std::vector<OptionSpec>& specs, const std::string& key) {
    auto it = std::find_if(specs.begin(), specs.end(), [&](const OptionSpec& o) { return o.key == key; });
    return it == specs.end() ? nullptr : &*it;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"sample", "estimate", "pcf",       "hindex",
                                                   "alpha",  "test",     "benchmark", "plotdata"};
    return names;
}

const std::vector<OptionSpec>& options_for(const std::string& command) {
    auto it = schema().find(command);
    if (it == schema().end()) throw ValidationError("unknown subcommand '" + command + "'");
    return it->second;
}

RunConfig::RunConfig(std::string command) : command_(std::move(command)) {
    for (const auto& o : options_for(command_)) {
        if (!o.default_value.empty()) values_.set(o.key, o.default_value);
    }
}

RunConfig RunConfig::from_keyvalue(const std::string& command, const KeyValue& kv) {
    RunConfig c(command);
    for (const auto& [k, v] : kv.entries()) {
        if (k == "command") {
            if (v != command) throw ValidationError("config is for '" + v + "', not '" + command + "'");
            continue;
        }
        c.set(k, v);
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& command, const std::string& path) {
    return from_keyvalue(command, KeyValue::read(path));
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!find(options_for(command_), key)) {
        throw ValidationError("unknown key '" + key + "' for subcommand '" + command_ + "'");
    }
    values_.set(key, value);
}

bool RunConfig::is_set(const std::string& key) const {
    auto v = values_.get(key);
    return v && !v->empty();
}

std::string RunConfig::get(const std::string& key) const {
    if (!find(options_for(command_), key)) throw ValidationError("unknown key '" + key + "'");
    auto v = values_.get(key);
    if (!v || v->empty()) throw ValidationError("missing value for '" + key + "'");
    return *v;
}

double RunConfig::get_double(const std::string& key) const { return parse_double(get(key), key); }

long long RunConfig::get_int(const std::string& key) const {
    const double v = get_double(key);
    if (v != static_cast<double>(static_cast<long long>(v))) {
        throw ValidationError(key + " must be an integer");
    }
    return static_cast<long long>(v);
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError(key + " must be true or false");
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const { return parse_double_list(get(key), key); }

void RunConfig::check_required() const {
    for (const auto& o : options_for(command_)) {
        if (o.required && !is_set(o.key)) throw ValidationError("missing required option --" + o.key);
    }
}

KeyValue RunConfig::to_keyvalue() const {
    KeyValue kv = values_;
    kv.set("command", command_);
    return kv;
}

}  // namespace sfac::cli
