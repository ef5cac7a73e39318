#include "sfac/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "sfac/cli/svg_plot.hpp"
#include "sfac/complex_eigen.hpp"
#include "sfac/diagnostics.hpp"
#include "sfac/error.hpp"
#include "sfac/estimate_io.hpp"
#include "sfac/isotropic.hpp"
#include "sfac/kernels.hpp"
#include "sfac/pattern_io.hpp"
#include "sfac/rng.hpp"
#include "sfac/samplers.hpp"
#include "sfac/spectral.hpp"
#include "sfac/tapers.hpp"

#ifndef SFAC_VERSION
#define SFAC_VERSION "1.0.0"
#endif

namespace sfac::cli {

namespace {

std::uint64_t seed_of(const RunConfig& c) {
    const std::string s = c.get("seed");
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("seed must be a non-negative integer, got '" + s + "'");
    }
}

std::size_t positive_count(const RunConfig& c, const std::string& key) {
    const long long v = c.get_int(key);
    if (v < 1) throw ValidationError(key + " must be >= 1");
    return static_cast<std::size_t>(v);
}

GinibreOptions ginibre_options(const RunConfig& c) {
    GinibreOptions o;
    o.n_max = positive_count(c, "ginibre_n_max");
    return o;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

std::string build_info() {
    std::string s = std::string("sfac ") + SFAC_VERSION;
#ifdef __VERSION__
    s += "; compiler " + std::string(__VERSION__);
#endif
#ifdef __GLIBCXX__
    s += "; libstdc++ " + std::to_string(__GLIBCXX__);
#endif
    return s;
}

}  // namespace

Window window_from_config(const RunConfig& c) {
    const std::string type = c.get("window");
    if (type == "box") return Window::box(c.get_doubles("lengths"));
    if (type == "ball") return Window::ball(static_cast<int>(c.get_int("dim")), c.get_double("radius"));
    throw ValidationError("window must be box or ball, got '" + type + "'");
}

PointPattern sample_process(const RunConfig& c, const Window& w, std::uint64_t seed) {
    const std::string process = c.get("process");
    if (process == "poisson") return sample_poisson(w, c.get_double("intensity"), seed);
    if (process == "thomas") {
        return sample_thomas(w, c.get_double("rho_parent"), c.get_double("lambda_offspring"), c.get_double("sigma"),
                             seed);
    }
    if (process == "ginibre") return sample_ginibre_on(w, seed, ginibre_options(c));
    if (process == "thinned-ginibre") {
        const PointPattern full = sample_ginibre_on(w, seed, ginibre_options(c));
        return thin(full, c.get_double("retain"), derive_seed(seed, 0x7417));
    }
    throw ValidationError("unknown process '" + process + "'");
}

std::function<double(double)> exact_structure_factor(const RunConfig& c, const std::string& process_key) {
    const std::string process = c.get(process_key);
    if (process == "poisson") return [](double) { return 1.0; };
    if (process == "thomas") {
        const double lambda = c.get_double("lambda_offspring");
        const double sigma = c.get_double("sigma");
        return [=](double k) { return thomas_structure_factor(k, lambda, sigma); };
    }
    if (process == "ginibre") return ginibre_structure_factor;
    if (process == "thinned-ginibre") {
        const double p = c.get_double("retain");
        return [=](double k) { return thinned_structure_factor(ginibre_structure_factor(k), p); };
    }
    throw ValidationError("unknown process '" + process + "'");
}

void cmd_sample(const RunConfig& c) {
    const Window w = window_from_config(c);
    const std::uint64_t seed = seed_of(c);
    const PointPattern p = sample_process(c, w, seed);
    KeyValue extra;
    extra.set("process", c.get("process"));
    save_pattern(c.get("out"), p, seed, extra);
    std::cerr << "sampled " << p.size() << " points in " << w.describe() << "\n";
}

void cmd_estimate(const RunConfig& c) {
    const LoadedPattern loaded = load_pattern_with_metadata(c.get("input"));
    const PointPattern& p = loaded.pattern;
    const Window& w = p.window();
    const std::string estimator = c.get("estimator");
    const double k_max = c.get_double("k_max");
    const double k_min = c.get_double("k_min");
    SpectralEstimate e;

    auto box_grid = [&]() {
        const std::string grid = c.get("grid");
        if (grid != "allowed" && grid != "unrestricted") throw ValidationError("grid must be allowed or unrestricted");
        WaveGrid g = allowed_wavevectors(w, k_max, grid == "allowed");
        return g;
    };
    auto require_box = [&]() {
        if (!w.is_box()) {
            throw ValidationError("estimator '" + estimator + "' needs a box window; use bartlett or the Hankel "
                                  "estimators on balls");
        }
    };

    if (estimator == "si" || estimator == "si_self_normalized") {
        require_box();
        e = scattering_intensity(p, box_grid(), estimator == "si_self_normalized");
        e.metadata["grid"] = c.get("grid");
    } else if (estimator == "tapered") {
        require_box();
        TaperPtr t;
        if (c.get("taper") == "indicator") {
            t = indicator_taper();
        } else if (c.get("taper") == "sine") {
            std::vector<int> idx;
            for (double v : c.get_doubles("taper_index")) idx.push_back(static_cast<int>(v));
            t = sine_taper(idx);
        } else {
            throw ValidationError("taper must be indicator or sine");
        }
        e = tapered(p, box_grid(), *t, parse_debias(c.get("debias")));
        e.metadata["grid"] = c.get("grid");
    } else if (estimator == "multitaper") {
        require_box();
        const auto tapers = sine_taper_family(positive_count(c, "tapers"), w.dim());
        e = multitaper(p, box_grid(), tapers, parse_debias(c.get("debias")));
        e.metadata["grid"] = c.get("grid");
    } else if (estimator == "bartlett" || estimator == "bartlett_self_normalized") {
        if (!w.is_ball()) {
            throw ValidationError("bartlett needs a ball window; use si, tapered or multitaper on boxes");
        }
        std::vector<double> ks;
        for (double k : allowed_wavenumbers_ball_upto(w, k_max)) {
            if (k >= k_min) ks.push_back(k);
        }
        if (ks.empty()) throw ValidationError("no allowed wavenumber in [k_min, k_max]");
        e = bartlett_isotropic(p, ks, estimator == "bartlett_self_normalized");
        e.metadata["grid"] = "allowed";
    } else if (estimator == "hankel_ogata" || estimator == "hankel_dht") {
        PcfEstimate pcf = c.is_set("pcf") ? load_pcf(c.get("pcf")) : estimate_pcf_kernel(p);
        const PcfInterpolator g(pcf);
        const double rho = estimate_intensity(p);
        if (estimator == "hankel_ogata") {
            OgataParams params;
            params.h = c.get_double("ogata_h");
            params.n_nodes = positive_count(c, "ogata_nodes");
            params.r_max = pcf.r_max;
            const std::size_t n = positive_count(c, "k_count");
            const double lo = k_min > 0.0 ? k_min : k_max / static_cast<double>(n);
            e = hankel_ogata(g, rho, p.dim(), linspace(lo, k_max, n), params);
        } else {
            const DhtGrid grid = make_dht_grid(p.dim(), c.get_double("dht_r_max"), positive_count(c, "dht_n"));
            e = hankel_dht(g, rho, p.dim(), grid);
            SpectralEstimate kept = e;
            kept.wavenumbers.clear();
            kept.values.clear();
            for (std::size_t i = 0; i < e.values.size(); ++i) {
                if (e.wavenumbers[i] >= k_min && e.wavenumbers[i] <= k_max) {
                    kept.wavenumbers.push_back(e.wavenumbers[i]);
                    kept.values.push_back(e.values[i]);
                }
            }
            e = std::move(kept);
        }
        e.metadata["pcf.source"] = c.is_set("pcf") ? c.get("pcf") : "kernel estimate";
        e.metadata["pcf.r_max"] = format_double(pcf.r_max);
    } else {
        throw ValidationError("unknown estimator '" + estimator + "'");
    }
    if (e.values.empty()) throw ValidationError("no wavenumbers selected");
    const long long bins = c.get_int("bins");
    if (bins > 0) e = bin_by_wavenumber(e, static_cast<std::size_t>(bins));
    if (!loaded.shift.empty() && loaded.metadata.has("window.center")) {
        e.metadata["pattern.shift"] = loaded.metadata.require("window.center");
    }
    save_estimate(c.get("out"), e);
    if (bins > 0) save_bins(c.get("out") + ".bins.csv", e);
}

void cmd_pcf(const RunConfig& c) {
    const PointPattern p = load_pattern(c.get("input"));
    const double r_max = c.is_set("r_max") ? c.get_double("r_max") : default_pcf_rmax(p.window());
    const std::size_t n = positive_count(c, "nodes");
    std::vector<double> radii;
    for (std::size_t i = 1; i <= n; ++i) radii.push_back(r_max * static_cast<double>(i) / static_cast<double>(n));
    std::optional<double> b;
    if (c.is_set("bandwidth")) b = c.get_double("bandwidth");
    save_pcf(c.get("out"), estimate_pcf_kernel(p, radii, b));
}

void cmd_hindex(const RunConfig& c) {
    const SpectralEstimate e = load_estimate(c.get("input"));
    const HIndexReport r = h_index(e, c.get_double("fit_k_max"));
    KeyValue kv;
    kv.set("H", r.H);
    kv.set("S0", r.S0);
    kv.set("k_peak", r.k_peak ? format_double(*r.k_peak) : std::string("none"));
    kv.set("S_peak", r.S_peak);
    kv.set("fit_k_max", r.fit_k_max);
    kv.set_int("fit_points", static_cast<long long>(r.fit_points));
    kv.set("effectively_hyperuniform", std::string(r.effectively_hyperuniform ? "true" : "false"));
    kv.write(c.get("out"));
}

void cmd_alpha(const RunConfig& c) {
    const SpectralEstimate e = load_estimate(c.get("input"));
    KeyValue kv;
    kv.set("alpha", fit_alpha(e, c.get_double("fit_k_max")));
    kv.set("fit_k_max", c.get_double("fit_k_max"));
    kv.write(c.get("out"));
}

void cmd_test(const RunConfig& c) {
    const std::string window_type = c.get("window");
    const double start = c.get_double("schedule_start");
    const double stop = c.get_double("schedule_stop");
    const double step = c.get_double("schedule_step");
    if (!(start > 0.0) || !(step > 0.0) || !(stop >= start)) {
        throw ValidationError("schedule needs 0 < start <= stop and step > 0");
    }
    const int dim = static_cast<int>(c.get_int("dim"));
    std::vector<Window> schedule;
    for (double s = start; s <= stop + 1e-9 * step; s += step) {
        if (window_type == "box") {
            schedule.push_back(Window::box(std::vector<double>(static_cast<std::size_t>(dim), s)));
        } else if (window_type == "ball") {
            schedule.push_back(Window::ball(dim, s));
        } else {
            throw ValidationError("window must be box or ball");
        }
    }
    const std::size_t cap = schedule.size();
    const double tol = c.get_double("overflow_tol");
    double lambda;
    if (c.is_set("lambda")) {
        lambda = c.get_double("lambda");
        check_overflow_rule(lambda, cap, tol);
    } else {
        lambda = max_lambda_for_schedule(cap, tol);
    }
    const CoupledSumLaw law(lambda, cap, c.get_bool("truncated"));
    const MultiscaleEstimator est = parse_multiscale_estimator(c.get("estimator"));
    const std::size_t draws = positive_count(c, "A");
    if (draws < 2) throw ValidationError("the multiscale test needs A >= 2");
    const std::uint64_t seed = seed_of(c);

    PatternSource source;
    if (c.is_set("pattern_dir")) {
        std::vector<std::string> files;
        for (const auto& entry : std::filesystem::directory_iterator(c.get("pattern_dir"))) {
            if (entry.path().extension() == ".csv") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.size() < draws) {
            throw ValidationError("pattern_dir holds " + std::to_string(files.size()) + " patterns, A = " +
                                  std::to_string(draws));
        }
        auto shared = std::make_shared<std::vector<PointPattern>>();
        for (std::size_t a = 0; a < draws; ++a) shared->push_back(load_pattern(files[a]));
        for (const auto& p : *shared) {
            if (!p.window().contains(schedule.back())) {
                throw ValidationError("pattern window " + p.window().describe() + " does not contain the largest "
                                      "schedule window");
            }
        }
        // the draw index is carried in the seed slot
        source = [shared](const Window& w, std::uint64_t index) {
            return restrict_to_window((*shared)[static_cast<std::size_t>(index)], w);
        };
    } else {
        source = [&c](const Window& w, std::uint64_t s) { return sample_process(c, w, s); };
    }
    const WindowEstimator estimator = [est](const PointPattern& p) { return estimate_at_kmin(p, est); };

    std::vector<CoupledSumDraw> results(draws);
    std::vector<std::exception_ptr> errors(draws);
    const auto draws_signed = static_cast<long long>(draws);
    const bool from_files = c.is_set("pattern_dir");
#pragma omp parallel for schedule(dynamic, 1)
    for (long long a = 0; a < draws_signed; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        try {
            if (from_files) {
                const auto fixed = [&](const Window& w, std::uint64_t) { return source(w, ua); };
                results[ua] = coupled_sum_draw(fixed, estimator, schedule, law, derive_seed(seed, ua));
            } else {
                results[ua] = coupled_sum_draw(source, estimator, schedule, law, derive_seed(seed, ua));
            }
        } catch (...) {
            errors[ua] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    TestReport report = multiscale_test(results, c.get_double("z"));
    report.lambda = lambda;
    report.estimator = to_string(est);
    report.schedule = window_type + ":" + format_double(start) + ":" + format_double(stop) + ":" + format_double(step);
    KeyValue kv = to_keyvalue(report);
    kv.set("truncated", c.get("truncated"));
    kv.set("overflow_probability", law.overflow_probability());
    kv.write(c.get("out"));

    std::ofstream per_draw(c.get("out") + ".draws.csv");
    per_draw << "draw,M,Z\n";
    for (std::size_t a = 0; a < draws; ++a) {
        per_draw << a << "," << results[a].M << "," << format_double(results[a].Z) << "\n";
    }
}

void cmd_benchmark(const RunConfig& c) {
    const Window w = window_from_config(c);
    if (!w.is_box()) throw ValidationError("benchmark compares box estimators; use a box window");
    const double k_lo = c.get_double("k_lo");
    const double k_hi = c.get_double("k_hi");
    const std::size_t seeds = positive_count(c, "seeds");
    const std::uint64_t seed = seed_of(c);
    const WaveGrid grid = allowed_wavevectors(w, k_hi, true);
    const auto tapers = sine_taper_family(positive_count(c, "tapers"), w.dim());
    const TaperPtr t0 = sine_taper(std::vector<int>(static_cast<std::size_t>(w.dim()), 1));

    std::vector<std::string> names;
    {
        std::stringstream ss(c.get("estimators"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) names.push_back(item);
        }
    }
    const std::vector<std::string> known = {"si", "si_self_normalized", "ddt", "udt", "ddmt", "udmt"};
    for (const auto& n : names) {
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            throw ValidationError("unknown benchmark estimator '" + n + "'");
        }
    }
    if (names.empty()) throw ValidationError("no estimators listed");

    std::map<std::string, std::vector<SpectralEstimate>> by_name;
    for (std::size_t s = 0; s < seeds; ++s) {
        const PointPattern p = sample_process(c, w, derive_seed(seed, s));
        for (const auto& n : names) {
            SpectralEstimate e;
            if (n == "si") e = scattering_intensity(p, grid, false);
            if (n == "si_self_normalized") e = scattering_intensity(p, grid, true);
            if (n == "ddt") e = tapered(p, grid, *t0, Debias::Direct);
            if (n == "udt") e = tapered(p, grid, *t0, Debias::Undirect);
            if (n == "ddmt") e = multitaper(p, grid, tapers, Debias::Direct);
            if (n == "udmt") e = multitaper(p, grid, tapers, Debias::Undirect);
            by_name[n].push_back(std::move(e));
        }
    }
    const auto exact = exact_structure_factor(c);
    std::map<std::string, ImseResult> results;
    const std::string prefix = c.get("out");
    std::ofstream table(prefix + "_imse.csv");
    table << "estimator,imse,ci_lo,ci_hi,ivar\n";
    for (const auto& n : names) {
        results[n] = imse(by_name[n], exact, k_lo, k_hi);
        const auto& r = results[n];
        table << n << "," << format_double(r.mean) << "," << format_double(r.ci_lo) << "," << format_double(r.ci_hi)
              << "," << format_double(r.ivar) << "\n";
    }
    std::ofstream ttable(prefix + "_ttest.csv");
    ttable << "a,b,t,p_one_sided\n";
    for (const auto& a : names) {
        for (const auto& b : names) {
            if (a == b) continue;
            const auto r = paired_t_test(results[a].per_seed, results[b].per_seed, true);
            ttable << a << "," << b << "," << format_double(r.t) << "," << format_double(r.p) << "\n";
        }
    }
    std::ofstream per_seed(prefix + "_per_seed.csv");
    per_seed << "seed";
    for (const auto& n : names) per_seed << "," << n;
    per_seed << "\n";
    for (std::size_t s = 0; s < seeds; ++s) {
        per_seed << s;
        for (const auto& n : names) per_seed << "," << format_double(results[n].per_seed[s]);
        per_seed << "\n";
    }
}

void cmd_plotdata(const RunConfig& c) {
    const SpectralEstimate e = load_estimate(c.get("input"));
    std::function<double(double)> exact;
    if (c.is_set("overlay")) exact = exact_structure_factor(c, "overlay");
    std::vector<std::size_t> order(e.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return e.wavenumbers[a] < e.wavenumbers[b]; });
    std::ofstream out(c.get("out"));
    if (!out) throw ValidationError("cannot write " + c.get("out"));
    out << "log10_k,log10_s" << (exact ? ",log10_s_exact" : "") << "\n";
    std::size_t excluded = 0;
    std::vector<double> lk, ls, ok, os;
    for (std::size_t i : order) {
        const double k = e.wavenumbers[i];
        const double s = e.values[i];
        if (!(k > 0.0) || !(s > 0.0)) {
            ++excluded;
            continue;
        }
        lk.push_back(std::log10(k));
        ls.push_back(std::log10(s));
        out << format_double(lk.back()) << "," << format_double(ls.back());
        if (exact) {
            const double v = exact(k);
            out << "," << (v > 0.0 ? format_double(std::log10(v)) : std::string("nan"));
            if (v > 0.0) {
                ok.push_back(std::log10(k));
                os.push_back(std::log10(v));
            }
        }
        out << "\n";
    }
    KeyValue meta;
    meta.set_int("excluded_nonpositive", static_cast<long long>(excluded));
    meta.set_int("plotted", static_cast<long long>(lk.size()));
    meta.write(c.get("out") + ".meta");
    if (excluded > 0) std::cerr << "excluded " << excluded << " nonpositive value(s)\n";
    if (c.is_set("svg")) {
        const std::string title = e.metadata.count("estimator") ? e.metadata.at("estimator") : "estimate";
        write_text(c.get("svg"), render_loglog_svg(lk, ls, ok, os, title));
    }
}

void execute(const RunConfig& config) {
    config.check_required();
    const std::string& cmd = config.command();
    if (cmd == "sample") cmd_sample(config);
    else if (cmd == "estimate") cmd_estimate(config);
    else if (cmd == "pcf") cmd_pcf(config);
    else if (cmd == "hindex") cmd_hindex(config);
    else if (cmd == "alpha") cmd_alpha(config);
    else if (cmd == "test") cmd_test(config);
    else if (cmd == "benchmark") cmd_benchmark(config);
    else if (cmd == "plotdata") cmd_plotdata(config);
    else throw ValidationError("unknown subcommand '" + cmd + "'");

    KeyValue manifest = config.to_keyvalue();
    manifest.set("build", build_info());
    manifest.set("eigen_backend", std::string(linalg::lapack_available() ? "lapack" : "reference"));
    manifest.set("rng", std::string("mt19937_64 seeded by seed_seq; replication seeds splitmix64(splitmix64(seed) + index)"));
    manifest.write(config.get("out") + ".manifest");
}

int run(int argc, char** argv) {
    CLI::App app{"Structure factor estimation and hyperuniformity diagnostics"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: SFAC_THREADS or all cores)");

    struct Sub {
        CLI::App* app;
        std::string config_path;
        std::map<std::string, std::string> values;
    };
    std::map<std::string, std::unique_ptr<Sub>> subs;
    for (const auto& name : command_names()) {
        auto sub = std::make_unique<Sub>();
        sub->app = app.add_subcommand(name);
        sub->app->add_option("--config", sub->config_path, "key = value configuration file");
        for (const auto& o : options_for(name)) {
            std::string help = o.help;
            if (!o.default_value.empty()) help += " [" + o.default_value + "]";
            if (o.required) help += " (required)";
            sub->app->add_option("--" + o.key, sub->values[o.key], help);
        }
        subs[name] = std::move(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (threads == 0) {
            if (const char* env = std::getenv("SFAC_THREADS")) threads = std::atoi(env);
        }
        if (threads < 0) throw ValidationError("thread count must be positive");
        if (threads > 0) kernels::set_threads(threads);
        for (const auto& [name, sub] : subs) {
            if (!sub->app->parsed()) continue;
            RunConfig config = sub->config_path.empty() ? RunConfig(name) : RunConfig::from_file(name, sub->config_path);
            for (const auto& o : options_for(name)) {
                if (sub->app->count("--" + o.key) > 0) config.set(o.key, sub->values[o.key]);
            }
            execute(config);
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sfac::cli
