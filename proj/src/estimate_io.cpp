#include "sfac/estimate_io.hpp"

#include <fstream>
#include <sstream>

#include "sfac/error.hpp"

namespace sfac {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

std::vector<std::vector<double>> read_table(const std::string& path, std::string& header) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    if (!std::getline(in, header)) throw ValidationError(path + ": missing header");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(parse_double_list(line, path + " row " + std::to_string(row)));
    }
    return rows;
}

}  // namespace

void save_estimate(const std::string& path, const SpectralEstimate& e) {
    auto out = open_out(path);
    const bool vectors = !e.wavevectors.empty();
    out << "k";
    if (vectors) {
        for (int j = 0; j < e.dim; ++j) out << ",k" << (j + 1);
    }
    out << ",s_hat\n";
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        out << format_double(e.wavenumbers[i]);
        if (vectors) {
            for (int j = 0; j < e.dim; ++j) {
                out << "," << format_double(e.wavevectors[i * static_cast<std::size_t>(e.dim) + static_cast<std::size_t>(j)]);
            }
        }
        out << "," << format_double(e.values[i]) << "\n";
    }
    KeyValue kv;
    for (const auto& [k, v] : e.metadata) kv.set(k, v);
    kv.set_int("dim", e.dim);
    kv.write(path + ".meta");
}

SpectralEstimate load_estimate(const std::string& path) {
    std::string header;
    const auto rows = read_table(path, header);
    SpectralEstimate e;
    std::size_t columns = 1;
    for (char c : header) columns += (c == ',');
    if (columns < 2) throw ValidationError(path + ": expected at least columns k,s_hat");
    const std::size_t d = columns - 2;
    std::ifstream meta_in(path + ".meta");
    if (meta_in) {
        const KeyValue kv = KeyValue::read(path + ".meta");
        for (const auto& [k, v] : kv.entries()) {
            if (k != "dim") e.metadata[k] = v;
        }
        if (kv.has("dim")) e.dim = static_cast<int>(kv.require_double("dim"));
    }
    if (d > 0) e.dim = static_cast<int>(d);
    for (const auto& r : rows) {
        if (r.size() != columns) throw ValidationError(path + ": inconsistent column count");
        e.wavenumbers.push_back(r.front());
        for (std::size_t j = 0; j < d; ++j) e.wavevectors.push_back(r[1 + j]);
        e.values.push_back(r.back());
    }
    return e;
}

void save_bins(const std::string& path, const SpectralEstimate& e) {
    auto out = open_out(path);
    out << "k_bin,mean,std,count\n";
    for (const auto& b : e.bins) {
        out << format_double(b.center) << "," << format_double(b.mean) << "," << format_double(b.std_of_mean) << ","
            << b.count << "\n";
    }
}

void save_pcf(const std::string& path, const PcfEstimate& e) {
    auto out = open_out(path);
    out << "r,g_hat\n";
    for (std::size_t i = 0; i < e.radii.size(); ++i) {
        out << format_double(e.radii[i]) << "," << format_double(e.values[i]) << "\n";
    }
    KeyValue kv;
    kv.set("pcf.r_max", e.r_max);
    kv.set("pcf.bandwidth", e.bandwidth);
    kv.set("pcf.method", e.method);
    std::string flags;
    for (std::size_t i = 0; i < e.unreliable.size(); ++i) {
        if (e.unreliable[i]) flags += (flags.empty() ? "" : ",") + format_double(e.radii[i]);
    }
    kv.set("pcf.unreliable_radii", flags.empty() ? std::string("none") : flags);
    kv.write(path + ".meta");
}

PcfEstimate load_pcf(const std::string& path) {
    std::string header;
    const auto rows = read_table(path, header);
    PcfEstimate e;
    for (const auto& r : rows) {
        if (r.size() != 2) throw ValidationError(path + ": expected columns r,g_hat");
        e.radii.push_back(r[0]);
        e.values.push_back(r[1]);
        e.unreliable.push_back(false);
    }
    if (e.radii.empty()) throw ValidationError(path + ": empty pcf table");
    e.r_max = e.radii.back();
    std::ifstream meta_in(path + ".meta");
    if (meta_in) {
        const KeyValue kv = KeyValue::read(path + ".meta");
        if (kv.has("pcf.r_max")) e.r_max = kv.require_double("pcf.r_max");
        if (kv.has("pcf.bandwidth")) {
            e.bandwidth = kv.require_double("pcf.bandwidth");
            for (std::size_t i = 0; i < e.radii.size(); ++i) e.unreliable[i] = e.radii[i] < 0.5 * e.bandwidth;
        }
        if (kv.has("pcf.method")) e.method = kv.require("pcf.method");
    }
    return e;
}

KeyValue to_keyvalue(const TestReport& r) {
    KeyValue kv;
    kv.set("z_bar", r.z_bar);
    kv.set("sigma_bar", r.sigma_bar);
    kv.set("ci_lo", r.ci_lo);
    kv.set("ci_hi", r.ci_hi);
    kv.set("z", r.z_multiplier);
    kv.set("reject", std::string(r.reject ? "true" : "false"));
    kv.set_int("A", static_cast<long long>(r.A));
    kv.set("lambda", r.lambda);
    kv.set("estimator", r.estimator);
    kv.set("schedule", r.schedule);
    return kv;
}

TestReport test_report_from_keyvalue(const KeyValue& kv) {
    TestReport r;
    r.z_bar = kv.require_double("z_bar");
    r.sigma_bar = kv.require_double("sigma_bar");
    r.ci_lo = kv.require_double("ci_lo");
    r.ci_hi = kv.require_double("ci_hi");
    if (kv.has("z")) r.z_multiplier = kv.require_double("z");
    const std::string rej = kv.require("reject");
    if (rej != "true" && rej != "false") throw ValidationError("reject must be true or false");
    r.reject = rej == "true";
    r.A = static_cast<std::size_t>(kv.require_double("A"));
    r.lambda = kv.require_double("lambda");
    r.estimator = kv.require("estimator");
    r.schedule = kv.require("schedule");
    return r;
}

}  // namespace sfac
