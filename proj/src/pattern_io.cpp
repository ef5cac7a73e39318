#include "sfac/pattern_io.hpp"

#include <fstream>
#include <sstream>

#include "sfac/error.hpp"

namespace sfac {

std::string metadata_path(const std::string& pattern_path) { return pattern_path + ".meta"; }

void write_window(KeyValue& kv, const Window& w) {
    kv.set_int("window.dim", w.dim());
    if (w.is_box()) {
        kv.set("window.type", std::string("box"));
        kv.set("window.lengths", w.lengths());
    } else {
        kv.set("window.type", std::string("ball"));
        kv.set("window.radius", w.radius());
    }
}

Window read_window(const KeyValue& kv) {
    const std::string type = kv.require("window.type");
    if (type == "box") {
        Window w = Window::box(kv.require_doubles("window.lengths"));
        if (kv.has("window.dim") && static_cast<int>(kv.require_double("window.dim")) != w.dim()) {
            throw ValidationError("window.dim disagrees with window.lengths");
        }
        return w;
    }
    if (type == "ball") {
        const int dim = kv.has("window.dim") ? static_cast<int>(kv.require_double("window.dim")) : 2;
        return Window::ball(dim, kv.require_double("window.radius"));
    }
    throw ValidationError("window.type must be 'box' or 'ball', got '" + type + "'");
}

void save_pattern(const std::string& path, const PointPattern& p, std::optional<std::uint64_t> seed,
                  const KeyValue& extra) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    const int d = p.dim();
    for (int j = 0; j < d; ++j) out << (j ? "," : "") << "x" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto x = p.point(i);
        for (int j = 0; j < d; ++j) out << (j ? "," : "") << format_double(x[static_cast<std::size_t>(j)]);
        out << "\n";
    }
    KeyValue kv = extra;
    write_window(kv, p.window());
    if (p.intensity()) kv.set("intensity", *p.intensity());
    if (seed) kv.set("seed", std::to_string(*seed));
    kv.write(metadata_path(path));
}

LoadedPattern load_pattern_with_metadata(const std::string& path) {
    const KeyValue meta = KeyValue::read(metadata_path(path));
    const Window w = read_window(meta);
    const auto d = static_cast<std::size_t>(w.dim());
    std::vector<double> shift(d, 0.0);
    if (meta.has("window.center")) {
        shift = meta.require_doubles("window.center");
        if (shift.size() != d) throw ValidationError("window.center has the wrong dimension");
    }
    std::optional<double> rho;
    if (meta.has("intensity")) rho = meta.require_double("intensity");

    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path + ": missing header");
    std::vector<double> coords;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> x;
        try {
            x = parse_double_list(line, "row " + std::to_string(row));
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": malformed row " + std::to_string(row) + ": " + e.what());
        }
        if (x.size() != d) {
            throw ValidationError(path + ": row " + std::to_string(row) + " has " + std::to_string(x.size()) +
                                  " coordinates, window dimension is " + std::to_string(d));
        }
        for (std::size_t j = 0; j < d; ++j) x[j] -= shift[j];
        if (!w.contains(x)) {
            throw ValidationError(path + ": row " + std::to_string(row) + " lies outside " + w.describe());
        }
        coords.insert(coords.end(), x.begin(), x.end());
    }
    return LoadedPattern{PointPattern(w, std::move(coords), rho), meta, shift};
}

PointPattern load_pattern(const std::string& path) { return load_pattern_with_metadata(path).pattern; }

}  // namespace sfac
