#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfac/core.hpp"
#include "sfac/keyvalue.hpp"

namespace sfac {

/// Sidecar metadata path of a pattern file: `<path>.meta`.
std::string metadata_path(const std::string& pattern_path);

/// Window description as metadata keys (window.type, window.lengths or
/// window.radius and window.dim).
void write_window(KeyValue& kv, const Window& w);
Window read_window(const KeyValue& kv);

/// Writes the CSV (header x1,...,xd) and its sidecar. `extra` entries are
/// copied into the sidecar.
void save_pattern(const std::string& path, const PointPattern& p, std::optional<std::uint64_t> seed = {},
                  const KeyValue& extra = {});

struct LoadedPattern {
    PointPattern pattern;
    KeyValue metadata;
    /// Subtracted from every point when the sidecar declares window.center.
    std::vector<double> shift;
};

/// Reads a pattern and its sidecar. Off-center data (window.center) is
/// recentered and the shift recorded.
LoadedPattern load_pattern_with_metadata(const std::string& path);
PointPattern load_pattern(const std::string& path);

}  // namespace sfac
