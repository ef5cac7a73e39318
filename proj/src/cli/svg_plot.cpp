#include "sfac/cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfac::cli {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_loglog_svg(const std::vector<double>& log_k, const std::vector<double>& log_s,
                              const std::vector<double>& overlay_log_k, const std::vector<double>& overlay_log_s,
                              const std::string& title) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 480.0;
    constexpr double kMargin = 60.0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    bool first = true;
    auto extend = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (first) {
                x0 = x1 = xs[i];
                y0 = y1 = ys[i];
                first = false;
            }
            x0 = std::min(x0, xs[i]);
            x1 = std::max(x1, xs[i]);
            y0 = std::min(y0, ys[i]);
            y1 = std::max(y1, ys[i]);
        }
    };
    extend(log_k, log_s);
    extend(overlay_log_k, overlay_log_s);
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
    auto py = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
       << "</text>\n";
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
       << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">log10 k  ["
       << x0 << ", " << x1 << "]</text>\n";
    os << "<text x=\"15\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 15 " << kHeight / 2
       << ")\" text-anchor=\"middle\">log10 S  [" << y0 << ", " << y1 << "]</text>\n";
    for (std::size_t i = 0; i < log_k.size(); ++i) {
        os << "<circle cx=\"" << px(log_k[i]) << "\" cy=\"" << py(log_s[i]) << "\" r=\"2\" fill=\"steelblue\"/>\n";
    }
    if (!overlay_log_k.empty()) {
        os << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < overlay_log_k.size(); ++i) {
            os << px(overlay_log_k[i]) << "," << py(overlay_log_s[i]) << " ";
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sfac::cli
