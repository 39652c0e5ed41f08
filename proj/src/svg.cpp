#include "nhse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nhse {

namespace {

constexpr double width = 640, height = 480;
constexpr double left = 70, right = 150, top = 40, bottom = 60;

const char* label_colour(Label l) {
    switch (l) {
    case Label::skin: return "#1f77b4";
    case Label::defect: return "#d62728";
    case Label::hybrid: return "#9467bd";
    case Label::edge: return "#2ca02c";
    case Label::extended: return "#7f7f7f";
    }
    return "#000000";
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

Frame pad(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0)) {
        x0 -= 1;
        x1 += 1;
    }
    if (!(y1 > y0)) {
        y0 -= 1;
        y1 += 1;
    }
    const double dx = 0.05 * (x1 - x0), dy = 0.05 * (y1 - y0);
    return {x0 - dx, x1 + dx, y0 - dy, y1 + dy};
}

double nice_step(double span) {
    const double raw = span / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10) * mag;
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel,
          const std::string& title) {
    const double x_end = width - right, y_end = height - bottom;
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(x_end - left)
       << "\" height=\"" << num(y_end - top) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#000\">\n";
    const double sx = nice_step(f.x1 - f.x0);
    for (double v = std::ceil(f.x0 / sx) * sx; v <= f.x1; v += sx) {
        const double x = f.px(v);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y_end) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(y_end + 5) << "\" stroke=\"#000\"/>";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(y_end + 18) << "\" text-anchor=\"middle\">"
           << tick_text(v) << "</text>\n";
    }
    const double sy = nice_step(f.y1 - f.y0);
    for (double v = std::ceil(f.y0 / sy) * sy; v <= f.y1; v += sy) {
        const double y = f.py(v);
        os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\""
           << num(y) << "\" stroke=\"#000\"/>";
        os << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_text(v)
           << "</text>\n";
    }
    os << "<text x=\"" << num(0.5 * (left + x_end)) << "\" y=\"" << num(height - 15)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(xlabel) << "</text>\n";
    os << "<text x=\"18\" y=\"" << num(0.5 * (top + y_end)) << "\" text-anchor=\"middle\" font-size=\"13\" "
       << "transform=\"rotate(-90 18 " << num(0.5 * (top + y_end)) << ")\">" << escape(ylabel) << "</text>\n";
    os << "<text x=\"" << num(0.5 * (left + x_end)) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(title) << "</text>\n";
    os << "</g>\n";
}

std::string header() {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    return os.str();
}

} // namespace

std::string spectrum_svg(const std::vector<StateRecord>& states, const SpectralLoop* loop, const std::string& title) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto grow = [&](cplx z) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    };
    for (const auto& s : states) grow(s.energy);
    if (loop)
        for (const auto& c : loop->loops)
            for (const auto& z : c) grow(z);
    if (!std::isfinite(x0)) x0 = x1 = y0 = y1 = 0;
    const Frame f = pad(x0, x1, y0, y1);

    std::ostringstream os;
    os << header();
    axes(os, f, "Re E", "Im E", title);

    os << "<g id=\"loops\" fill=\"none\" stroke=\"#e0301e\" stroke-width=\"1\">\n";
    if (loop) {
        std::size_t total = 0;
        for (const auto& c : loop->loops) total += c.size();
        const std::size_t stride = std::max<std::size_t>(1, total / 40000);
        for (const auto& c : loop->loops) {
            os << "<path d=\"";
            for (std::size_t i = 0; i < c.size(); i += stride)
                os << (i ? " L" : "M") << num(f.px(c[i].real())) << " " << num(f.py(c[i].imag()));
            os << " Z\"/>\n";
        }
    }
    os << "</g>\n<g id=\"states\" stroke=\"none\">\n";
    for (const auto& s : states)
        os << "<circle cx=\"" << num(f.px(s.energy.real())) << "\" cy=\"" << num(f.py(s.energy.imag()))
           << "\" r=\"3\" fill=\"" << label_colour(s.label) << "\"><title>" << to_string(s.label) << "</title></circle>\n";
    os << "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double y = top + 10;
    for (Label l : all_labels) {
        os << "<circle cx=\"" << num(width - right + 20) << "\" cy=\"" << num(y) << "\" r=\"4\" fill=\""
           << label_colour(l) << "\"/><text x=\"" << num(width - right + 30) << "\" y=\"" << num(y + 4) << "\">"
           << to_string(l) << "</text>\n";
        y += 18;
    }
    os << "<line x1=\"" << num(width - right + 12) << "\" y1=\"" << num(y) << "\" x2=\"" << num(width - right + 28)
       << "\" y2=\"" << num(y) << "\" stroke=\"#e0301e\"/><text x=\"" << num(width - right + 30) << "\" y=\""
       << num(y + 4) << "\">PBC loop</text>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string profiles_svg(const Spectrum& s, const std::vector<std::size_t>& selected, std::size_t defect,
                         const std::string& title) {
    const auto n = static_cast<double>(s.eigenvectors.rows());
    double ymax = 0;
    for (auto j : selected) ymax = std::max(ymax, s.eigenvectors.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff());
    const Frame f = pad(0, std::max(1.0, n - 1), 0, ymax > 0 ? ymax : 1);

    std::ostringstream os;
    os << header();
    axes(os, f, "site index", "|psi_n|", title);
    os << "<line x1=\"" << num(f.px(static_cast<double>(defect))) << "\" y1=\"" << num(top) << "\" x2=\""
       << num(f.px(static_cast<double>(defect))) << "\" y2=\"" << num(height - bottom)
       << "\" stroke=\"#aaa\" stroke-dasharray=\"4 3\"/>\n";
    os << "<g id=\"profiles\" fill=\"none\" stroke-width=\"1.5\">\n";
    for (std::size_t k = 0; k < selected.size(); ++k) {
        const auto col = s.eigenvectors.col(static_cast<Eigen::Index>(selected[k]));
        os << "<path stroke=\"" << palette[k % 8] << "\" d=\"";
        for (Eigen::Index i = 0; i < col.size(); ++i)
            os << (i ? " L" : "M") << num(f.px(static_cast<double>(i))) << " " << num(f.py(std::abs(col(i))));
        os << "\"/>\n";
    }
    os << "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    double y = top + 10;
    for (std::size_t k = 0; k < selected.size() && k < 16; ++k) {
        const cplx e = s.eigenvalues[selected[k]];
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f%+.4fi", e.real(), e.imag());
        os << "<line x1=\"" << num(width - right + 8) << "\" y1=\"" << num(y) << "\" x2=\"" << num(width - right + 24)
           << "\" y2=\"" << num(y) << "\" stroke=\"" << palette[k % 8] << "\" stroke-width=\"2\"/><text x=\""
           << num(width - right + 28) << "\" y=\"" << num(y + 4) << "\">" << buf << "</text>\n";
        y += 16;
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace nhse
