#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "ninpath/app.hpp"

namespace ninpath {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

class Canvas {
public:
    Canvas(Point lo, Point hi) : lo_(lo), hi_(hi) {}
    std::string x(double wx) const { return fmt(wx - lo_.x()); }
    std::string y(double wy) const { return fmt(hi_.y() - wy); }
    std::string xy(const Point& p) const { return x(p.x()) + "," + y(p.y()); }
    double width() const { return hi_.x() - lo_.x(); }
    double height() const { return hi_.y() - lo_.y(); }

private:
    Point lo_, hi_;
};

std::vector<Pose> chain_samples(const std::vector<Pose>& states, const Vehicle& v) {
    std::vector<Pose> out;
    const double step = path_step(v);
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const auto path = shortest_path(states[i], states[i + 1], v.kinematics.turn_radius);
        auto pts = sample_path(path, states[i], step);
        if (!out.empty() && !pts.empty()) pts.erase(pts.begin());
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

}  // namespace

std::string render_svg(const ScenarioFile& file, const Solution& sol) {
    check_pair(file, sol);
    const Scenario& sc = file.scenario;

    auto [lo, hi] = file.region.bounds();
    double pad = 0;
    auto grow = [&](const Point& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    };
    for (const auto& v : sc.vehicles) {
        grow(v.depot);
        grow(v.terminal);
        pad = std::max(pad, v.sensor.r_sen + std::max(std::abs(v.sensor.offset_min), std::abs(v.sensor.offset_max)));
    }
    for (const auto& v : sol.vehicles)
        for (const auto& p : v.visit_states) grow(p.position());
    pad = std::max(pad, 0.05 * std::max(hi.x() - lo.x(), hi.y() - lo.y()));
    lo -= Point(pad, pad);
    hi += Point(pad, pad);
    const Canvas c(lo, hi);
    const double unit = std::max(c.width(), c.height()) / 800.0;

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(c.width()) << ' ' << fmt(c.height())
      << "\" width=\"" << fmt(c.width() / unit) << "\" height=\"" << fmt(c.height() / unit) << "\">\n";
    o << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
         "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333\"/></marker></defs>\n";
    o << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << fmt(c.width()) << "\" height=\""
      << fmt(c.height()) << "\" fill=\"white\"/>\n";
    if (file.region.shape == Region::Shape::circle) {
        o << "<circle class=\"region\" cx=\"" << c.x(file.region.center.x()) << "\" cy=\""
          << c.y(file.region.center.y()) << "\" r=\"" << fmt(file.region.radius) << "\" fill=\"none\" stroke=\"#999\" "
          << "stroke-width=\"" << fmt(unit) << "\"/>\n";
    } else {
        o << "<rect class=\"region\" x=\"" << c.x(file.region.min.x()) << "\" y=\"" << c.y(file.region.max.y())
          << "\" width=\"" << fmt(file.region.max.x() - file.region.min.x()) << "\" height=\""
          << fmt(file.region.max.y() - file.region.min.y()) << "\" fill=\"none\" stroke=\"#999\" stroke-width=\""
          << fmt(unit) << "\"/>\n";
    }

    for (const auto& v : sol.vehicles) {
        if (!v.active) continue;
        const auto& veh = sc.vehicle(v.vehicle);
        const char* colour = kPalette[static_cast<std::size_t>(v.vehicle - 1) % kPalette.size()];
        const auto samples = chain_samples(v.visit_states, veh);
        o << "<g class=\"vehicle\" id=\"vehicle-" << v.vehicle << "\">\n";
        std::string centres, trace;
        for (const auto& p : samples) {
            if (!trace.empty()) {
                trace += ' ';
                centres += ' ';
            }
            trace += c.xy(p.position());
            centres += c.xy(footprint_center(p, veh.sensor));
        }
        o << "<polyline class=\"swept\" points=\"" << centres << "\" fill=\"none\" stroke=\"" << colour
          << "\" stroke-opacity=\"0.15\" stroke-linecap=\"round\" stroke-linejoin=\"round\" stroke-width=\""
          << fmt(2 * veh.sensor.r_sen) << "\"/>\n";
        o << "<polyline class=\"path\" points=\"" << trace << "\" fill=\"none\" stroke=\"" << colour
          << "\" stroke-width=\"" << fmt(2 * unit) << "\"/>\n";
        for (std::size_t i = 1; i + 1 < v.visit_states.size(); ++i) {
            const Pose& p = v.visit_states[i];
            if (veh.sensor.polygon) {
                std::string pts;
                for (const auto& q : *veh.sensor.polygon) {
                    if (!pts.empty()) pts += ' ';
                    pts += c.xy(p.position() + rotate(q, p.theta));
                }
                o << "<polygon class=\"footprint\" points=\"" << pts << "\" fill=\"" << colour
                  << "\" fill-opacity=\"0.1\" stroke=\"" << colour << "\" stroke-width=\"" << fmt(unit) << "\"/>\n";
            } else {
                const Point f = footprint_center(p, veh.sensor);
                o << "<circle class=\"footprint\" cx=\"" << c.x(f.x()) << "\" cy=\"" << c.y(f.y()) << "\" r=\""
                  << fmt(veh.sensor.r_sen) << "\" fill=\"" << colour << "\" fill-opacity=\"0.1\" stroke=\"" << colour
                  << "\" stroke-width=\"" << fmt(unit) << "\"/>\n";
            }
        }
        for (const auto& p : v.visit_states) {
            const Point tip = p.position() + 20 * unit * p.heading_vector();
            o << "<line class=\"state\" x1=\"" << c.x(p.x) << "\" y1=\"" << c.y(p.y) << "\" x2=\"" << c.x(tip.x())
              << "\" y2=\"" << c.y(tip.y()) << "\" stroke=\"#333\" stroke-width=\"" << fmt(unit)
              << "\" marker-end=\"url(#arrow)\"/>\n";
        }
        o << "</g>\n";
    }

    for (const auto& t : sc.tasks) {
        o << "<circle class=\"task\" cx=\"" << c.x(t.position.x()) << "\" cy=\"" << c.y(t.position.y())
          << "\" r=\"" << fmt(4 * unit) << "\" fill=\"black\"/>\n";
        o << "<text class=\"label\" x=\"" << c.x(t.position.x() + 6 * unit) << "\" y=\""
          << c.y(t.position.y() + 6 * unit) << "\" font-size=\"" << fmt(12 * unit) << "\">" << t.id << "</text>\n";
    }
    for (const auto& v : sc.vehicles) {
        const double s = 8 * unit;
        o << "<rect class=\"depot\" x=\"" << c.x(v.depot.x() - s / 2) << "\" y=\"" << c.y(v.depot.y() + s / 2)
          << "\" width=\"" << fmt(s) << "\" height=\"" << fmt(s) << "\" fill=\"#444\"/>\n";
        o << "<polygon class=\"terminal\" points=\"" << c.xy(v.terminal + Point(0, s)) << ' '
          << c.xy(v.terminal + Point(-s, -s)) << ' ' << c.xy(v.terminal + Point(s, -s)) << "\" fill=\"#444\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace ninpath
