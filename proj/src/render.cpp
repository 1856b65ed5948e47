#include "walls/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace walls {

std::string broken_line_dump(const ScatteringDiagram& diagram, const ToricModel& model,
                             const RatPoint& stop, int source) {
    std::ostringstream os;
    os << "broken-lines\n";
    os << "stop=" << stop.str() << "\n";
    auto ctx = diagram.context();
    for (size_t ray = 0; ray < model.fan.size(); ++ray) {
        if (source >= 0 && int(ray) != source) continue;
        for (const auto& bl : enumerate_broken_lines(diagram, model, stop, int(ray))) {
            os << "source_ray=" << bl.source_ray << " dir=" << model.fan[ray].str() << " bends=[";
            for (size_t i = 0; i < bl.bends.size(); ++i) {
                if (i) os << ", ";
                os << bl.bends[i].at.str() << "@" << bl.bends[i].wall_dir.str();
            }
            os << "] final=" << format_monomial(*ctx, bl.coeff, bl.final_m, bl.final_q) << "\n";
        }
    }
    return os.str();
}

std::string tropical_disc_dump(const TropicalDisc& disc) {
    std::ostringstream os;
    os << "tropical-disc\n";
    os << "root=" << disc.vertices[disc.root].str() << "\n";
    for (const auto& e : disc.edges) {
        os << "edge from=" << disc.vertices[e.a].str();
        if (e.b >= 0)
            os << " to=" << disc.vertices[e.b].str();
        else
            os << " dir=" << e.dir.str();
        os << " weight=" << e.weight << "\n";
    }
    for (const auto& c : disc.constraints) os << "point=" << c.str() << "\n";
    return os.str();
}

namespace {

struct Vec2 {
    double x = 0, y = 0;
};

double parse_number(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

// "(p,q)" with rational entries
Vec2 parse_pair(const std::string& s, size_t& pos) {
    size_t open = s.find('(', pos);
    size_t comma = s.find(',', open);
    size_t close = s.find(')', comma);
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos)
        throw Error("ConfigParse", "bad point in artifact: " + s);
    Vec2 v{parse_number(s.substr(open + 1, comma - open - 1)),
           parse_number(s.substr(comma + 1, close - comma - 1))};
    pos = close + 1;
    return v;
}

std::string truncate_terms(const std::string& f, size_t max_terms) {
    std::string out;
    size_t start = 0, shown = 0;
    while (shown < max_terms) {
        size_t plus = f.find(" + ", start);
        if (plus == std::string::npos) {
            out += f.substr(start);
            return out;
        }
        out += f.substr(start, plus - start) + " + ";
        start = plus + 3;
        ++shown;
    }
    return out + "...";
}

struct Canvas {
    std::ostringstream body;
    double scale, half;

    double X(double x) const { return half * scale + x * scale; }
    double Y(double y) const { return half * scale - y * scale; }

    void line(Vec2 a, Vec2 b, const char* klass) {
        body << "<line class=\"" << klass << "\" x1=\"" << X(a.x) << "\" y1=\"" << Y(a.y) << "\" x2=\""
             << X(b.x) << "\" y2=\"" << Y(b.y) << "\"/>\n";
    }
    void label(Vec2 at, const std::string& text) {
        body << "<text x=\"" << X(at.x) + 3 << "\" y=\"" << Y(at.y) - 3 << "\">" << text << "</text>\n";
    }
    void polyline(const std::vector<Vec2>& pts) {
        body << "<polyline points=\"";
        for (const auto& p : pts) body << X(p.x) << "," << Y(p.y) << " ";
        body << "\"/>\n";
    }
};

// clip base + t*dir to the square [-half, half]^2; returns false if outside
bool clip_param(Vec2 base, Vec2 dir, double half, double& t0, double& t1) {
    t0 = -1e18;
    t1 = 1e18;
    auto axis = [&](double b, double d) {
        if (std::abs(d) < 1e-12) return b >= -half && b <= half;
        double lo = (-half - b) / d, hi = (half - b) / d;
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
        return true;
    };
    if (!axis(base.x, dir.x) || !axis(base.y, dir.y)) return false;
    return t0 < t1;
}

}  // namespace

std::string render_svg(const std::string& artifact_text, const RenderOptions& opts) {
    Canvas cv;
    cv.scale = opts.scale;
    cv.half = opts.viewport;
    double size = 2 * opts.viewport * opts.scale;

    std::istringstream in(artifact_text);
    std::string first;
    std::getline(in, first);

    // axes on every canvas
    cv.line({-cv.half, 0}, {cv.half, 0}, "axis");
    cv.line({0, -cv.half}, {0, cv.half}, "axis");

    if (first.rfind("order_cap", 0) == 0) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            bool is_line = line.rfind("line", 0) == 0;
            bool is_ray = line.rfind("ray", 0) == 0;
            if (!is_line && !is_ray) continue;
            size_t pos = line.find("base=");
            Vec2 base = parse_pair(line, pos);
            pos = line.find("dir=", pos);
            Vec2 dir = parse_pair(line, pos);
            size_t fpos = line.find("f=", pos);
            std::string fn = fpos == std::string::npos ? "" : line.substr(fpos + 2);
            double t0, t1;
            if (!clip_param(base, dir, cv.half, t0, t1)) continue;
            if (is_ray) t0 = std::max(t0, 0.0);
            if (t0 >= t1) continue;
            Vec2 a{base.x + t0 * dir.x, base.y + t0 * dir.y};
            Vec2 b{base.x + t1 * dir.x, base.y + t1 * dir.y};
            cv.line(a, b, "wall");
            Vec2 mid{base.x + 0.65 * t1 * dir.x, base.y + 0.65 * t1 * dir.y};
            cv.label(mid, truncate_terms(fn, 3));
        }
    } else if (first.rfind("broken-lines", 0) == 0) {
        std::string line;
        std::getline(in, line);
        size_t pos = 0;
        Vec2 stop = parse_pair(line, pos);
        while (std::getline(in, line)) {
            if (line.rfind("source_ray=", 0) != 0) continue;
            size_t p = line.find("dir=");
            Vec2 dir = parse_pair(line, p);
            std::vector<Vec2> pts;
            size_t bends_at = line.find("bends=[", p);
            size_t bends_end = line.find(']', bends_at);
            size_t cursor = bends_at + 7;
            while (true) {
                size_t open = line.find('(', cursor);
                if (open == std::string::npos || open > bends_end) break;
                Vec2 at = parse_pair(line, cursor);
                pts.push_back(at);
                cursor = line.find('@', cursor);  // skip the wall direction pair
                if (cursor == std::string::npos || cursor > bends_end) break;
                size_t skip = cursor;
                parse_pair(line, skip);
                cursor = skip;
            }
            pts.push_back(stop);
            Vec2 anchor = pts.front();
            double norm = std::hypot(dir.x, dir.y);
            Vec2 start{anchor.x - dir.x / norm * cv.half * 2, anchor.y - dir.y / norm * cv.half * 2};
            std::vector<Vec2> poly{start};
            poly.insert(poly.end(), pts.begin(), pts.end());
            cv.polyline(poly);
        }
    } else if (first.rfind("tropical-disc", 0) == 0) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("edge ", 0) == 0) {
                size_t pos = line.find("from=");
                Vec2 a = parse_pair(line, pos);
                size_t to = line.find("to=");
                if (to != std::string::npos) {
                    size_t q = to;
                    Vec2 b = parse_pair(line, q);
                    cv.line(a, b, "wall");
                } else {
                    size_t q = line.find("dir=");
                    Vec2 d = parse_pair(line, q);
                    double norm = std::hypot(d.x, d.y);
                    cv.line(a, {a.x + d.x / norm * cv.half * 2, a.y + d.y / norm * cv.half * 2},
                            "wall");
                }
            } else if (line.rfind("point=", 0) == 0) {
                size_t pos = 0;
                Vec2 p = parse_pair(line, pos);
                cv.body << "<circle cx=\"" << cv.X(p.x) << "\" cy=\"" << cv.Y(p.y)
                        << "\" r=\"3\"/>\n";
            }
        }
    } else if (!first.empty()) {
        throw Error("ConfigParse", "unrecognised artifact kind");
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    svg << "<style>line.axis{stroke:#bbb;stroke-width:1}line.wall{stroke:#000;stroke-width:1.5}"
           "polyline{fill:none;stroke:#c22;stroke-width:1.2}text{font:10px monospace}</style>\n";
    svg << cv.body.str();
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace walls
