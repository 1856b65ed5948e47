#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "walls/config.hpp"
#include "walls/render.hpp"

using namespace walls;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ConfigParse", "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("ConfigParse", "cannot write " + out_path);
    out << text;
}

// cache files carry a version line and the config hash; any mismatch and
// the artifact is recomputed
constexpr const char* kCacheVersion = "walls-cache-v1";

std::string cache_lookup(const std::string& dir, const std::string& key) {
    if (dir.empty()) return {};
    fs::path file = fs::path(dir) / ("diagram-" + key + ".txt");
    std::ifstream in(file);
    if (!in) return {};
    std::string version, stored_key;
    std::getline(in, version);
    std::getline(in, stored_key);
    if (version != kCacheVersion || stored_key != key) return {};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void cache_store(const std::string& dir, const std::string& key, const std::string& artifact) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    fs::path file = fs::path(dir) / ("diagram-" + key + ".txt");
    std::ofstream out(file, std::ios::binary);
    out << kCacheVersion << "\n" << key << "\n" << artifact;
}

RatPoint parse_point_flag(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw Error("ConfigParse", "point flag needs 'x,y'");
    return {parse_rat(s.substr(0, comma)), parse_rat(s.substr(comma + 1))};
}

std::string completed_diagram_text(const std::string& cfg, int order, const std::string& cache_dir) {
    std::string key = config_hash(cfg, order);
    std::string cached = cache_lookup(cache_dir, key);
    if (!cached.empty()) return cached;
    auto model = load_toric_model(cfg);
    auto full = complete(blowup_initial_diagram(model, order), order, ExecMode::parallel);
    std::string text = full.str();
    cache_store(cache_dir, key, text);
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"walls: scattering diagrams, broken lines and LG potentials on toric models"};
    app.require_subcommand(1);

    std::string input, out, cache_dir, stop_flag = "1/3,2/7", chamber = "central", filter_flag;
    int order = 4, source = -1;
    double t_numeric = 0;
    double svg_scale = 24, viewport = 12;

    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input) cmd->add_option("input", input, "config or artifact file")->required();
        cmd->add_option("--out", out, "output path (default stdout)");
        cmd->add_option("--order", order, "curve-class order cap");
        cmd->add_option("--cache-dir", cache_dir, "diagram cache directory");
    };

    auto* c_complete = app.add_subcommand("complete", "consistency completion of a toric model");
    add_common(c_complete);

    auto* c_theta = app.add_subcommand("theta", "broken-line dump with stop at --stop");
    add_common(c_theta);
    c_theta->add_option("--stop", stop_flag, "stop point 'x,y'");
    c_theta->add_option("--source", source, "restrict to one source ray");

    auto* c_potential = app.add_subcommand("potential", "chamber potential at --stop");
    add_common(c_potential);
    c_potential->add_option("--stop", stop_flag, "stop point 'x,y'");
    c_potential->add_option("--filter", filter_flag, "comma-separated blowdown labels");

    auto* c_tropical = app.add_subcommand("tropical", "bulk disc count against the toric formula");
    add_common(c_tropical);

    auto* c_cluster = app.add_subcommand("cluster", "quotient initial diagram report");
    add_common(c_cluster);

    auto* c_dp5 = app.add_subcommand("dp5", "critical point report of the dp5 mirror");
    add_common(c_dp5);
    c_dp5->add_option("--t-numeric", t_numeric, "Novikov specialisation in (0,1)");
    c_dp5->add_option("--chamber", chamber, "central | up | right");

    auto* c_render = app.add_subcommand("render", "SVG for a diagram or broken-line artifact");
    add_common(c_render);
    c_render->add_option("--svg-scale", svg_scale, "pixels per lattice unit");
    c_render->add_option("--viewport", viewport, "half-width in lattice units");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_complete->parsed()) {
            emit(out, completed_diagram_text(slurp(input), order, cache_dir));
        } else if (c_theta->parsed()) {
            auto cfg = slurp(input);
            auto model = load_toric_model(cfg);
            auto full = complete(blowup_initial_diagram(model, order), order, ExecMode::parallel);
            RatPoint stop = parse_point_flag(stop_flag);
            emit(out, broken_line_dump(full, model, stop, source));
        } else if (c_potential->parsed()) {
            auto cfg = slurp(input);
            auto model = load_toric_model(cfg);
            auto full = complete(blowup_initial_diagram(model, order), order, ExecMode::parallel);
            auto pot = potential(full, model, parse_point_flag(stop_flag), ExecMode::parallel);
            if (!filter_flag.empty()) {
                std::vector<std::string> labels;
                std::stringstream ss(filter_flag);
                std::string item;
                while (std::getline(ss, item, ',')) labels.push_back(item);
                pot = blowdown_filter(pot, labels);
            }
            emit(out, pot.str() + "\n");
        } else if (c_tropical->parsed()) {
            RatPoint stop{Rat(0), Rat(0)};
            auto chain = load_chain(slurp(input), stop);
            auto bulk = bulk_potential_via_chain(chain, stop);
            auto target = semifano_toric_potential(chain.fans().back());
            std::ostringstream os;
            os << "bulk count (stop " << stop.str() << ")\n";
            for (auto& [m, c] : lattice_coefficients(bulk)) os << "  z^" << m.str() << " : " << c.str() << "\n";
            os << "final-fan formula\n";
            for (auto& [m, c] : lattice_coefficients(target)) os << "  z^" << m.str() << " : " << c.str() << "\n";
            bool match = lattice_coefficients(bulk) == lattice_coefficients(target);
            os << (match ? "MATCH\n" : "MISMATCH\n");
            emit(out, os.str());
        } else if (c_cluster->parsed()) {
            Seed seed;
            auto data = load_cluster_data(slurp(input), seed);
            auto q = kernel_quotient(data, seed);
            auto rep = cluster_initial_diagram(q);
            std::ostringstream os;
            os << "quotient images\n";
            for (size_t i = 0; i < q.e_bar.size(); ++i)
                os << "  e" << i + 1 << " -> " << q.e_bar[i].str() << "  ind(d e) = " << q.ind_de[i]
                   << "  ind(v) = " << q.ind_v[i] << "\n";
            os << "initial walls (blowup route)\n";
            for (const auto& w : rep.blowup_side)
                os << "  (1 + z^" << w.monomial.str() << ")^" << w.exponent << "\n";
            os << "initial walls (dual route)\n";
            for (const auto& w : rep.langlands_side)
                os << "  (1 + z^" << w.monomial.str() << ")^" << w.exponent << "\n";
            os << (rep.equal ? "EQUAL" : "DIFFER") << "\n";
            os << "note: " << rep.orientation_note << "\n";
            emit(out, os.str());
        } else if (c_dp5->parsed()) {
            auto params = load_dp5_params(slurp(input));
            if (t_numeric > 0) params.t_numeric = t_numeric;
            auto pts = critical_points(params);
            auto cases = classify_valuations(pts, params);
            auto rep = verify_nondegeneracy(pts, params);
            std::ostringstream os;
            Dp5Chamber ch = chamber == "up"      ? Dp5Chamber::up
                            : chamber == "right" ? Dp5Chamber::right
                            : chamber == "central"
                                ? Dp5Chamber::central
                                : throw Error("ConfigParse", "unknown chamber " + chamber);
            auto pot = dp5_potential(params, ch, order, true);
            os << "chamber potential (" << chamber << ", eps = 0): " << pot.series.str() << "\n";
            os << "critical points at t = " << params.t_numeric << "\n";
            for (size_t i = 0; i < pts.size(); ++i) {
                const auto& cp = pts[i];
                os << "  [" << cp.chart << "] z1 = (" << cp.z1.real() << "," << cp.z1.imag()
                   << ") z2 = (" << cp.z2.real() << "," << cp.z2.imag() << ")";
                if (cp.chart != "non-geometric")
                    os << " val = (" << cp.val1 << "," << cp.val2 << ") |grad| = " << cp.grad_residual
                       << " |hess| = " << cp.hessian_det;
                os << "\n";
            }
            os << "valuation cases\n";
            for (const auto& vc : cases)
                os << "  point " << vc.point_index << ": case " << vc.label << " predicted ("
                   << vc.predicted1 << "," << vc.predicted2 << ") measured (" << vc.measured1 << ","
                   << vc.measured2 << ") " << (vc.ok ? "ok" : "mismatch") << "\n";
            os << "gamma2 equals the negative quintic: " << (rep.gamma2_is_negative_quintic ? "yes" : "no")
               << "\n";
            os << "min relative Hessian det: " << rep.min_hessian_det << "\n";
            emit(out, os.str());
        } else if (c_render->parsed()) {
            RenderOptions ropts;
            ropts.scale = svg_scale;
            ropts.viewport = viewport;
            emit(out, render_svg(slurp(input), ropts));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        bool config = e.code == "ConfigParse" || e.code == "BadModel";
        return config ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
