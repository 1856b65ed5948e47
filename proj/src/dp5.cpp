#include "walls/dp5.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace walls {

// ---------------------------------------------------------------- Poly

Poly Poly::var(const std::vector<std::string>& vars, const std::string& name) {
    Poly p(vars);
    std::vector<int> e(vars.size(), 0);
    e[p.index_(name)] = 1;
    p.add(Rat(1), std::move(e));
    return p;
}

Poly Poly::constant(const std::vector<std::string>& vars, const Rat& c) {
    Poly p(vars);
    p.add(c, std::vector<int>(vars.size(), 0));
    return p;
}

int Poly::index_(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return int(i);
    throw Error("UnknownClass", "polynomial variable " + name);
}

void Poly::add(const Rat& c, std::vector<int> exp) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(std::move(exp), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b.terms_) r.add(c, e);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [e, c] : b.terms_) r.add(-c, e);
    return r;
}

Poly Poly::operator-() const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.vars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            std::vector<int> e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add(ca * cb, std::move(e));
        }
    return r;
}

bool operator==(const Poly& a, const Poly& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }

Poly Poly::derivative(const std::string& name) const {
    int i = index_(name);
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        auto ne = e;
        --ne[i];
        r.add(c * Rat(e[i]), std::move(ne));
    }
    return r;
}

Poly Poly::substitute(const std::string& name, const Poly& value) const {
    int i = index_(name);
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        Poly term(vars_);
        auto base = e;
        int pw = base[i];
        base[i] = 0;
        term.add(c, base);
        for (int k = 0; k < pw; ++k) term *= value;
        r += term;
    }
    return r;
}

std::vector<Poly> Poly::coefficients_in(const std::string& name) const {
    int i = index_(name);
    int deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e[i]);
    std::vector<Poly> out(deg + 1, Poly(vars_));
    for (const auto& [e, c] : terms_) {
        auto ne = e;
        int pw = ne[i];
        ne[i] = 0;
        out[pw].add(c, ne);
    }
    return out;
}

std::complex<double> Poly::eval(const std::map<std::string, std::complex<double>>& point) const {
    std::vector<std::complex<double>> vals(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = point.find(vars_[i]);
        if (it == point.end()) throw Error("UnknownClass", "no value for variable " + vars_[i]);
        vals[i] = it->second;
    }
    std::complex<double> acc = 0;
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = c.to_double();
        for (size_t i = 0; i < vars_.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= vals[i];
        acc += t;
    }
    return acc;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        os << c.str();
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
        }
        first = false;
    }
    return os.str();
}

// ------------------------------------------------------------- model

void Dp5Params::validate() const {
    if (!(Rat(0) < a1 && a1 < a && Rat(0) < b1 && b1 < b))
        throw Error("BadModel", "need 0 < a' < a and 0 < b' < b");
    if (!(a > Rat(0) && b > Rat(0) && c > Rat(0))) throw Error("BadModel", "areas must be positive");
    if (!(t_numeric > 0 && t_numeric < 1)) throw Error("BadModel", "t_numeric must sit in (0,1)");
}

ToricModel dp5_model(const Dp5Params& p) {
    p.validate();
    ToricModel m;
    m.fan = Fan({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-1, -1}}, true);
    m.divisor_areas = {p.a, p.b, p.a, p.b, p.c};
    m.blowup_points.push_back({m.fan.ray_index({0, 1}), p.a1, 1, "eps1"});   // vertical wall x = a'
    m.blowup_points.push_back({m.fan.ray_index({1, 0}), -p.b1, 1, "eps2"});  // horizontal wall y = b'
    return m;
}

Potential dp5_potential(const Dp5Params& p, Dp5Chamber chamber, int order_cap, bool epsilon_zero) {
    auto m = dp5_model(p);
    auto full = complete(blowup_initial_diagram(m, order_cap), order_cap);
    RatPoint u{Rat(0), Rat(0)};
    switch (chamber) {
        case Dp5Chamber::central: u = {p.a1 * Rat(1, 3), p.b1 * Rat(2, 7)}; break;
        case Dp5Chamber::up: u = {p.a1 * Rat(1, 3), p.b1 + (p.b - p.b1) * Rat(3, 7)}; break;
        case Dp5Chamber::right: u = {p.a1 + (p.a - p.a1) * Rat(3, 7), p.b1 * Rat(2, 7)}; break;
    }
    auto pot = potential(full, m, u);
    if (epsilon_zero) pot.series = pot.series.collapse_labels({"eps1", "eps2"});
    return pot;
}

// ------------------------------------------------------------ symbols

namespace {

const std::vector<std::string> kVars = {"z1", "z2", "A", "B", "C", "L"};

Poly V(const std::string& n) { return Poly::var(kVars, n); }
Poly K(long long n) { return Poly::constant(kVars, Rat(n)); }

}  // namespace

Poly dp5_f() {
    Poly z1 = V("z1"), z2 = V("z2"), A = V("A"), B = V("B"), C = V("C");
    return z1 * z1 * z2 - (A + C) * z2 - A * z2 * z2 + B * z1 * z1 - C;
}

Poly dp5_g() {
    Poly z1 = V("z1"), z2 = V("z2"), A = V("A"), B = V("B"), C = V("C");
    return z1 * z2 * z2 - (B + C) * z1 - B * z1 * z1 + A * z2 * z2 - C;
}

Poly critical_quintic() {
    // (L + C)(L^2 - AB)^2 - C^2 (L + A)(L + B), the relation satisfied by
    // L = z1 z2 - C on the second critical branch
    Poly L = V("L"), A = V("A"), B = V("B"), C = V("C");
    Poly disc = L * L - A * B;
    return (L + C) * disc * disc - C * C * (L + A) * (L + B);
}

Poly displayed_quintic() {
    Poly L = V("L"), A = V("A"), B = V("B"), C = V("C");
    Poly AB = A * B;
    return L * L * L * L * L - L * L * L * L - K(2) * AB * L * L * L +
           (K(2) * AB - C * C) * L * L + (AB * AB - C * C * (A + B)) * L - AB * C * C - AB * AB;
}

Poly gamma2_cleared() {
    // gamma_2 = z1 z2 - C - L with z_i(L) substituted and the denominator
    // (L^2 - AB)^2 cleared
    Poly L = V("L"), A = V("A"), B = V("B"), C = V("C");
    Poly disc = L * L - A * B;
    Poly z1z2 = C * C * (L + A) * (L + B);  // times (L^2 - AB)^{-2}
    return z1z2 - (C + L) * disc * disc;
}

bool cubic_relation_check(int perturb_relation, bool flip_sign) {
    std::vector<std::string> xyz = {"x", "y", "z"};
    Poly x = Poly::var(xyz, "x"), y = Poly::var(xyz, "y"), z = Poly::var(xyz, "z");
    Poly one = Poly::constant(xyz, Rat(1));
    // u1 = x, v1 = -y (or +y when flipped), v2 = z
    Poly v1 = flip_sign ? y : -y;
    Poly u2 = x * v1 - one + Poly::constant(xyz, Rat(perturb_relation));
    Poly residual = u2 * z - one - x;  // u2 v2 - 1 - u1
    Poly target = -(x * y * z + x + z + one);
    return residual == target;
}

// ------------------------------------------------------------ numerics

namespace {

using Cx = std::complex<double>;

struct NumericContext {
    double A, B, C;

    Cx f(Cx z1, Cx z2) const {
        return z1 * z1 * z2 - (A + C) * z2 - A * z2 * z2 + B * z1 * z1 - C;
    }
    Cx g(Cx z1, Cx z2) const {
        return z1 * z2 * z2 - (B + C) * z1 - B * z1 * z1 + A * z2 * z2 - C;
    }
    double f_scale(Cx z1, Cx z2) const {
        return std::abs(z1 * z1 * z2) + (A + C) * std::abs(z2) + A * std::norm(z2) +
               B * std::norm(z1) + C;
    }
    double g_scale(Cx z1, Cx z2) const {
        return std::abs(z1 * z2 * z2) + (B + C) * std::abs(z1) + B * std::norm(z1) +
               A * std::norm(z2) + C;
    }

    // one Newton step on (f, g)
    void polish(Cx& z1, Cx& z2) const {
        for (int it = 0; it < 80; ++it) {
            Cx fv = f(z1, z2), gv = g(z1, z2);
            Cx f1 = 2.0 * z1 * z2 + 2.0 * B * z1;
            Cx f2 = z1 * z1 - (A + C) - 2.0 * A * z2;
            Cx g1 = z2 * z2 - (B + C) - 2.0 * B * z1;
            Cx g2 = 2.0 * z1 * z2 + 2.0 * A * z2;
            Cx det = f1 * g2 - f2 * g1;
            if (std::abs(det) < 1e-300) break;
            Cx d1 = (fv * g2 - f2 * gv) / det;
            Cx d2 = (f1 * gv - fv * g1) / det;
            z1 -= d1;
            z2 -= d2;
            if (std::abs(d1) + std::abs(d2) < 1e-15 * (std::abs(z1) + std::abs(z2) + 1)) break;
        }
    }
};

std::vector<Cx> durand_kerner(const std::vector<double>& coeffs) {
    // coeffs: monic, highest degree first
    int deg = int(coeffs.size()) - 1;
    auto eval = [&](Cx x) {
        Cx acc = 0;
        for (double c : coeffs) acc = acc * x + c;
        return acc;
    };
    double radius = 0;
    for (int i = 1; i <= deg; ++i)
        radius = std::max(radius, 2.0 * std::pow(std::abs(coeffs[i]), 1.0 / i));
    radius = std::max(radius, 1e-6);
    std::vector<Cx> roots(deg);
    Cx seed(0.4, 0.9);
    Cx w = 1;
    for (int i = 0; i < deg; ++i) {
        w *= seed;
        roots[i] = radius * w / std::abs(w) * (0.3 + 0.7 * (i + 1.0) / deg);
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0;
        for (int i = 0; i < deg; ++i) {
            Cx denom = 1;
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            Cx delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved += std::abs(delta);
        }
        if (moved < 1e-16 * radius) break;
    }
    return roots;
}

struct SolveOutput {
    std::vector<std::pair<Cx, Cx>> case1;             // two immersed-chart points
    std::vector<std::pair<std::pair<Cx, Cx>, Cx>> case2;  // ((z1,z2), lambda)
    std::pair<Cx, Cx> non_geometric;
};

SolveOutput solve_at(const Dp5Params& p, double t) {
    NumericContext nc{std::pow(t, p.a.to_double()), std::pow(t, p.b.to_double()),
                      std::pow(t, p.c.to_double())};
    SolveOutput out;
    // branch z1 + z2 + 1 = 0: z1^2 + (A - B + 1) z1 + A - C = 0
    {
        Cx pcoef = nc.A - nc.B + 1.0, qcoef = nc.A - nc.C;
        Cx disc = std::sqrt(pcoef * pcoef - 4.0 * qcoef);
        for (Cx z1 : {(-pcoef + disc) / 2.0, (-pcoef - disc) / 2.0}) {
            Cx z2 = -1.0 - z1;
            nc.polish(z1, z2);
            out.case1.push_back({z1, z2});
        }
        // order: first point has z1 near -1 + B, second has z1 near -A
        if (std::abs(out.case1[0].first) < 0.5) std::swap(out.case1[0], out.case1[1]);
    }
    // branch lambda = z1 z2 - C
    {
        Poly quintic = critical_quintic();
        auto coeff_polys = quintic.coefficients_in("L");
        std::vector<double> coeffs;  // highest degree first
        std::map<std::string, Cx> vals{{"z1", 0}, {"z2", 0}, {"A", nc.A}, {"B", nc.B}, {"C", nc.C}, {"L", 0}};
        for (int d = int(coeff_polys.size()) - 1; d >= 0; --d)
            coeffs.push_back(coeff_polys[d].eval(vals).real());
        auto roots = durand_kerner(coeffs);
        double sep_scale = 0;
        for (auto r : roots) sep_scale = std::max(sep_scale, std::abs(r));
        for (auto lam : roots) {
            Cx denom = lam * lam - nc.A * nc.B;
            Cx z1, z2;
            if (std::abs(denom) > 1e-6 * (std::abs(lam * lam) + nc.A * nc.B)) {
                z1 = nc.C * (lam + nc.A) / denom;
                z2 = nc.C * (lam + nc.B) / denom;
            } else {
                // near lambda^2 = AB the closed form degenerates; recover the
                // point from the symmetric functions s = 2C/(lambda - A-ish)
                Cx s = (2.0 * nc.C + 0.0) / (lam - (nc.A + nc.B) / 2.0 - ((nc.A - nc.B) / 2.0));
                Cx prod = lam + nc.C;
                Cx disc = std::sqrt(s * s - 4.0 * prod);
                z1 = (s + disc) / 2.0;
                z2 = (s - disc) / 2.0;
            }
            nc.polish(z1, z2);
            out.case2.push_back({{z1, z2}, z1 * z2 - nc.C});
        }
        // the degenerate recovery may duplicate one point and drop its twin:
        // separate duplicates by flipping to the conjugate quadratic root
        for (size_t i = 0; i < out.case2.size(); ++i)
            for (size_t j = i + 1; j < out.case2.size(); ++j) {
                auto& pi = out.case2[i].first;
                auto& pj = out.case2[j].first;
                if (std::abs(pi.first - pj.first) + std::abs(pi.second - pj.second) <
                    1e-9 * (1 + std::abs(pi.first))) {
                    pj = {pi.second, pi.first};  // swap branch
                    nc.polish(pj.first, pj.second);
                    out.case2[j].second = pj.first * pj.second - nc.C;
                }
            }
    }
    // rejected branch z1 + z2 = 0
    if (std::abs(nc.A - nc.B) > 1e-300) {
        Cx z1 = 2.0 * nc.C / (nc.A - nc.B);
        out.non_geometric = {z1, -z1};
    } else {
        out.non_geometric = {std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()};
    }
    return out;
}

double slope_val(Cx z_a, Cx z_b, double ta, double tb) {
    return std::log(std::abs(z_a) / std::abs(z_b)) / std::log(ta / tb);
}

}  // namespace

std::vector<CriticalPoint> critical_points(const Dp5Params& p) {
    p.validate();
    double t1 = p.t_numeric;
    double t2 = 0.9 * t1;
    auto s1 = solve_at(p, t1);
    auto s2 = solve_at(p, t2);
    NumericContext nc{std::pow(t1, p.a.to_double()), std::pow(t1, p.b.to_double()),
                      std::pow(t1, p.c.to_double())};

    // pair the quintic branches across the two t values by coarse valuation
    // and argument
    auto pair_key = [&](Cx z1, Cx z2, double t) {
        return std::pair<double, double>(std::log(std::abs(z1)) / std::log(t),
                                         std::log(std::abs(z2)) / std::log(t));
    };
    std::vector<int> match(s1.case2.size(), -1);
    std::vector<bool> used(s2.case2.size(), false);
    for (size_t i = 0; i < s1.case2.size(); ++i) {
        auto k1 = pair_key(s1.case2[i].first.first, s1.case2[i].first.second, t1);
        double best = 1e300;
        for (size_t j = 0; j < s2.case2.size(); ++j) {
            if (used[j]) continue;
            auto k2 = pair_key(s2.case2[j].first.first, s2.case2[j].first.second, t2);
            double d = std::abs(k1.first - k2.first) + std::abs(k1.second - k2.second) +
                       0.2 * std::abs(std::arg(s1.case2[i].first.first /
                                               (s2.case2[j].first.first + 1e-300)));
            if (d < best) {
                best = d;
                match[i] = int(j);
            }
        }
        used[match[i]] = true;
    }

    std::vector<CriticalPoint> out;
    auto push = [&](const std::string& chart, Cx z1, Cx z2, Cx lam, Cx z1b, Cx z2b) {
        CriticalPoint cp;
        cp.chart = chart;
        cp.z1 = z1;
        cp.z2 = z2;
        cp.lambda = lam;
        cp.val1 = slope_val(z1, z1b, t1, t2);
        cp.val2 = slope_val(z2, z2b, t1, t2);
        double fr = std::abs(nc.f(z1, z2)) / nc.f_scale(z1, z2);
        double gr = std::abs(nc.g(z1, z2)) / nc.g_scale(z1, z2);
        cp.grad_residual = std::max(fr, gr);
        // Hessian of W in the chart coordinates
        Cx w11 = 2.0 * (nc.A + nc.C) / (z1 * z1 * z1) + 2.0 * nc.A * z2 / (z1 * z1 * z1) +
                 2.0 * nc.C / (z1 * z1 * z1 * z2);
        Cx w22 = 2.0 * (nc.B + nc.C) / (z2 * z2 * z2) + 2.0 * nc.B * z1 / (z2 * z2 * z2) +
                 2.0 * nc.C / (z1 * z2 * z2 * z2);
        Cx w12 = -nc.A / (z1 * z1) - nc.B / (z2 * z2) + nc.C / (z1 * z1 * z2 * z2);
        Cx det = w11 * w22 - w12 * w12;
        double scale = std::abs(w11 * w22) + std::abs(w12 * w12) + 1e-300;
        cp.hessian_det = std::abs(det) / scale;
        cp.critical_value = z1 + z2 + (nc.A + nc.C) / z1 + (nc.B + nc.C) / z2 + nc.A * z2 / z1 +
                            nc.B * z1 / z2 + nc.C / (z1 * z2);
        out.push_back(cp);
    };

    push("immersed-1", s1.case1[0].first, s1.case1[0].second, 0,
         s2.case1[0].first, s2.case1[0].second);
    push("immersed-2", s1.case1[1].first, s1.case1[1].second, 0,
         s2.case1[1].first, s2.case1[1].second);
    for (size_t i = 0; i < s1.case2.size(); ++i) {
        auto& [z, lam] = s1.case2[i];
        auto& zb = s2.case2[match[i]].first;
        push("torus", z.first, z.second, lam, zb.first, zb.second);
    }

    // distinctness of the seven points
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j) {
            double d = std::abs(out[i].z1 - out[j].z1) + std::abs(out[i].z2 - out[j].z2);
            double s = std::abs(out[i].z1) + std::abs(out[j].z1) + 1e-300;
            if (d / s < 1e-8)
                throw Error("DegenerateParams", "two critical points collide at t_numeric");
        }

    CriticalPoint rejected;
    rejected.chart = "non-geometric";
    rejected.z1 = s1.non_geometric.first;
    rejected.z2 = s1.non_geometric.second;
    out.push_back(rejected);
    return out;
}

std::vector<ValuationCase> classify_valuations(const std::vector<CriticalPoint>& pts,
                                               const Dp5Params& p, double rel_tol, bool strict) {
    double a = p.a.to_double(), b = p.b.to_double(), c = p.c.to_double();
    std::vector<ValuationCase> out;
    auto near = [&](double measured, double predicted) {
        // a 0.02-absolute floor keeps predicted-zero exponents testable
        double scale = std::max(std::abs(predicted), 1.0);
        return std::abs(measured - predicted) <= rel_tol * scale;
    };
    for (int i = 0; i < int(pts.size()); ++i) {
        const auto& cp = pts[i];
        if (cp.chart == "non-geometric") continue;
        ValuationCase vc;
        vc.point_index = i;
        vc.measured1 = cp.val1;
        vc.measured2 = cp.val2;
        if (cp.chart == "immersed-1") {
            vc.label = "immersed-1";
            vc.predicted1 = 0;
            vc.predicted2 = b;
        } else if (cp.chart == "immersed-2") {
            vc.label = "immersed-2";
            vc.predicted1 = a;
            vc.predicted2 = 0;
        } else {
            bool low1 = cp.val1 <= c - b + 1e-9;
            bool low2 = cp.val2 <= c - a + 1e-9;
            if (low1 && low2) {
                vc.label = "i";
                vc.predicted1 = a / 2;
                vc.predicted2 = b / 2;
            } else if (low1 && !low2) {
                vc.label = "ii";
                vc.predicted1 = c / 2 - b / 4;
                vc.predicted2 = b / 2;
            } else if (!low1 && low2) {
                vc.label = "iii";
                vc.predicted1 = a / 2;
                vc.predicted2 = c / 2 - a / 4;
            } else {
                vc.label = "iv";
                vc.predicted1 = c / 3;
                vc.predicted2 = c / 3;
            }
        }
        vc.ok = near(vc.measured1, vc.predicted1) && near(vc.measured2, vc.predicted2);
        if (strict && !vc.ok)
            throw Error("ValuationMismatch",
                        "point " + std::to_string(i) + " off the case-" + vc.label + " prediction");
        out.push_back(vc);
    }
    return out;
}

NondegeneracyReport verify_nondegeneracy(const std::vector<CriticalPoint>& pts, const Dp5Params&) {
    NondegeneracyReport rep;
    rep.gamma2_is_negative_quintic = (gamma2_cleared() == -critical_quintic());
    rep.min_hessian_det = 1e300;
    rep.min_value_gap = 1e300;
    std::vector<const CriticalPoint*> geom;
    for (const auto& cp : pts)
        if (cp.chart != "non-geometric") geom.push_back(&cp);
    for (const auto* cp : geom) rep.min_hessian_det = std::min(rep.min_hessian_det, cp->hessian_det);
    for (size_t i = 0; i < geom.size(); ++i)
        for (size_t j = i + 1; j < geom.size(); ++j) {
            bool both_immersed = geom[i]->chart.rfind("immersed", 0) == 0 &&
                                 geom[j]->chart.rfind("immersed", 0) == 0;
            double gap = std::abs(geom[i]->critical_value - geom[j]->critical_value);
            if (both_immersed)
                rep.immersed_values_equal = gap < 1e-12;
            else
                rep.min_value_gap = std::min(rep.min_value_gap, gap);
        }
    rep.all_nondegenerate = rep.gamma2_is_negative_quintic && rep.min_hessian_det > 1e-8;
    return rep;
}

}  // namespace walls
