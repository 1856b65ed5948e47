#include "walls/scattering.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace walls {

namespace {

TruncatedSeries shift_lattice(const TruncatedSeries& s, LatticeVector d) {
    TruncatedSeries r(s.context(), s.cap());
    s.for_each([&](const Rat& c, LatticeVector m, const ClassVec& q) { r.add_term(c, m + d, q); });
    return r;
}

// z^m -> z^m f^{<n0,m>} as a ring morphism
TruncatedSeries apply_elementary(const TruncatedSeries& s, const Wall& w, LatticeVector n0) {
    TruncatedSeries ix = shift_lattice(w.f.power(n0.x), {1, 0});
    TruncatedSeries iy = shift_lattice(w.f.power(n0.y), {0, 1});
    return s.substitute(ix, iy);
}

struct CrossEvent {
    LatticeVector v;  // direction of the crossing point seen from the center
    size_t wall;
};

}  // namespace

void Wall::validate() const {
    if (dir.is_zero()) throw Error("ZeroVector", "wall direction (0,0)");
    auto [p, k] = primitive(dir);
    if (k != 1) throw Error("NotPrimitive", "wall direction must be primitive");
    if (!f.constant_term().is_one()) throw Error("BadWallFunction", "wall function must be 1 mod the order ideal");
    bool ok = true;
    f.for_each([&](const Rat&, LatticeVector m, const ClassVec& q) {
        if (m.is_zero() && q.is_zero()) return;  // the constant 1
        int ord = q.order(*f.context());
        if (ord < 1) ok = false;
        if (wedge(m, dir) != 0 || dot(m, dir) <= 0) ok = false;
    });
    if (!ok) throw Error("BadWallFunction", "wall function terms must be positive multiples of the direction");
}

bool Wall::contains(const RatPoint& p) const {
    RatPoint d = p - base;
    if (!(d.x * Rat(dir.y) - d.y * Rat(dir.x)).is_zero()) return false;
    if (is_line) return true;
    Rat t = (dir.x != 0) ? d.x / Rat(dir.x) : d.y / Rat(dir.y);
    return t >= Rat(0);
}

std::string Wall::str() const {
    std::ostringstream os;
    os << (is_line ? "line" : "ray") << " base=" << base.str() << " dir=" << dir.str() << " f=" << f.str();
    return os.str();
}

ScatteringDiagram::ScatteringDiagram(ContextPtr ctx, int order_cap) : ctx_(std::move(ctx)), cap_(order_cap) {}

ScatteringDiagram::ScatteringDiagram(ContextPtr ctx, std::vector<Wall> walls, int order_cap)
    : ctx_(std::move(ctx)), cap_(order_cap) {
    for (auto& w : walls) add_wall(std::move(w));
}

void ScatteringDiagram::add_wall(Wall w) {
    w.validate();
    if (w.f.cap() != cap_ || !(w.f.context() == ctx_ || (ctx_ && w.f.context() && *w.f.context() == *ctx_)))
        throw Error("ContextMismatch", "wall cap or context differs from the diagram");
    for (auto& ex : walls_) {
        if (ex.dir == w.dir && ex.is_line == w.is_line) {
            bool same_support = ex.is_line ? ex.contains(w.base) : (ex.base == w.base);
            if (same_support) {
                ex.f *= w.f;
                return;
            }
        }
    }
    walls_.push_back(std::move(w));
}

std::vector<RatPoint> ScatteringDiagram::singular_points() const {
    std::set<RatPoint> pts;
    for (const auto& w : walls_)
        if (!w.is_line) pts.insert(w.base);
    for (size_t i = 0; i < walls_.size(); ++i) {
        for (size_t j = i + 1; j < walls_.size(); ++j) {
            const Wall& a = walls_[i];
            const Wall& b = walls_[j];
            long long det = wedge(a.dir, b.dir);
            if (det == 0) continue;  // collinear overlaps commute crossing-wise
            // base_a + t*dir_a = base_b + s*dir_b
            RatPoint d = b.base - a.base;
            Rat t = (d.x * Rat(b.dir.y) - d.y * Rat(b.dir.x)) / Rat(det);
            RatPoint p{a.base.x + t * Rat(a.dir.x), a.base.y + t * Rat(a.dir.y)};
            if (a.contains(p) && b.contains(p)) pts.insert(p);
        }
    }
    return {pts.begin(), pts.end()};
}

ScatteringDiagram ScatteringDiagram::truncated(int new_cap) const {
    ScatteringDiagram r;
    r.ctx_ = ctx_;
    r.cap_ = new_cap;
    for (const auto& w : walls_) {
        Wall t{w.base, w.dir, w.is_line, w.f.truncated(new_cap)};
        if (t.f.is_one()) continue;
        r.walls_.push_back(std::move(t));
    }
    return r;
}

std::string ScatteringDiagram::str() const {
    std::vector<const Wall*> order;
    for (const auto& w : walls_) order.push_back(&w);
    std::sort(order.begin(), order.end(), [](const Wall* a, const Wall* b) {
        if (!(a->dir == b->dir)) return angle_less(a->dir, b->dir);
        if (!(a->base == b->base)) return a->base < b->base;
        return a->is_line < b->is_line;
    });
    std::ostringstream os;
    os << "order_cap " << cap_ << "\n";
    for (const Wall* w : order) os << w->str() << "\n";
    return os.str();
}

PathAutomorphism PathAutomorphism::identity(ContextPtr ctx, int cap) {
    return {TruncatedSeries::monomial(ctx, cap, Rat(1), {1, 0}, ClassVec(ctx->size())),
            TruncatedSeries::monomial(ctx, cap, Rat(1), {0, 1}, ClassVec(ctx->size()))};
}

bool PathAutomorphism::is_identity() const {
    auto id = identity(img_x.context(), img_x.cap());
    return img_x == id.img_x && img_y == id.img_y;
}

TruncatedSeries PathAutomorphism::apply(const TruncatedSeries& s) const { return s.substitute(img_x, img_y); }

TruncatedSeries PathAutomorphism::log_jacobian() const {
    auto ctx = img_x.context();
    int cap = img_x.cap();
    TruncatedSeries u1 = shift_lattice(img_x, {-1, 0});
    TruncatedSeries u2 = shift_lattice(img_y, {0, -1});
    TruncatedSeries l1 = u1.log1p(), l2 = u2.log1p();
    TruncatedSeries one = TruncatedSeries::one(ctx, cap);
    TruncatedSeries a11 = one + l1.dlog({1, 0});
    TruncatedSeries a12 = l1.dlog({0, 1});
    TruncatedSeries a21 = l2.dlog({1, 0});
    TruncatedSeries a22 = one + l2.dlog({0, 1});
    return a11 * a22 - a12 * a21;
}

PathAutomorphism cross_wall(const PathAutomorphism& aut, const Wall& wall, int crossing_sign) {
    if (crossing_sign != 1 && crossing_sign != -1)
        throw Error("TangentCrossing", "crossing sign must be +1 or -1");
    LatticeVector n0 = crossing_sign == 1 ? rot90(wall.dir) : -rot90(wall.dir);
    return {apply_elementary(aut.img_x, wall, n0), apply_elementary(aut.img_y, wall, n0)};
}

PathAutomorphism loop_product(const ScatteringDiagram& diagram, const RatPoint& center) {
    ContextPtr ctx = diagram.context();
    int cap = diagram.order_cap();
    std::vector<CrossEvent> events;
    size_t through = 0;
    for (size_t i = 0; i < diagram.walls().size(); ++i) {
        const Wall& w = diagram.walls()[i];
        if (!w.contains(center)) continue;
        ++through;
        if (!w.is_line && w.base == center) {
            events.push_back({w.dir, i});
        } else {
            events.push_back({w.dir, i});
            events.push_back({-w.dir, i});
        }
    }
    if (through == 1) throw Error("BasePointOnWall", "loop center lies on a single wall");
    std::sort(events.begin(), events.end(), [](const CrossEvent& a, const CrossEvent& b) {
        if (!(a.v == b.v)) return angle_less(a.v, b.v);
        return a.wall < b.wall;
    });
    PathAutomorphism acc = PathAutomorphism::identity(ctx, cap);
    for (const auto& ev : events) {
        const Wall& w = diagram.walls()[ev.wall];
        long long s = dot(w.dir, ev.v);
        LatticeVector n0 = s > 0 ? rot90(w.dir) : -rot90(w.dir);
        acc = {apply_elementary(acc.img_x, w, n0), apply_elementary(acc.img_y, w, n0)};
    }
    return acc;
}

namespace {

struct DefectTerm {
    LatticeVector m;  // full lattice exponent of the defect monomial
    ClassVec q;
    Rat c;  // derivation coefficient along rot90(prim(m))
};

std::vector<DefectTerm> extract_defect(const PathAutomorphism& aut, int order) {
    struct KeyLess {
        bool operator()(const std::pair<LatticeVector, ClassVec>& a,
                        const std::pair<LatticeVector, ClassVec>& b) const {
            if (!(a.first == b.first)) return a.first < b.first;
            return a.second < b.second;
        }
    };
    std::map<std::pair<LatticeVector, ClassVec>, std::pair<Rat, Rat>, KeyLess> acc;
    auto scan = [&](const TruncatedSeries& img, LatticeVector e, bool first) {
        TruncatedSeries u = shift_lattice(img, -e);
        u.for_each([&](const Rat& c, LatticeVector m, const ClassVec& q) {
            if (m.is_zero() && q.is_zero()) return;
            if (q.order(*img.context()) != order) return;
            auto& slot = acc[{m, q}];
            (first ? slot.first : slot.second) += c;
        });
    };
    scan(aut.img_x, {1, 0}, true);
    scan(aut.img_y, {0, 1}, false);
    std::vector<DefectTerm> out;
    for (const auto& [key, ab] : acc) {
        const auto& [m, q] = key;
        const auto& [ca, cb] = ab;
        if (ca.is_zero() && cb.is_zero()) continue;
        if (m.is_zero()) throw Error("InternalError", "lattice-free defect term");
        LatticeVector n = rot90(primitive(m).first);
        Rat c = (n.x != 0) ? ca / Rat(n.x) : cb / Rat(n.y);
        // the defect of a volume-preserving composition is a log derivation
        if (!(ca * Rat(n.y) == cb * Rat(n.x)))
            throw Error("InternalError", "defect is not a log derivation");
        if (!c.is_zero()) out.push_back({m, q, c});
    }
    return out;
}

}  // namespace

ScatteringDiagram complete(const ScatteringDiagram& initial, int order_cap, ExecMode mode,
                           bool reverse_point_order) {
    if (order_cap > initial.order_cap())
        throw Error("ContextMismatch", "initial diagram cap below requested completion order");
    ScatteringDiagram diag = initial.truncated(order_cap);
    for (int k = 1; k <= order_cap; ++k) {
        for (int round = 0;; ++round) {
            if (round > 200) throw Error("InternalError", "completion did not stabilise at order " + std::to_string(k));
            auto pts = diag.singular_points();
            if (reverse_point_order) std::reverse(pts.begin(), pts.end());
            ScatteringDiagram view = diag.truncated(k);
            std::vector<std::vector<DefectTerm>> defects(pts.size());
            auto job = [&](size_t i) {
                std::vector<const Wall*> through;
                for (const auto& w : view.walls())
                    if (w.contains(pts[i])) through.push_back(&w);
                if (through.size() < 2) return;
                defects[i] = extract_defect(loop_product(view, pts[i]), k);
            };
            // tiny sweeps are not worth the fork
            if (mode == ExecMode::parallel && pts.size() >= 16) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
                for (long long i = 0; i < (long long)pts.size(); ++i) job(size_t(i));
            } else {
                for (size_t i = 0; i < pts.size(); ++i) job(i);
            }
            bool inserted = false;
            for (size_t i = 0; i < pts.size(); ++i) {
                for (const auto& d : defects[i]) {
                    LatticeVector dirp = primitive(d.m).first;
                    TruncatedSeries f = TruncatedSeries::one(diag.context(), order_cap);
                    f.add_term(-d.c, d.m, d.q);
                    diag.add_wall(Wall{pts[i], dirp, false, std::move(f)});
                    inserted = true;
                }
            }
            if (!inserted) break;
        }
    }
    return diag;
}

ScatteringDiagram blowup_initial_diagram(const ToricModel& model, int order_cap) {
    model.validate();
    std::vector<std::string> labels;
    for (const auto& bp : model.blowup_points) labels.push_back(bp.label);
    for (size_t i = 0; i < model.fan.size(); ++i) labels.push_back(model.area_label(i));
    for (const auto& su : model.sphere_units)
        for (const auto& l : su.labels)
            if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    auto ctx = ClassContext::make(labels);
    ScatteringDiagram d(ctx, order_cap);
    for (const auto& bp : model.blowup_points) {
        LatticeVector dir = model.fan[bp.ray_index];
        LatticeVector n_cw{dir.y, -dir.x};
        Rat n2 = Rat(dot(n_cw, n_cw));
        RatPoint base{bp.position * Rat(n_cw.x) / n2, bp.position * Rat(n_cw.y) / n2};
        TruncatedSeries f = TruncatedSeries::one(ctx, order_cap);
        ClassVec q(ctx->size());
        q.e[ctx->index_of(bp.label)] = 1;
        f.add_term(Rat(1), bp.mult * dir, q);
        d.add_wall(Wall{base, dir, true, std::move(f)});
    }
    // reject initial lines meeting three at a point: the completion would
    // merge singular points of unrelated walls
    auto pts = d.singular_points();
    for (const auto& p : pts) {
        int through = 0;
        for (const auto& w : d.walls())
            if (w.contains(p)) ++through;
        if (through > 2)
            throw Error("DegenerateArrangement",
                        "three initial lines through " + p.str() + "; perturb the blowup positions");
    }
    return d;
}

std::vector<CanonicalRay> canonical_assembly(const ScatteringDiagram& completed, const ToricModel& model) {
    std::map<LatticeVector, TruncatedSeries> grouped;
    auto ctx = completed.context();
    int cap = completed.order_cap();
    auto slot = [&](LatticeVector dir) -> TruncatedSeries& {
        auto it = grouped.find(dir);
        if (it == grouped.end()) it = grouped.emplace(dir, TruncatedSeries::one(ctx, cap)).first;
        return it->second;
    };
    for (const auto& w : completed.walls()) {
        if (w.is_line) continue;  // initial lines enter through the boundary factors below
        // a scattered direction must sit in some cone of the fan with
        // integral nonnegative coordinates
        bool resolved = false;
        size_t cones = model.fan.complete() ? model.fan.size() : model.fan.size() - 1;
        for (size_t i = 0; i < cones && !resolved; ++i) {
            LatticeVector v1 = model.fan[i];
            LatticeVector v2 = model.fan[(i + 1) % model.fan.size()];
            long long det = wedge(v1, v2);
            if (det == 0) continue;
            long long a = wedge(w.dir, v2);
            long long b = wedge(v1, w.dir);
            if (a % det || b % det) continue;
            a /= det;
            b /= det;
            if (a >= 0 && b >= 0) resolved = true;
        }
        if (!resolved)
            throw Error("UnresolvedDirection", "ray direction " + w.dir.str() + " outside fan cones");
        slot(w.dir) *= w.f;
    }
    for (const auto& bp : model.blowup_points) {
        LatticeVector dir = model.fan[bp.ray_index];
        ClassVec q(ctx->size());
        q.e[ctx->index_of(bp.label)] = 1;
        TruncatedSeries fac = TruncatedSeries::one(ctx, cap);
        fac.add_term(Rat(1), (-bp.mult) * dir, q);
        slot(dir) *= fac;
    }
    std::vector<CanonicalRay> out;
    for (auto& [dir, f] : grouped)
        if (!f.is_one()) out.push_back({dir, std::move(f)});
    std::sort(out.begin(), out.end(), [](const CanonicalRay& a, const CanonicalRay& b) { return angle_less(a.dir, b.dir); });
    return out;
}

}  // namespace walls
