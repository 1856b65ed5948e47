#include "walls/lattice.hpp"

#include <algorithm>
#include <set>

namespace walls {

namespace {

// Angular band of a direction, counting counterclockwise from just above
// the positive x-axis. (1,0) itself lands in the last band.
int band(LatticeVector v) {
    if (v.y > 0) return 0;
    if (v.y == 0 && v.x < 0) return 1;
    if (v.y < 0) return 2;
    return 3;  // positive x-axis
}

}  // namespace

bool angle_less(LatticeVector a, LatticeVector b) {
    int ba = band(a), bb = band(b);
    if (ba != bb) return ba < bb;
    return wedge(a, b) > 0;
}

namespace {

// same bands shifted so the positive x-axis comes first
bool angle_less_from_zero(LatticeVector a, LatticeVector b) {
    auto zband = [](LatticeVector v) { return (band(v) + 1) % 4; };
    if (zband(a) != zband(b)) return zband(a) < zband(b);
    return wedge(a, b) > 0;
}

}  // namespace

Fan::Fan(std::vector<LatticeVector> rays, bool complete) : rays_(std::move(rays)), complete_(complete) {
    for (auto& r : rays_) {
        if (r.is_zero()) throw Error("ZeroVector", "fan ray (0,0)");
        auto [p, k] = primitive(r);
        if (k != 1) throw Error("NotPrimitive", "fan ray " + r.str() + " is not primitive");
    }
    std::set<LatticeVector> distinct(rays_.begin(), rays_.end());
    if (distinct.size() != rays_.size()) throw Error("DuplicateRay", "fan has repeated rays");
    std::sort(rays_.begin(), rays_.end(), angle_less_from_zero);
    for (size_t i = 0; complete_ && i < rays_.size(); ++i) {
        const auto& a = rays_[i];
        const auto& b = rays_[(i + 1) % rays_.size()];
        // consecutive rays of a complete fan span a strictly convex cone
        if (!(wedge(a, b) > 0))
            throw Error("NotComplete", "rays " + a.str() + ", " + b.str() + " do not span a positive cone");
    }
}

long long Fan::self_intersection(size_t i) const {
    const auto& prev = rays_[(i + rays_.size() - 1) % rays_.size()];
    const auto& next = rays_[(i + 1) % rays_.size()];
    const auto& v = rays_[i];
    LatticeVector s = prev + next;
    // s = c * v requires s parallel to v
    if (wedge(s, v) != 0) throw Error("NotSmooth", "neighbour sum of " + v.str() + " not parallel");
    long long c = (v.x != 0) ? s.x / v.x : s.y / v.y;
    if (c * v != s) throw Error("NotSmooth", "neighbour sum of " + v.str() + " not an integer multiple");
    return -c;
}

int Fan::ray_index(LatticeVector v) const {
    for (size_t i = 0; i < rays_.size(); ++i)
        if (rays_[i] == v) return int(i);
    return -1;
}

bool semifano_decomposition_check(const Fan& fan, LatticeVector w1, LatticeVector w2) {
    long long det = wedge(w1, w2);
    if (det != 1 && det != -1) throw Error("NotBasis", "w1, w2 do not form a unimodular basis");
    for (const auto& w : fan.rays()) {
        // solve w = b*w1 + c*w2 by Cramer
        long long b = wedge(w, w2) / det;
        long long c = wedge(w1, w) / det;
        if (b >= 2 || c >= 2) return false;
    }
    return true;
}

void ToricModel::validate() const {
    if (divisor_areas.size() != fan.size()) throw Error("BadModel", "one divisor area per fan ray required");
    for (const auto& a : divisor_areas)
        if (!(a > Rat(0))) throw Error("BadModel", "divisor areas must be positive");
    std::set<std::string> labels;
    for (const auto& bp : blowup_points) {
        if (bp.ray_index < 0 || size_t(bp.ray_index) >= fan.size()) throw Error("BadModel", "blowup ray index out of range");
        if (bp.mult < 1) throw Error("BadModel", "blowup multiplicity must be >= 1");
        if (!labels.insert(bp.label).second) throw Error("BadModel", "duplicate class label " + bp.label);
    }
    for (size_t i = 0; i < blowup_points.size(); ++i)
        for (size_t j = i + 1; j < blowup_points.size(); ++j) {
            const auto& p = blowup_points[i];
            const auto& q = blowup_points[j];
            if (p.ray_index == q.ray_index && p.position == q.position)
                throw Error("BadModel", "coincident blowup points on ray " + std::to_string(p.ray_index));
            // distinct rays can still induce the same support line when the
            // rays are parallel; reject that coincidence as well
            if (p.ray_index != q.ray_index) {
                LatticeVector dp = fan[p.ray_index], dq = fan[q.ray_index];
                if (wedge(dp, dq) == 0) {
                    Rat pos_q_in_p = (dp == dq) ? q.position : -q.position;
                    if (p.position == pos_q_in_p)
                        throw Error("BadModel", "blowup points on parallel rays share a wall line");
                }
            }
        }
    for (const auto& su : sphere_units)
        if (su.ray_index < 0 || size_t(su.ray_index) >= fan.size()) throw Error("BadModel", "sphere unit ray index out of range");
}

std::string ToricModel::area_label(size_t ray) const {
    return "b" + std::to_string(fan[ray].x) + "_" + std::to_string(fan[ray].y);
}

}  // namespace walls
