#ifndef WALLS_LATTICE_HPP
#define WALLS_LATTICE_HPP

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "walls/rational.hpp"

namespace walls {

// A point of the rank-2 lattice M.
struct LatticeVector {
    long long x = 0, y = 0;

    friend LatticeVector operator+(LatticeVector a, LatticeVector b) { return {a.x + b.x, a.y + b.y}; }
    friend LatticeVector operator-(LatticeVector a, LatticeVector b) { return {a.x - b.x, a.y - b.y}; }
    friend LatticeVector operator*(long long k, LatticeVector v) { return {k * v.x, k * v.y}; }
    LatticeVector operator-() const { return {-x, -y}; }
    friend bool operator==(LatticeVector a, LatticeVector b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(LatticeVector a, LatticeVector b) { return !(a == b); }
    friend bool operator<(LatticeVector a, LatticeVector b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
    bool is_zero() const { return x == 0 && y == 0; }

    std::string str() const { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }
};

// 90-degree counterclockwise rotation; primitive normal of a wall direction.
inline LatticeVector rot90(LatticeVector v) { return {-v.y, v.x}; }

inline long long dot(LatticeVector a, LatticeVector b) { return a.x * b.x + a.y * b.y; }

// v.x*w.y - v.y*w.x
inline long long wedge(LatticeVector v, LatticeVector w) { return v.x * w.y - v.y * w.x; }

// Splits v = k*p with p primitive, k >= 1.
inline std::pair<LatticeVector, long long> primitive(LatticeVector v) {
    if (v.is_zero()) throw Error("ZeroVector", "primitive() of (0,0)");
    long long g = std::gcd(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
    return {{v.x / g, v.y / g}, g};
}

struct RatPoint {
    Rat x, y;
    friend RatPoint operator+(const RatPoint& a, const RatPoint& b) { return {a.x + b.x, a.y + b.y}; }
    friend RatPoint operator-(const RatPoint& a, const RatPoint& b) { return {a.x - b.x, a.y - b.y}; }
    friend bool operator==(const RatPoint& a, const RatPoint& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const RatPoint& a, const RatPoint& b) { return !(a == b); }
    friend bool operator<(const RatPoint& a, const RatPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
    std::string str() const { return "(" + x.str() + "," + y.str() + ")"; }
};

inline RatPoint operator+(const RatPoint& p, LatticeVector v) { return {p.x + Rat(v.x), p.y + Rat(v.y)}; }
inline Rat cross(const RatPoint& a, LatticeVector v) { return a.x * Rat(v.y) - a.y * Rat(v.x); }

// Complete (or partial) fan of primitive rays, stored counterclockwise
// starting from the positive x-axis sector.
class Fan {
  public:
    Fan() = default;
    Fan(std::vector<LatticeVector> rays, bool complete);

    const std::vector<LatticeVector>& rays() const { return rays_; }
    bool complete() const { return complete_; }
    size_t size() const { return rays_.size(); }
    const LatticeVector& operator[](size_t i) const { return rays_[i]; }

    // -D_i^2 read off the neighbours: v_{i-1} + v_{i+1} = c * v_i.
    // Only meaningful for complete smooth fans.
    long long self_intersection(size_t i) const;

    int ray_index(LatticeVector v) const;  // -1 if absent

  private:
    std::vector<LatticeVector> rays_;
    bool complete_ = false;
};

// Exact counterclockwise angle comparison, angles taken in (0, 2pi] with
// the positive x-axis mapped to 2pi (a loop based just above it sees that
// crossing last).
bool angle_less(LatticeVector a, LatticeVector b);

// true iff every fan ray decomposes as b*w1 + c*w2 with b < 2 and c < 2.
bool semifano_decomposition_check(const Fan& fan, LatticeVector w1, LatticeVector w2);

struct BlowupPoint {
    int ray_index = 0;
    Rat position;       // transverse offset of the induced wall line
    long long mult = 1; // orbifold multiplicity r
    std::string label;  // exceptional class label
};

// Per-ray multiplicative unit entered into that ray's theta contribution
// (sphere-bubble correction); encoded as label -> exponent list of the
// extra factor (1 + prod labels).
struct SphereUnit {
    int ray_index = 0;
    std::vector<std::string> labels;
};

struct ToricModel {
    Fan fan;
    std::vector<Rat> divisor_areas;  // one positive entry per ray
    std::vector<BlowupPoint> blowup_points;
    std::vector<SphereUnit> sphere_units;

    void validate() const;
    std::string area_label(size_t ray) const;  // class label of the basic disc of ray i
};

}  // namespace walls

#endif
