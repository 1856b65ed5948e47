#ifndef WALLS_SCATTERING_HPP
#define WALLS_SCATTERING_HPP

#include <optional>
#include <string>
#include <vector>

#include "walls/lattice.hpp"
#include "walls/series.hpp"

namespace walls {

// Support (base, primitive direction, ray-or-line) plus a wall function.
// The function is 1 modulo the order ideal and all its non-constant terms
// carry lattice exponents that are positive multiples of the direction.
struct Wall {
    RatPoint base;
    LatticeVector dir;  // primitive
    bool is_line = false;
    TruncatedSeries f;

    void validate() const;
    bool contains(const RatPoint& p) const;
    std::string str() const;
};

class ScatteringDiagram {
  public:
    ScatteringDiagram() = default;
    ScatteringDiagram(ContextPtr ctx, int order_cap);
    ScatteringDiagram(ContextPtr ctx, std::vector<Wall> walls, int order_cap);

    const std::vector<Wall>& walls() const { return walls_; }
    int order_cap() const { return cap_; }
    const ContextPtr& context() const { return ctx_; }

    // supports equal as sets: merge by multiplying functions
    void add_wall(Wall w);

    std::vector<RatPoint> singular_points() const;

    ScatteringDiagram truncated(int new_cap) const;
    std::string str() const;

  private:
    ContextPtr ctx_;
    std::vector<Wall> walls_;
    int cap_ = 0;
};

// theta, stored by the images of z^(1,0) and z^(0,1).
struct PathAutomorphism {
    TruncatedSeries img_x, img_y;

    static PathAutomorphism identity(ContextPtr ctx, int cap);
    bool is_identity() const;
    TruncatedSeries apply(const TruncatedSeries& s) const;

    // determinant of the matrix of logarithmic partials; equals 1 for any
    // composition of elementary wall crossings
    TruncatedSeries log_jacobian() const;
};

// Elementary crossing composed onto auto. crossing_sign = +1 picks the
// primitive normal rot90(dir), -1 the opposite one.
PathAutomorphism cross_wall(const PathAutomorphism& aut, const Wall& wall, int crossing_sign);

// Counterclockwise loop around `center`, composing the walls through that
// point in angular crossing order starting just above the positive x-axis.
PathAutomorphism loop_product(const ScatteringDiagram& diagram, const RatPoint& center);

enum class ExecMode { serial, parallel };

// Order-by-order consistency completion; adds rays only. Deterministic,
// and the parallel mode produces the identical diagram.
ScatteringDiagram complete(const ScatteringDiagram& initial, int order_cap,
                           ExecMode mode = ExecMode::serial, bool reverse_point_order = false);

// One line per blowup point, direction the marked ray, function
// 1 + s_label * z^(mult * ray).
ScatteringDiagram blowup_initial_diagram(const ToricModel& model, int order_cap);

// Direction-grouped ray functions of a completed diagram; divisor-ray
// directions absorb the initial-line boundary factors 1 + s * z^(-m_i).
struct CanonicalRay {
    LatticeVector dir;
    TruncatedSeries f;
};
std::vector<CanonicalRay> canonical_assembly(const ScatteringDiagram& completed, const ToricModel& model);

}  // namespace walls

#endif
