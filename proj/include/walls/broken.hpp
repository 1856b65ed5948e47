#ifndef WALLS_BROKEN_HPP
#define WALLS_BROKEN_HPP

#include <string>
#include <vector>

#include "walls/scattering.hpp"

namespace walls {

// Piecewise-affine path record. Bends are listed from infinity toward the
// stop; the first segment carries the source monomial with coefficient 1.
struct BrokenLine {
    int source_ray = 0;

    struct Bend {
        RatPoint at;
        LatticeVector wall_dir;      // direction of the (merged) wall bent on
        LatticeVector pre_m, post_m; // lattice exponents around the bend
        ClassVec pre_q, post_q;
        Rat factor;                  // coefficient of the chosen automorphism term
    };
    std::vector<Bend> bends;

    Rat coeff;  // product of the bend factors
    LatticeVector final_m;
    ClassVec final_q;

    std::string str(const ClassContext& ctx) const;
};

// Theta contributions aggregated by final monomial.
struct Potential {
    TruncatedSeries series;
    std::string chamber_id;

    std::string str() const;
    int lattice_term_count() const;  // distinct lattice exponents
};

// Sign pattern of u against every wall support, in diagram order.
std::string chamber_id(const ScatteringDiagram& diagram, const RatPoint& u);

// All broken lines with stop u and initial direction the given fan ray,
// exhaustive within the diagram's order cap. The diagram must be consistent.
std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& diagram, const ToricModel& model,
                                               const RatPoint& u, int source_ray,
                                               ExecMode mode = ExecMode::serial);

// Sum of theta contributions over all divisor rays, with the configured
// per-ray sphere units multiplied in.
Potential potential(const ScatteringDiagram& diagram, const ToricModel& model, const RatPoint& u,
                    ExecMode mode = ExecMode::serial);

// Keeps exactly the terms pairing to zero with every listed exceptional
// class and drops those coordinates from the context.
Potential blowdown_filter(const Potential& pot, const std::vector<std::string>& exceptional_labels);

struct BrokenLineCount {
    int lines = 0;
    int lattice_terms = 0;
};

// Completes the model's initial diagram at the given cap and counts broken
// lines with stop at u over all source rays.
BrokenLineCount count_broken_lines(const ToricModel& model, const RatPoint& u, int order_cap,
                                   ExecMode mode = ExecMode::serial);

}  // namespace walls

#endif
